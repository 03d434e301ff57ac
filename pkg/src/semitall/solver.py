"""Homotopy continuation for the bilinear kernel system M(a, B) b = 0.

The start system is the start frame's tensor A', whose solution set is
fully known: each of the C(u, m-1) monic degree-(m-1) divisors h of
y^u + 1 yields one projective solution, obtained from the coefficient
point of h by the slice reordering that defines A'.  Exactly the
conjugation-closed divisor selections give real solutions, so the real
start count equals the closed-form divisor count.

Charts: a lives on the affine slice a_m = -1 and b on c . b = 1 for a
fixed random real vector c, making the tracked system square of size
u + 2 in the m + n = u + 2 unknowns (a, b).  Paths follow

    B(t) = (1 - t) * gamma * B_from + t * B_to,   t: 0 -> 1,

with gamma a random unit complex constant (detour away from the
discriminant), an order-2 tangent predictor, a Newton corrector with a
basin guard, and adaptive step control.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import polyfactor, tensorcore
from .errors import (
    AT_INFINITY,
    CHART_ESCAPE,
    PATH_DIVERGE,
    PATH_STALL,
    WARN_MULTIPLICITY,
    DegenerateStartError,
    PathError,
    ResourceLimitError,
)

# Tracked coordinates beyond this norm are declared at infinity.
BLOWUP_NORM = 1e8

# Hard cap on the number of start solutions (and hence paths) per solve.
PATH_BUDGET = 10**4

# Relative gap under which the second-smallest singular value of the
# pencil marks a kernel of dimension >= 2.
DEGENERATE_KERNEL_TOL = 1e-8


@dataclass
class TrackOptions:
    """Knobs of the predictor-corrector tracker.

    ``initial_step`` doubles as the step-size ceiling; ``gamma`` is sampled
    per solve when left unset.
    """

    initial_step: float = 0.05
    min_step: float = 1e-10
    max_newton: int = 10
    corrector_tol: float = 1e-12
    gamma: complex | None = None
    max_steps: int = 20000

    def __post_init__(self):
        if self.initial_step <= 0 or self.min_step <= 0 or self.corrector_tol <= 0:
            raise ValueError("step sizes and tolerances must be positive")
        if self.max_newton < 1 or self.max_steps < 1:
            raise ValueError("iteration budgets must be positive")
        if self.gamma is not None and self.gamma == 0:
            raise ValueError("gamma must be nonzero")


@dataclass(eq=False)
class Solution:
    """One kernel pair (a, b) with a_m = -1 and c . b = 1.

    ``residual`` is the 2-norm of M(a, B) b at the owning tensor B;
    ``source`` is the divisor index subset for start solutions and
    "TRACKED" for continuation endpoints.
    """

    a: np.ndarray
    b: np.ndarray
    residual: float
    is_real: bool
    source: tuple[int, ...] | str
    path_index: int | None = None


@dataclass
class PathFailureInfo:
    index: int
    reason: str
    detail: str = ""


@dataclass(eq=False)
class SolveReport:
    """All endpoints of one continuation run plus bookkeeping.

    Path conservation: len(solutions) + len(failures) equals n_paths.
    ``complete`` is True only when no path failed, which is what the
    rank certificate requires before trusting the real count.
    """

    m: int
    n: int
    n_paths: int
    solutions: list[Solution]
    failures: list[PathFailureInfo]
    real_count: int
    gamma: complex
    chart_b: np.ndarray
    seed: object

    @property
    def complete(self) -> bool:
        return not self.failures


def _sample_gamma(rng: np.random.Generator) -> complex:
    # unit modulus, bounded away from +-1 so the detour stays off the
    # real axis crossings
    theta = rng.uniform(0.1 * np.pi, 0.9 * np.pi)
    if rng.random() < 0.5:
        theta = -theta
    return complex(np.cos(theta), np.sin(theta))


def _chart_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def start_solutions(
    m: int,
    n: int,
    c: np.ndarray | None = None,
    frame: tensorcore.StartFrame | None = None,
    seed: object = 0,
) -> list[Solution]:
    """All C(u, m-1) kernel pairs of the start tensor A'.

    For each (m-1)-subset of the roots of y^u + 1, the coefficient point of
    the corresponding monic divisor is remapped through the slice reorder
    that defines A', rescaled onto the a_m = -1 chart, and paired with the
    one-dimensional kernel of the pencil there.  Exactly the
    conjugation-closed subsets are flagged real.
    """
    fmt = tensorcore.Format(m, n)
    u = fmt.u
    n_paths = math.comb(u, m - 1)
    if n_paths > PATH_BUDGET:
        raise ResourceLimitError(f"C({u},{m - 1}) = {n_paths} paths exceeds the budget {PATH_BUDGET}")
    if frame is None:
        frame = tensorcore.make_start_frame(m, n)
    if c is None:
        c = _chart_vector(n, np.random.default_rng(seed))
    roots = polyfactor.neg_roots(u)
    order = tensorcore.slice_reorder(m)

    out = []
    for idx, subset in enumerate(itertools.combinations(range(u), m - 1)):
        coeffs = polyfactor._expand_from_roots(roots[list(subset)])
        x = np.append(-coeffs[: m - 1], -1.0 + 0.0j)
        xprime = np.array([sign * x[src] for (src, sign) in order])
        if abs(xprime[-1]) < 1e-12:
            raise PathError(CHART_ESCAPE, f"start subset {subset} leaves the a_m = -1 chart")
        a = (-1.0 / xprime[-1]) * xprime
        a[-1] = -1.0 + 0.0j

        M = tensorcore.pencil_eval(a, frame.Aprime)
        _, svals, Vh = np.linalg.svd(M)
        if svals[-2] < DEGENERATE_KERNEL_TOL * svals[0]:
            raise DegenerateStartError(f"start subset {subset} has kernel dimension >= 2")
        b = Vh[-1].conj()
        cb = c @ b
        if abs(cb) < 1e-10:
            raise DegenerateStartError(f"chart vector nearly orthogonal to the kernel at {subset}")
        b = b / cb
        residual = float(np.linalg.norm(M @ b))
        closed = all((u - 1 - k) in set(subset) for k in subset)
        out.append(
            Solution(a=a, b=b, residual=residual, is_real=closed, source=subset, path_index=idx)
        )
    return out


class _Homotopy:
    """Square system [M(a, B(t)) b ; d.a - delta ; c.b - 1] and its derivatives."""

    def __init__(self, B_from, B_to, gamma, c, d, delta):
        self.B0 = gamma * B_from
        self.dB = B_to - self.B0
        self.u, self.n, self.m = B_from.shape
        self.c = c
        self.d = d
        self.delta = delta

    def slices_at(self, t: float) -> np.ndarray:
        return self.B0 + t * self.dB

    def residual(self, z: np.ndarray, t: float) -> np.ndarray:
        a, b = z[: self.m], z[self.m :]
        M = np.tensordot(self.slices_at(t), a, axes=([2], [0]))
        return np.concatenate([M @ b, [self.d @ a - self.delta, self.c @ b - 1.0]])

    def jacobian(self, z: np.ndarray, t: float) -> np.ndarray:
        a, b = z[: self.m], z[self.m :]
        Bk = self.slices_at(t)
        M = np.tensordot(Bk, a, axes=([2], [0]))
        Ja = np.tensordot(Bk, b, axes=([1], [0]))
        J = np.zeros((self.u + 2, self.m + self.n), dtype=complex)
        J[: self.u, : self.m] = Ja
        J[: self.u, self.m :] = M
        J[self.u, : self.m] = self.d
        J[self.u + 1, self.m :] = self.c
        return J

    def t_derivative(self, z: np.ndarray) -> np.ndarray:
        a, b = z[: self.m], z[self.m :]
        M = np.tensordot(self.dB, a, axes=([2], [0]))
        return np.concatenate([M @ b, [0.0, 0.0]])

    def tangent(self, z: np.ndarray, t: float) -> np.ndarray:
        return np.linalg.solve(self.jacobian(z, t), -self.t_derivative(z))


def _newton(hom: _Homotopy, z: np.ndarray, t: float, tol: float, iters: int):
    """Corrector; returns (z, converged, total correction size)."""
    moved = 0.0
    for _ in range(iters):
        r = hom.residual(z, t)
        rn = float(np.max(np.abs(r)))
        if not np.isfinite(rn) or rn > 1e10:
            return z, False, moved
        if rn < tol * max(1.0, float(np.max(np.abs(z)))):
            return z, True, moved
        try:
            dz = np.linalg.solve(hom.jacobian(z, t), -r)
        except np.linalg.LinAlgError:
            return z, False, moved
        z = z + dz
        moved += float(np.max(np.abs(dz)))
    r = hom.residual(z, t)
    ok = bool(np.max(np.abs(r)) < tol * max(1.0, np.max(np.abs(z))))
    return z, ok, moved


def track_path(
    B_from: tensorcore.Tensor3,
    B_to: tensorcore.Tensor3,
    s0: Solution,
    opts: TrackOptions,
    c: np.ndarray | None = None,
    d: np.ndarray | None = None,
    delta: complex = -1.0 + 0.0j,
) -> Solution:
    """Continue one start solution from B_from to B_to.

    Raises PathError with reason PATH_STALL (step underflow or step
    budget), PATH_DIVERGE (corrector breakdown at the endpoint) or
    AT_INFINITY (coordinate blowup).  The b chart defaults to the affine
    functional that s0 already satisfies; the a chart defaults to a_m = -1.
    """
    u, n, m = B_from.shape
    if B_to.shape != (u, n, m):
        raise ValueError(f"target shape {B_to.shape} does not match start shape {(u, n, m)}")
    gamma = opts.gamma if opts.gamma is not None else complex(0.6, 0.8)
    if c is None:
        # recover an affine functional pinning b from the start point itself
        c = s0.b.conj() / np.linalg.norm(s0.b) ** 2
    if d is None:
        d = np.zeros(m, dtype=complex)
        d[-1] = 1.0
    hom = _Homotopy(B_from.data, B_to.data, gamma, c, d, delta)
    z = np.concatenate([s0.a, s0.b]).astype(complex)

    t, h = 0.0, opts.initial_step
    steps = 0
    while t < 1.0:
        steps += 1
        if steps > opts.max_steps:
            raise PathError(PATH_STALL, f"step budget {opts.max_steps} exhausted at t = {t:.6f}")
        h = min(h, 1.0 - t)
        try:
            k1 = hom.tangent(z, t)
            k2 = hom.tangent(z + 0.5 * h * k1, t + 0.5 * h)
        except np.linalg.LinAlgError:
            h *= 0.5
            if h < opts.min_step:
                raise PathError(PATH_STALL, f"singular tangent at t = {t:.6f}")
            continue
        z_pred = z + h * k2
        z_new, ok, moved = _newton(hom, z_pred, t + h, opts.corrector_tol, opts.max_newton)
        pred_len = float(np.max(np.abs(h * k2)))
        # basin guard: the corrector must only refine the prediction,
        # a large pullback signals a possible jump onto another path
        if ok and moved > 0.25 * max(pred_len, 1e-8):
            ok = False
        if ok:
            t += h
            z = z_new
            if moved < 0.01 * max(pred_len, 1e-8):
                h = min(h * 2.0, opts.initial_step)
        else:
            h *= 0.5
            if h < opts.min_step:
                raise PathError(PATH_STALL, f"step underflow at t = {t:.6f}")
        if np.max(np.abs(z)) > BLOWUP_NORM:
            raise PathError(AT_INFINITY, f"coordinate norm beyond {BLOWUP_NORM:.0e} at t = {t:.6f}")

    z, ok, _ = _newton(hom, z, 1.0, opts.corrector_tol, max(opts.max_newton, 20))
    if not ok:
        raise PathError(PATH_DIVERGE, "endpoint correction did not converge at t = 1")
    a, b = z[:m], z[m:]
    M = np.tensordot(B_to.data.astype(complex), a, axes=([2], [0]))
    return Solution(
        a=a,
        b=b,
        residual=float(np.linalg.norm(M @ b)),
        is_real=False,
        source="TRACKED",
        path_index=s0.path_index,
    )


def _aligned(v: np.ndarray) -> np.ndarray:
    # divide by the entry of largest modulus; a projective point is real
    # iff the result is entrywise real
    return v / v[int(np.argmax(np.abs(v)))]


def projectively_real(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    a2, b2 = _aligned(a), _aligned(b)
    return bool(max(np.max(np.abs(a2.imag)), np.max(np.abs(b2.imag))) < tol)


def real_filter(solutions: list[Solution], tol: float = 1e-6) -> list[Solution]:
    """Solutions whose (a, b) pair is real as a pair of projective points.

    b is first rescaled by its entry of largest modulus (phase alignment);
    conjugate pairs are accepted or rejected together by symmetry.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return [s for s in solutions if projectively_real(s.a, s.b, tol)]


def solve_all(
    B: tensorcore.Tensor3,
    opts: TrackOptions | None = None,
    seed: object = 0,
    jobs: int = 1,
    dedup_tol: float = 1e-6,
    reality_tol: float = 1e-6,
) -> SolveReport:
    """Track every start path to the target tensor B (shape u x n x m).

    Endpoints closer than ``dedup_tol`` in chart coordinates are collisions:
    the later path is recorded as a WARN_MULTIPLICITY failure rather than
    merged silently.  Paths hitting infinity are retried once with a random
    complex chart on a.  Determinism: (seed, gamma, chart) fix every path.
    """
    u, n, m = B.shape
    fmt = tensorcore.Format(m, n)
    if u != fmt.u:
        raise ValueError(f"target shape {B.shape} has u = {u}, expected {fmt.u}")
    opts = opts or TrackOptions()
    rng = np.random.default_rng(seed)
    c = _chart_vector(n, rng)
    gamma = opts.gamma if opts.gamma is not None else _sample_gamma(rng)
    opts = replace(opts, gamma=gamma)

    frame = tensorcore.make_start_frame(m, n)
    starts = start_solutions(m, n, c=c, frame=frame)
    n_paths = len(starts)

    def run_one(idx: int):
        s0 = starts[idx]
        try:
            return ("ok", track_path(frame.Aprime, B, s0, opts, c=c))
        except PathError as exc:
            if exc.reason != AT_INFINITY:
                return ("fail", PathFailureInfo(idx, exc.reason, str(exc)))
        # one retry on a random complex a-chart for points leaving a_m = -1
        retry_rng = np.random.default_rng((_seed_entropy(seed), 7919, idx))
        d = retry_rng.standard_normal(m) + 1j * retry_rng.standard_normal(m)
        d /= np.linalg.norm(d)
        a0 = s0.a / (d @ s0.a)
        s0r = Solution(a=a0, b=s0.b, residual=s0.residual, is_real=s0.is_real,
                       source=s0.source, path_index=idx)
        try:
            sol = track_path(frame.Aprime, B, s0r, opts, c=c, d=d, delta=1.0 + 0.0j)
        except PathError as exc:
            return ("fail", PathFailureInfo(idx, exc.reason, "retry chart: " + str(exc)))
        a = sol.a
        if abs(a[-1]) < 1e-8 * np.max(np.abs(a)):
            return ("fail", PathFailureInfo(idx, CHART_ESCAPE, "endpoint stays outside the a_m = -1 chart"))
        a = -a / a[-1]
        a[-1] = -1.0 + 0.0j
        b = sol.b / (c @ sol.b)
        M = np.tensordot(B.data.astype(complex), a, axes=([2], [0]))
        return ("ok", Solution(a=a, b=b, residual=float(np.linalg.norm(M @ b)),
                               is_real=False, source="TRACKED", path_index=idx))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, range(n_paths)))
    else:
        results = [run_one(i) for i in range(n_paths)]

    solutions: list[Solution] = []
    failures: list[PathFailureInfo] = []
    for idx, (status, payload) in enumerate(results):
        if status == "fail":
            failures.append(payload)
            continue
        sol = payload
        collided = False
        for kept in solutions:
            dist = max(
                float(np.max(np.abs(sol.a - kept.a))),
                float(np.max(np.abs(sol.b - kept.b))),
            )
            if dist < dedup_tol:
                failures.append(PathFailureInfo(idx, WARN_MULTIPLICITY,
                                                f"endpoint within {dedup_tol:g} of path {kept.path_index}"))
                collided = True
                break
        if not collided:
            solutions.append(sol)

    for sol in solutions:
        sol.is_real = projectively_real(sol.a, sol.b, reality_tol)
    real_count = sum(1 for s in solutions if s.is_real)

    return SolveReport(
        m=m,
        n=n,
        n_paths=n_paths,
        solutions=solutions,
        failures=failures,
        real_count=real_count,
        gamma=gamma,
        chart_b=c,
        seed=seed,
    )


def _seed_entropy(seed: object) -> int:
    if isinstance(seed, (int, np.integer)):
        return int(seed)
    if isinstance(seed, (tuple, list)):
        acc = 0
        for part in seed:
            acc = (acc * 1000003 + int(part)) % (2**63)
        return acc
    return 0
