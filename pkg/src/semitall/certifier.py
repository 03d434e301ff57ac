"""Rank-p certification and the Monte Carlo experiments built on it.

A tensor T of shape n x p x m inside the sigma chart has rank exactly p
iff the truncated Kronecker vectors psi(a, b) of the real kernel pairs of
its transfer tensor Y = mu(sigma(T)) span all of R^p.  The certifier runs
the continuation solver on Y, keeps the real solutions, and measures that
span.  A verdict of RANK_GT_P is only ever issued when every path is
accounted for, because the "rank > p" direction needs the full real
solution set; any lost path degrades the verdict to INCONCLUSIVE.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import solver, tensorcore
from .errors import ChartViolationError

RANK_P = "RANK_P"
RANK_GT_P = "RANK_GT_P"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class CertifyOptions:
    """Tolerances and seeds for one certification run.

    ``span_tol`` sits at a cliff for near-degenerate inputs and is
    deliberately exposed; the other knobs rarely need changing.
    """

    span_tol: float = 1e-8
    reality_tol: float = 1e-6
    degenerate_tol: float = 1e-8
    chart_cond: float = tensorcore.DEFAULT_COND_LIMIT
    seed: object = 0
    jobs: int = 1
    track: solver.TrackOptions = field(default_factory=solver.TrackOptions)


@dataclass(eq=False)
class RankCertificate:
    """Verdict plus the evidence needed to audit it."""

    verdict: str
    dim_u: int
    real_points: int
    n_paths: int
    paths_failed: int
    tolerances: dict
    psi_matrix: np.ndarray
    notes: list[str]
    m: int
    n: int
    p: int


@dataclass
class ExperimentStats:
    """Verdict tallies of a seeded Monte Carlo experiment."""

    trials: int
    counts: dict
    eps: float | None
    seed: object
    m: int
    n: int
    mean_dim_u: float

    def fraction(self, verdict: str) -> float:
        return self.counts.get(verdict, 0) / self.trials if self.trials else 0.0


def certify(T: tensorcore.Tensor3, opts: CertifyOptions | None = None) -> RankCertificate:
    """Certify whether the n x p x m tensor T has rank p or rank > p.

    Raises ChartViolationError when T sits outside the sigma chart.  A
    kernel of dimension >= 2 at any real solution poisons the span count
    and forces INCONCLUSIVE, as does any path failure.
    """
    opts = opts or CertifyOptions()
    n, p, m = T.shape
    fmt = tensorcore.Format(m, n)
    if p != fmt.p:
        raise ValueError(f"tensor shape {T.shape} is not critical: expected p = {fmt.p}")

    W = tensorcore.sigma(T, cond_limit=opts.chart_cond)
    Y = tensorcore.mu(W, fmt)
    report = solver.solve_all(
        Y,
        opts.track,
        seed=opts.seed,
        jobs=opts.jobs,
        reality_tol=opts.reality_tol,
    )

    notes: list[str] = []
    psi_vectors = []
    degenerate = False
    for sol in report.solutions:
        if not sol.is_real:
            continue
        a_real = np.real(solver._aligned(sol.a))
        b_real = np.real(solver._aligned(sol.b))
        pencil = tensorcore.pencil_eval(a_real, Y)
        svals = np.linalg.svd(pencil, compute_uv=False)
        if svals[-2] < opts.degenerate_tol * svals[0]:
            degenerate = True
            notes.append(f"path {sol.path_index}: kernel dimension >= 2 at a real solution")
            continue
        psi_vectors.append(tensorcore.psi(a_real, b_real, fmt))

    psi_matrix = np.column_stack(psi_vectors) if psi_vectors else np.zeros((fmt.p, 0))
    dim_u = tensorcore.span_dim(psi_vectors, opts.span_tol)
    real_points = sum(1 for s in report.solutions if s.is_real)

    if report.failures:
        verdict = INCONCLUSIVE
        notes.extend(f"path {f.index}: {f.reason}" for f in report.failures)
    elif degenerate:
        verdict = INCONCLUSIVE
    elif dim_u == fmt.p:
        verdict = RANK_P
    else:
        verdict = RANK_GT_P

    return RankCertificate(
        verdict=verdict,
        dim_u=dim_u,
        real_points=real_points,
        n_paths=report.n_paths,
        paths_failed=len(report.failures),
        tolerances={
            "span_tol": opts.span_tol,
            "reality_tol": opts.reality_tol,
            "degenerate_tol": opts.degenerate_tol,
            "chart_cond": opts.chart_cond,
            "corrector_tol": opts.track.corrector_tol,
        },
        psi_matrix=psi_matrix,
        notes=notes,
        m=m,
        n=n,
        p=fmt.p,
    )


def _child_opts(opts: CertifyOptions, seed: object) -> CertifyOptions:
    return CertifyOptions(
        span_tol=opts.span_tol,
        reality_tol=opts.reality_tol,
        degenerate_tol=opts.degenerate_tol,
        chart_cond=opts.chart_cond,
        seed=seed,
        jobs=opts.jobs,
        track=opts.track,
    )


def _tally(fmt, certs, trials, eps, seed):
    counts = {RANK_P: 0, RANK_GT_P: 0, INCONCLUSIVE: 0}
    dims = []
    for cert in certs:
        counts[cert.verdict] += 1
        if cert.verdict != INCONCLUSIVE or cert.n_paths:
            dims.append(cert.dim_u)
    mean_dim = float(np.mean(dims)) if dims else 0.0
    return ExperimentStats(
        trials=trials, counts=counts, eps=eps, seed=seed, m=fmt.m, n=fmt.n, mean_dim_u=mean_dim
    )


def perturb_experiment(
    fmt: tensorcore.Format,
    eps: float,
    trials: int,
    seed: object = 0,
    opts: CertifyOptions | None = None,
    collect=None,
) -> ExperimentStats:
    """Certify tau(W0 + eps * R) for Gaussian R, ``trials`` times.

    Near the start frame every real kernel pair continues one of the real
    divisor points, so dim U stays at most the real divisor count and, when
    that count is below p, every sample is a rank > p tensor.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    opts = opts or CertifyOptions()
    frame = tensorcore.make_start_frame(fmt.m, fmt.n)
    certs = []
    for trial in range(trials):
        rng = np.random.default_rng((solver._seed_entropy(seed), 101, trial))
        W = frame.W0 + eps * rng.standard_normal((fmt.u, fmt.p))
        T = tensorcore.tau(W, fmt)
        cert = certify(T, _child_opts(opts, (solver._seed_entropy(seed), 102, trial)))
        certs.append(cert)
        if collect is not None:
            collect(trial, cert)
    return _tally(fmt, certs, trials, eps, seed)


def global_experiment(
    fmt: tensorcore.Format,
    trials: int,
    seed: object = 0,
    opts: CertifyOptions | None = None,
    collect=None,
) -> ExperimentStats:
    """Certify i.i.d. standard normal tensors of shape n x p x m.

    For formats with plural typical ranks both RANK_P and RANK_GT_P occur
    with positive frequency; chart violations (measure zero) are tallied
    as INCONCLUSIVE.
    """
    opts = opts or CertifyOptions()
    certs = []
    for trial in range(trials):
        rng = np.random.default_rng((solver._seed_entropy(seed), 201, trial))
        T = tensorcore.Tensor3(rng.standard_normal((fmt.n, fmt.p, fmt.m)))
        try:
            cert = certify(T, _child_opts(opts, (solver._seed_entropy(seed), 202, trial)))
        except ChartViolationError:
            cert = RankCertificate(
                verdict=INCONCLUSIVE, dim_u=0, real_points=0, n_paths=0, paths_failed=0,
                tolerances={}, psi_matrix=np.zeros((fmt.p, 0)),
                notes=["sigma chart violation"], m=fmt.m, n=fmt.n, p=fmt.p,
            )
        certs.append(cert)
        if collect is not None:
            collect(trial, cert)
    return _tally(fmt, certs, trials, None, seed)
