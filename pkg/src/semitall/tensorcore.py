"""Dense order-3 tensors, flattenings, transfer maps, and the start frame.

Axis convention, fixed once: a tensor of shape (d1, d2, d3) consists of d3
slices of size d1 x d2, slice k being ``data[:, :, k]``.  The horizontal
flattening fl1 concatenates the slices left to right (d1 x d2*d3); the
vertical flattening fl2 stacks them top to bottom (d1*d3 x d2).  All
reorientations between the two tensor spaces used here (n x p x m on the
rank-certificate side, u x n x m on the kernel side) are explicit.

For a format with 3 <= m <= n, p = (m-1)(n-1)+1 and u = m+n-2 the module
provides:

* the transfer maps sigma/tau between n x p x m tensors and u x p matrices,
  and mu/nu between u x p matrices and u x n x m tensors, each pair
  inverting the other on its chart;
* the integer base tensor whose slice pencil has a fully known singular
  locus, and the reordered/permuted copy of it whose trailing flattening
  block is exactly -E_u (the start frame of the continuation solver);
* the slice pencil M(x, B) = x_1 B_1 + ... + x_m B_m, the truncated
  Kronecker vector psi(a, b), and a numerical span dimension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import jsonio
from .errors import ChartViolationError

FL1 = "fl1"
FL2 = "fl2"

# Chart inversions refuse blocks with condition number beyond this.
DEFAULT_COND_LIMIT = 1e12


@dataclass(frozen=True)
class Format:
    """Critical semi-tall format, stored as the pair (m, n) with 3 <= m <= n.

    The derived dimensions are p = (m-1)(n-1)+1 and u = mn - p = m+n-2.
    """

    m: int
    n: int

    def __post_init__(self):
        if not (3 <= self.m <= self.n):
            raise ValueError(f"format requires 3 <= m <= n, got ({self.m}, {self.n})")

    @property
    def p(self) -> int:
        return (self.m - 1) * (self.n - 1) + 1

    @property
    def u(self) -> int:
        return self.m + self.n - 2


@dataclass(frozen=True, eq=False)
class Tensor3:
    """Dense real order-3 tensor with the fixed slice convention."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim != 3:
            raise ValueError(f"expected 3 axes, got shape {arr.shape}")
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape

    @property
    def nslices(self) -> int:
        return self.data.shape[2]

    def slice(self, k: int) -> np.ndarray:
        return self.data[:, :, k]

    @property
    def slices(self) -> list[np.ndarray]:
        return [self.data[:, :, k] for k in range(self.nslices)]


@dataclass(frozen=True, eq=False)
class StartFrame:
    """Base tensor A, its permuted/reordered copy A', P, and W0.

    Invariants (exact integer equalities, verified on construction): the
    last u columns of fl1(Aprime) equal -E_u, W0 is the leading p-column
    block of fl1(Aprime), and mu(W0) = Aprime.
    """

    A: Tensor3
    Aprime: Tensor3
    P: np.ndarray
    W0: np.ndarray
    perm: tuple[int, ...]


def flatten(T: Tensor3, mode: str) -> np.ndarray:
    """fl1 (horizontal slice concatenation) or fl2 (vertical slice stack)."""
    if mode == FL1:
        return np.hstack(T.slices)
    if mode == FL2:
        return np.vstack(T.slices)
    raise ValueError(f"unknown flattening mode {mode!r}")


def unflatten(M: np.ndarray, shape: tuple[int, int, int], mode: str) -> Tensor3:
    """Inverse of ``flatten`` for the stated target shape."""
    d1, d2, d3 = shape
    M = np.asarray(M, dtype=float)
    if mode == FL1:
        if M.shape != (d1, d2 * d3):
            raise ValueError(f"fl1 matrix shape {M.shape} does not match {shape}")
        return Tensor3(M.reshape(d1, d3, d2).transpose(0, 2, 1))
    if mode == FL2:
        if M.shape != (d1 * d3, d2):
            raise ValueError(f"fl2 matrix shape {M.shape} does not match {shape}")
        return Tensor3(M.reshape(d3, d1, d2).transpose(1, 2, 0))
    raise ValueError(f"unknown flattening mode {mode!r}")


def pencil_eval(x, B: Tensor3) -> np.ndarray:
    """Linear slice pencil x_1 B_1 + ... + x_m B_m; x may be complex."""
    x = np.asarray(x)
    if x.shape != (B.nslices,):
        raise ValueError(f"coefficient vector length {x.shape} does not match {B.nslices} slices")
    return np.tensordot(B.data, x, axes=([2], [0]))


def psi(a, b, fmt: Format) -> np.ndarray:
    """First p entries of the Kronecker product a (x) b.

    Equals the blocks a_1 b, ..., a_(m-2) b followed by the leading
    n-m+2 entries of a_(m-1) b; the a_m block is always truncated away.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (fmt.m,) or b.shape != (fmt.n,):
        raise ValueError(f"expected vectors of length {fmt.m} and {fmt.n}")
    return np.kron(a, b)[: fmt.p]


def span_dim(vectors, tol: float) -> int:
    """Numerical rank of the span of the given vectors.

    Counts singular values above tol times the largest one.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    vecs = list(vectors)
    if not vecs:
        return 0
    M = np.column_stack(vecs)
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


# -- transfer maps ----------------------------------------------------------

def _vspace_format(T: Tensor3) -> Format:
    n, p, m = T.shape
    fmt = Format(m, n)
    if p != fmt.p:
        raise ValueError(f"shape {T.shape} is not an n x p x m tensor at the critical p = {fmt.p}")
    return fmt


def _kernel_format(Y: Tensor3) -> Format:
    u, n, m = Y.shape
    fmt = Format(m, n)
    if u != fmt.u:
        raise ValueError(f"shape {Y.shape} is not a u x n x m tensor with u = {fmt.u}")
    return fmt


def _guarded_solve(block: np.ndarray, rhs: np.ndarray, cond_limit: float, what: str) -> np.ndarray:
    cond = np.linalg.cond(block)
    if not np.isfinite(cond) or cond > cond_limit:
        raise ChartViolationError(f"{what} block has condition number {cond:.3e} beyond {cond_limit:.1e}")
    return np.linalg.solve(block, rhs)


def sigma(T: Tensor3, cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """Chart coordinate of an n x p x m tensor: bottom block of fl2 times
    the inverse of its leading p x p block."""
    fmt = _vspace_format(T)
    F2 = flatten(T, FL2)
    top = F2[: fmt.p]
    bottom = F2[fmt.p :]
    return _guarded_solve(top.T, bottom.T, cond_limit, "leading fl2").T


def tau(W: np.ndarray, fmt: Format) -> Tensor3:
    """Tensor in the sigma chart with coordinate W: unflatten (E_p; W)."""
    W = np.asarray(W, dtype=float)
    if W.shape != (fmt.u, fmt.p):
        raise ValueError(f"expected a {fmt.u} x {fmt.p} matrix, got {W.shape}")
    stacked = np.vstack([np.eye(fmt.p), W])
    return unflatten(stacked, (fmt.n, fmt.p, fmt.m), FL2)


def nu(Y: Tensor3, cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """Chart coordinate of a u x n x m tensor: minus the inverse of the
    trailing u x u block of fl1 times the leading p columns."""
    fmt = _kernel_format(Y)
    F1 = flatten(Y, FL1)
    trailing = F1[:, fmt.p :]
    leading = F1[:, : fmt.p]
    return -_guarded_solve(trailing, leading, cond_limit, "trailing fl1")


def mu(W: np.ndarray, fmt: Format) -> Tensor3:
    """Kernel-side tensor with coordinate W: unflatten (W, -E_u)."""
    W = np.asarray(W, dtype=float)
    if W.shape != (fmt.u, fmt.p):
        raise ValueError(f"expected a {fmt.u} x {fmt.p} matrix, got {W.shape}")
    M = np.hstack([W, -np.eye(fmt.u)])
    return unflatten(M, (fmt.u, fmt.n, fmt.m), FL1)


# -- base tensor and start frame --------------------------------------------

def make_base_tensor(m: int, n: int) -> Tensor3:
    """The integer u x n x m tensor whose pencil drops rank exactly at the
    divisor points of y^u + 1.

    Slices 1..m-1 are copies of E_n shifted down k-1 rows; the last slice
    has -e_1 in its final column and E_(n-1) in the lower-left block.
    """
    fmt = Format(m, n)
    u = fmt.u
    data = np.zeros((u, n, m))
    for k in range(m - 1):
        data[k + np.arange(n), np.arange(n), k] = 1.0
    data[0, n - 1, m - 1] = -1.0
    data[m - 1 + np.arange(n - 1), np.arange(n - 1), m - 1] = 1.0
    return Tensor3(data)


def slice_reorder(m: int) -> list[tuple[int, float]]:
    """Slice reordering (source index, sign) defining the start frame.

    New slice order: slices 2..m-2 unchanged, then slice m, then -slice
    (m-1), then -slice 1 (indices here are 1-based; the returned sources
    are 0-based).
    """
    if m < 3:
        raise ValueError("m must be at least 3")
    return [(j, 1.0) for j in range(1, m - 2)] + [(m - 1, 1.0), (m - 2, -1.0), (0, -1.0)]


def make_start_frame(m: int, n: int) -> StartFrame:
    """Build the start frame: A, the reordered A'', the permutation P with
    trailing-block identity, A' = P A'', and W0.

    P is found by matching columns of the trailing fl1 block to -e_i and
    then verified exactly; the closed-form block swap (rows n+1..u to the
    front) is asserted as a cross-check.
    """
    fmt = Format(m, n)
    u, p = fmt.u, fmt.p
    A = make_base_tensor(m, n)
    order = slice_reorder(m)
    App = Tensor3(np.stack([sign * A.slice(src) for (src, sign) in order], axis=2))

    trailing = flatten(App, FL1)[:, p:]
    perm = []
    for i in range(u):
        col = trailing[:, i]
        rows = np.flatnonzero(col == -1.0)
        if len(rows) != 1 or np.abs(trailing[rows[0]]).sum() != 1.0:
            raise RuntimeError(f"no unique row matching -e_{i + 1} in the trailing block")
        perm.append(int(rows[0]))
    assert perm == list(range(n, u)) + list(range(n)), "permutation is not the expected block swap"

    P = np.zeros((u, u), dtype=int)
    P[np.arange(u), perm] = 1
    Aprime = Tensor3(App.data[perm, :, :])
    F1 = flatten(Aprime, FL1)
    if not np.array_equal(F1[:, p:], -np.eye(u)):
        raise RuntimeError("trailing block of the permuted start tensor is not -E_u")
    W0 = F1[:, :p].copy()
    return StartFrame(A=A, Aprime=Aprime, P=P, W0=W0, perm=tuple(perm))


def random_rank_sum(fmt: Format, r: int, rng: np.random.Generator) -> Tensor3:
    """Sum of r random Gaussian rank-1 tensors of shape n x p x m."""
    data = np.zeros((fmt.n, fmt.p, fmt.m))
    for _ in range(r):
        x = rng.standard_normal(fmt.n)
        y = rng.standard_normal(fmt.p)
        z = rng.standard_normal(fmt.m)
        data += np.einsum("i,j,k->ijk", x, y, z)
    return Tensor3(data)


# -- tensor file format ------------------------------------------------------

def save_tensor(T: Tensor3, path) -> None:
    """Write a tensor as JSON with fields ``shape`` and flat row-major
    ``data``, floats at 17 significant digits (exact decimal round-trip)."""
    doc = {"shape": list(T.shape), "data": T.data.reshape(-1)}
    with open(path, "w") as fh:
        fh.write(jsonio.dumps(doc))


def load_tensor(path) -> Tensor3:
    with open(path) as fh:
        doc = json.load(fh)
    shape = tuple(int(d) for d in doc["shape"])
    if len(shape) != 3:
        raise ValueError(f"tensor file has shape {shape}, expected 3 axes")
    data = np.array([float(x) for x in doc["data"]])
    if data.size != shape[0] * shape[1] * shape[2]:
        raise ValueError("tensor file data length does not match its shape")
    return Tensor3(data.reshape(shape))
