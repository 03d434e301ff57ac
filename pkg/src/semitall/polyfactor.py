"""Roots and real monic divisors of y^u + 1, with exact divisor counts.

The roots of y^u + 1 are exp(i*pi*(2k+1)/u) for k = 0..u-1.  Complex
conjugation acts on the index set as k <-> u-1-k, so whether a monic
divisor (a product over an index subset) has real coefficients is a purely
combinatorial question: the subset must be closed under that pairing.
Floating point enters only when coefficients are expanded.

``alpha_closed`` gives the closed-form count of real monic degree-(m-1)
divisors of y^u + 1 with u = m+n-2; ``alpha_brute`` recounts it by direct
enumeration of all index subsets and serves as its independent oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ResourceLimitError

# alpha_brute refuses to enumerate more subsets than this.
BRUTE_SUBSET_LIMIT = 10**7

# Full 2^u bitmask scans are used only below this width; wider universes
# with few subsets fall back to streaming combinations.
_SCAN_MAX_BITS = 27


@dataclass(frozen=True)
class RootIndex:
    """Index k of the root exp(i*pi*(2k+1)/u) of y^u + 1."""

    u: int
    k: int

    def __post_init__(self):
        if self.u < 1:
            raise ValueError("u must be a positive integer")
        if not 0 <= self.k < self.u:
            raise ValueError(f"root index k={self.k} outside [0, {self.u})")

    @property
    def value(self) -> complex:
        return complex(np.exp(1j * np.pi * (2 * self.k + 1) / self.u))

    @property
    def conjugate_index(self) -> int:
        return self.u - 1 - self.k


@dataclass(frozen=True)
class ComplexPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    coeffs: tuple[complex, ...]
    monic: bool = True

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("empty coefficient list")
        if self.monic and self.coeffs[-1] != 1:
            raise ValueError("monic polynomial must have leading coefficient 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_real(self, tol: float = 1e-12) -> bool:
        return max(abs(c.imag) for c in self.coeffs) < tol

    def real_coeffs(self, tol: float = 1e-12) -> np.ndarray:
        if not self.is_real(tol):
            raise ValueError("polynomial has non-real coefficients")
        return np.array([c.real for c in self.coeffs])

    def __call__(self, y: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc


@dataclass(frozen=True)
class DivisorSelection:
    """A subset of root indices of y^u + 1 naming one monic divisor."""

    u: int
    subset: tuple[int, ...]

    def __post_init__(self):
        if self.u < 1:
            raise ValueError("u must be a positive integer")
        if list(self.subset) != sorted(set(self.subset)):
            raise ValueError("subset must be sorted and duplicate-free")
        if self.subset and not (0 <= self.subset[0] and self.subset[-1] < self.u):
            raise ValueError("subset indices outside [0, u)")

    @property
    def degree(self) -> int:
        return len(self.subset)

    def is_conjugation_closed(self) -> bool:
        s = set(self.subset)
        return all((self.u - 1 - k) in s for k in s)

    def to_poly(self) -> ComplexPoly:
        roots = neg_roots(self.u)[list(self.subset)]
        return ComplexPoly(tuple(_expand_from_roots(roots)))


def neg_roots(u: int) -> np.ndarray:
    """All u roots of y^u + 1, ordered by angle index k = 0..u-1."""
    if not isinstance(u, (int, np.integer)) or u < 1:
        raise ValueError("u must be a positive integer")
    k = np.arange(u)
    return np.exp(1j * np.pi * (2 * k + 1) / u)


def _expand_from_roots(roots) -> np.ndarray:
    """Monic coefficient vector (lowest degree first) of prod (y - r).

    Multiplies in a balanced tree over a bit-reversed leaf order: partial
    products over an arc of clustered roots grow binomially, while spread
    subsets keep every intermediate coefficient small.
    """
    roots = np.asarray(roots, dtype=complex)
    if len(roots) == 0:
        return np.array([1.0 + 0.0j])
    width = max(1, (len(roots) - 1).bit_length())
    order = sorted(range(len(roots)), key=lambda i: int(format(i, f"0{width}b")[::-1], 2))
    polys = [np.array([-roots[i], 1.0 + 0.0j]) for i in order]
    while len(polys) > 1:
        merged = [np.convolve(polys[i], polys[i + 1]) for i in range(0, len(polys) - 1, 2)]
        if len(polys) % 2:
            merged.append(polys[-1])
        polys = merged
    c = polys[0]
    c[-1] = 1.0  # exact monic normalization
    return c


def closed_selections(u: int, d: int) -> list[DivisorSelection]:
    """All conjugation-closed d-subsets of the root indices of y^u + 1.

    Closed subsets are unions of conjugate pairs {k, u-1-k}, plus the
    self-conjugate index (u-1)/2 (the root -1) when u is odd.
    """
    if u < 1:
        raise ValueError("u must be a positive integer")
    if not 1 <= d <= u:
        raise ValueError(f"degree d={d} outside [1, {u}]")
    pairs = [(k, u - 1 - k) for k in range(u // 2)]
    fixed = (u - 1) // 2 if u % 2 == 1 else None
    out = []
    for use_fixed in ((False,) if fixed is None else (False, True)):
        rem = d - (1 if use_fixed else 0)
        if rem < 0 or rem % 2 == 1:
            continue
        for chosen in itertools.combinations(pairs, rem // 2):
            idx = [k for pair in chosen for k in pair]
            if use_fixed:
                idx.append(fixed)
            out.append(DivisorSelection(u, tuple(sorted(idx))))
    out.sort(key=lambda s: s.subset)
    return out


def real_divisors(u: int, d: int) -> list[ComplexPoly]:
    """All monic degree-d divisors of y^u + 1 with real coefficients.

    Reality is decided combinatorially (closure under k <-> u-1-k); the
    expanded coefficients are symmetrized to drop residual imaginary
    round-off only after that check.
    """
    out = []
    for sel in closed_selections(u, d):
        poly = sel.to_poly()
        if not poly.is_real():
            raise AssertionError(
                f"conjugation-closed selection {sel.subset} expanded to non-real coefficients"
            )
        coeffs = tuple(complex(c.real, 0.0) for c in poly.coeffs[:-1]) + (1.0 + 0.0j,)
        out.append(ComplexPoly(coeffs))
    return out


def alpha_closed(m: int, n: int) -> int:
    """Closed-form count of real monic degree-(m-1) divisors of y^(m+n-2) + 1.

    Exact integer arithmetic; the four branches follow the parities of m
    and n (the pairing on root indices has a fixed point exactly when
    u = m+n-2 is odd, and closed subsets of odd size need one).
    """
    _check_format(m, n)
    u = m + n - 2
    if m % 2 == 1 and n % 2 == 1:
        return math.comb(u // 2, (m - 1) // 2)
    if m % 2 == 0 and n % 2 == 1:
        return math.comb((u - 1) // 2, (m - 2) // 2)
    if m % 2 == 1 and n % 2 == 0:
        return math.comb((u - 1) // 2, (m - 1) // 2)
    return 0


def alpha_brute(m: int, n: int) -> int:
    """Count conjugation-closed (m-1)-subsets by direct enumeration.

    Independent oracle for ``alpha_closed``: every (m-1)-subset of the u
    root indices is visited and tested for closure under k <-> u-1-k.
    Raises ResourceLimitError when there are more than ``BRUTE_SUBSET_LIMIT``
    subsets.
    """
    _check_format(m, n)
    u, d = m + n - 2, m - 1
    total = math.comb(u, d)
    if total > BRUTE_SUBSET_LIMIT:
        raise ResourceLimitError(
            f"C({u},{d}) = {total} subsets exceeds the enumeration budget {BRUTE_SUBSET_LIMIT}"
        )
    if u <= _SCAN_MAX_BITS and 2**u <= 64 * total:
        return int(_closed_size_histogram(u)[d])
    return _count_closed_streaming(u, d)


def divisor_to_point(h: ComplexPoly, m: int) -> np.ndarray:
    """Map a real monic degree-(m-1) divisor h to its variety point.

    With h(y) = y^(m-1) - a_(m-1) y^(m-2) - ... - a_2 y - a_1 the point is
    (a_1, ..., a_(m-1), -1), i.e. a_j is the negated coefficient of
    y^(j-1) in h.
    """
    if not h.monic or h.coeffs[-1] != 1:
        raise ValueError("divisor must be monic")
    if h.degree != m - 1:
        raise ValueError(f"divisor degree {h.degree} does not match m-1 = {m - 1}")
    if not h.is_real():
        raise ValueError("divisor must have real coefficients")
    a = [-c.real for c in h.coeffs[: m - 1]]
    a.append(-1.0)
    return np.array(a)


def _check_format(m: int, n: int) -> None:
    if not (isinstance(m, (int, np.integer)) and isinstance(n, (int, np.integer))):
        raise ValueError("m and n must be integers")
    if m < 3 or m > n:
        raise ValueError(f"format requires 3 <= m <= n, got (m, n) = ({m}, {n})")


# -- vectorized subset enumeration -----------------------------------------

def _bit_reverse32(x: np.ndarray, u: int) -> np.ndarray:
    x = x.astype(np.uint32)
    x = ((x >> np.uint32(1)) & np.uint32(0x55555555)) | ((x & np.uint32(0x55555555)) << np.uint32(1))
    x = ((x >> np.uint32(2)) & np.uint32(0x33333333)) | ((x & np.uint32(0x33333333)) << np.uint32(2))
    x = ((x >> np.uint32(4)) & np.uint32(0x0F0F0F0F)) | ((x & np.uint32(0x0F0F0F0F)) << np.uint32(4))
    x = ((x >> np.uint32(8)) & np.uint32(0x00FF00FF)) | ((x & np.uint32(0x00FF00FF)) << np.uint32(8))
    x = (x >> np.uint32(16)) | (x << np.uint32(16))
    return x >> np.uint32(32 - u)


def _bit_reverse64(x: np.ndarray, u: int) -> np.ndarray:
    x = x.astype(np.uint64)
    x = ((x >> np.uint64(1)) & np.uint64(0x5555555555555555)) | ((x & np.uint64(0x5555555555555555)) << np.uint64(1))
    x = ((x >> np.uint64(2)) & np.uint64(0x3333333333333333)) | ((x & np.uint64(0x3333333333333333)) << np.uint64(2))
    x = ((x >> np.uint64(4)) & np.uint64(0x0F0F0F0F0F0F0F0F)) | ((x & np.uint64(0x0F0F0F0F0F0F0F0F)) << np.uint64(4))
    x = ((x >> np.uint64(8)) & np.uint64(0x00FF00FF00FF00FF)) | ((x & np.uint64(0x00FF00FF00FF00FF)) << np.uint64(8))
    x = ((x >> np.uint64(16)) & np.uint64(0x0000FFFF0000FFFF)) | ((x & np.uint64(0x0000FFFF0000FFFF)) << np.uint64(16))
    x = (x >> np.uint64(32)) | (x << np.uint64(32))
    return x >> np.uint64(64 - u)


def _popcount32(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint32)
    x = x - ((x >> np.uint32(1)) & np.uint32(0x55555555))
    x = (x & np.uint32(0x33333333)) + ((x >> np.uint32(2)) & np.uint32(0x33333333))
    x = (x + (x >> np.uint32(4))) & np.uint32(0x0F0F0F0F)
    return (x * np.uint32(0x01010101)) >> np.uint32(24)


@lru_cache(maxsize=None)
def _closed_size_histogram(u: int) -> tuple[int, ...]:
    """Histogram by size of all conjugation-closed subsets of the u indices.

    Scans every bitmask in [0, 2^u); a mask is closed iff it equals its own
    bit reversal within u bits.
    """
    counts = np.zeros(u + 1, dtype=np.int64)
    chunk = 1 << 22
    for start in range(0, 1 << u, chunk):
        stop = min(start + chunk, 1 << u)
        masks = np.arange(start, stop, dtype=np.uint32)
        closed = masks[masks == _bit_reverse32(masks, u)]
        counts += np.bincount(_popcount32(closed), minlength=u + 1)[: u + 1]
    return tuple(int(c) for c in counts)


def _count_closed_streaming(u: int, d: int) -> int:
    """Closure count over all C(u, d) subsets, streamed in chunks."""
    count = 0
    chunk = 1 << 17
    it = itertools.combinations(range(u), d)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        idx = np.array(block, dtype=np.uint64)
        masks = np.bitwise_or.reduce(np.uint64(1) << idx, axis=1)
        count += int(np.count_nonzero(masks == _bit_reverse64(masks, u)))
    return count
