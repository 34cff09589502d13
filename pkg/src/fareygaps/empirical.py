"""Gap statistics measured on actual Farey sequences.

Normalization of a list x_0 < ... < x_N: gaps are scaled by N / (x_N - x_0)
so their mean is one.  Threshold counts compare gaps against xi/Q^2 with
exact integer cross-multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .farey import ALL, ContractViolation, FareyFilter, count, farey_arrays, iter_farey_chunks

EXACT_LIMIT = 10**7
BIN_RANGE = (0.0, 20.0)
N_BINS = 10**4


def as_fraction(xi) -> Fraction:
    """Rational threshold from int, Fraction, decimal string or 'p/q'."""
    if isinstance(xi, Fraction):
        return xi
    if isinstance(xi, float):
        return Fraction(xi)
    return Fraction(str(xi)) if isinstance(xi, str) else Fraction(xi)


def _filtered_chunks(Q: int, filt: FareyFilter, chunk: int = 1 << 20) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Filtered F_Q in chunks where each chunk starts with the last element of the previous one."""
    carry = None
    for a, q in iter_farey_chunks(Q, chunk):
        keep = filt.mask(a, q)
        a, q = a[keep], q[keep]
        if carry is not None:
            a = np.concatenate(([carry[0]], a))
            q = np.concatenate(([carry[1]], q))
        if len(a):
            carry = (a[-1], q[-1])
        if len(a) >= 2:
            yield a, q


def _filtered(Q: int, filt: FareyFilter) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    if Q <= 4000:
        yield farey_arrays(Q, filt)
    else:
        yield from _filtered_chunks(Q, filt)


@dataclass
class EmpiricalCDF:
    """Right-continuous empirical CDF of normalized gaps.

    In exact mode ``sorted_gaps`` holds every value.  In binned mode (more
    than ten million gaps) only ``bin_counts`` over ``bin_edges`` and an
    overflow count are kept, and evaluation is exact at the bin edges.
    """

    n: int
    count_N: int
    span: Fraction
    sorted_gaps: np.ndarray | None = None
    bin_edges: np.ndarray | None = None
    bin_counts: np.ndarray | None = None
    overflow: int = 0

    @property
    def binned(self) -> bool:
        return self.sorted_gaps is None

    def __call__(self, s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        if not self.binned:
            out = np.searchsorted(self.sorted_gaps, s_arr, side="right") / self.n
        else:
            cum = np.concatenate(([0], np.cumsum(self.bin_counts)))
            idx = np.searchsorted(self.bin_edges, s_arr, side="right") - 1
            idx = np.clip(idx, 0, len(cum) - 1)
            out = cum[idx] / self.n
            out[s_arr >= self.bin_edges[-1]] = (self.n - self.overflow) / self.n
            out[np.isinf(s_arr) & (s_arr > 0)] = 1.0
        return float(out[0]) if np.ndim(s) == 0 else out

    def support_points(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(points, F at each point, left limit at each point)."""
        if not self.binned:
            u, cnt = np.unique(self.sorted_gaps, return_counts=True)
            right = np.cumsum(cnt) / self.n
            left = right - cnt / self.n
            return u, right, left
        cum = np.cumsum(self.bin_counts) / self.n
        pts = self.bin_edges[1:]
        left = np.concatenate(([0.0], cum[:-1]))
        return pts, cum, left

    def mean(self) -> float:
        if self.binned:
            raise ValueError("mean is not kept in binned mode")
        return float(self.sorted_gaps.mean())


def _normalized_gaps(a: np.ndarray, q: np.ndarray, N: int, a0: int, q0: int) -> np.ndarray:
    det = a[1:] * q[:-1] - a[:-1] * q[1:]
    num = det.astype(np.float64) * (float(N) * q0)
    den = (q[1:] * q[:-1]).astype(np.float64) * float(q0 - a0)
    return num / den


def gap_cdf(Q: int, filt: FareyFilter = ALL, exact_limit: int = EXACT_LIMIT, n_bins: int = N_BINS) -> EmpiricalCDF:
    """Empirical CDF of the normalized gaps of the filtered F_Q.

    Above ``exact_limit`` gaps the values are histogrammed into ``n_bins``
    equal bins on [0, 20] plus an overflow count.
    """
    total = count(Q, filt)
    if total < 2:
        raise ContractViolation(f"filtered F_{Q} has {total} element(s); need at least 2")
    N = total - 1
    first = next(_filtered(Q, filt))
    a0, q0 = int(first[0][0]), int(first[1][0])
    span = 1 - Fraction(a0, q0)
    if N <= exact_limit:
        parts = [_normalized_gaps(a, q, N, a0, q0) for a, q in _filtered(Q, filt)]
        g = np.sort(np.concatenate(parts))
        return EmpiricalCDF(N, N, span, sorted_gaps=g)
    edges = np.linspace(*BIN_RANGE, n_bins + 1)
    counts = np.zeros(n_bins, dtype=np.int64)
    over = 0
    for a, q in _filtered(Q, filt):
        g = _normalized_gaps(a, q, N, a0, q0)
        h, _ = np.histogram(g[g < BIN_RANGE[1]], bins=edges)
        counts += h
        over += int(np.count_nonzero(g >= BIN_RANGE[1]))
    return EmpiricalCDF(N, N, span, bin_edges=edges, bin_counts=counts, overflow=over)


def ks_distance(emp: EmpiricalCDF, curve: Callable) -> float:
    """sup_s |F_emp(s) - F(s)|, checked on both sides of every jump of F_emp."""
    pts, right, left = emp.support_points()
    f = np.asarray(curve(pts), dtype=float)
    return float(max(np.max(np.abs(right - f)), np.max(np.abs(left - f))))


def _det_le(det: np.ndarray, qq: np.ndarray, Q: int, xi: Fraction) -> np.ndarray:
    # det/(q q') <= xi/Q^2  <=>  det * Q^2 * den <= num * q q'
    lhs_max = int(det.max(initial=0)) * Q * Q * xi.denominator
    rhs_max = int(qq.max(initial=0)) * xi.numerator
    if max(lhs_max, rhs_max) < 2**62:
        return det * (Q * Q * xi.denominator) <= qq * xi.numerator
    lhs = det.astype(object) * (Q * Q * xi.denominator)
    rhs = qq.astype(object) * xi.numerator
    return np.array(lhs <= rhs, dtype=bool)


def threshold_count(Q: int, filt: FareyFilter, xi) -> int:
    """Number of consecutive pairs of the filtered F_Q whose gap is at most xi/Q^2."""
    xi = as_fraction(xi)
    if xi <= 0:
        raise ContractViolation("xi must be positive")
    total = 0
    for a, q in _filtered(Q, filt):
        det = a[1:] * q[:-1] - a[:-1] * q[1:]
        total += int(np.count_nonzero(_det_le(det, q[1:] * q[:-1], Q, xi)))
    return total


@dataclass(frozen=True)
class PairCount:
    d: int
    k: int
    Q: int
    count: int

    @property
    def density(self) -> float:
        return self.count / self.Q**2


def pair_counts(Q: int, d: int, kmax: int) -> dict[int, PairCount]:
    """Consecutive pairs of fractions with denominator coprime to d, by determinant k <= kmax."""
    filt = FareyFilter.denominator_coprime(d)
    tally = np.zeros(kmax + 1, dtype=np.int64)
    for a, q in _filtered(Q, filt):
        det = a[1:] * q[:-1] - a[:-1] * q[1:]
        det = det[det <= kmax]
        tally += np.bincount(det, minlength=kmax + 1)[: kmax + 1]
    return {k: PairCount(d, k, Q, int(tally[k])) for k in range(1, kmax + 1)}


def pair_count_k(Q: int, d: int, k: int) -> PairCount:
    if k < 1:
        raise ContractViolation("k must be >= 1")
    return pair_counts(Q, d, k)[k]


@dataclass
class CaseDecomposition:
    """Threshold count of the numerator-filtered set split by what each gap skips.

    Case 1: the two fractions are neighbours in F_Q.  Case 2: exactly one
    fraction with ell | numerator sits between them.
    """

    Q: int
    ell: int
    xi: Fraction
    direct: int
    NQ: int
    M1: int
    M2: int
    N1: int
    N2: int
    max_skipped: int
    gap_identity_violations: int

    @property
    def consistent(self) -> bool:
        return self.direct == self.N1 + self.N2 and self.max_skipped <= 1 and self.gap_identity_violations == 0


def case_decomposition(Q: int, ell: int, xi) -> CaseDecomposition:
    xi = as_fraction(xi)
    a, q = farey_arrays(Q)
    a = a.astype(object)
    q = q.astype(object)
    n = len(a)
    Qsq = Q * Q

    def small(num, den):
        # num/den <= xi/Q^2
        return num * Qsq * xi.denominator <= den * xi.numerator

    divisible = [int(v) % ell == 0 for v in a]
    NQ = M1 = M2 = 0
    for i in range(n - 1):
        if small(1, q[i] * q[i + 1]):
            NQ += 1
            M1 += divisible[i + 1]
            M2 += divisible[i]
    N1 = NQ - M1 - M2
    N2 = 0
    bad = 0
    for i in range(n - 2):
        if not divisible[i + 1]:
            continue
        K = (q[i] + q[i + 2]) // q[i + 1]
        num = a[i + 2] * q[i] - a[i] * q[i + 2]
        if num != K or (a[i] + a[i + 2]) != K * a[i + 1]:
            bad += 1
        if small(K, q[i] * q[i + 2]):
            N2 += 1
    # direct classification of the filtered gaps
    kept = [i for i in range(n) if not divisible[i]]
    max_skip = max((j - i - 1 for i, j in zip(kept, kept[1:])), default=0)
    direct = threshold_count(Q, FareyFilter.numerator_not_divisible(ell), xi)
    return CaseDecomposition(Q, ell, xi, direct, NQ, M1, M2, N1, N2, max_skip, bad)
