"""Closed-form limiting gap quantities.

Notation: A(xi) is the area of {x*y >= 1/xi} inside the Farey triangle,
A_K(xi) the area of {y >= x/K + 1/(xi*x)} inside the cylinder T_K.  The
threshold-count density for fractions with ell not dividing the numerator is

    G_ell(xi) = (1/zeta(2) - 2C(ell)/ell) A(xi) + (C(ell)/ell) * sum_{K <= xi} A_K(xi)

and the gap CDF is Ftilde_ell(s) = G_ell(s / Kt_ell) / Kt_ell with
Kt_ell = 1/(2 zeta(2)) - C(ell)/(2 ell), the density of that subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .arith import prime_factors

ZETA2 = math.pi**2 / 6


@dataclass(frozen=True)
class ZetaRational:
    """The number ``ratio / zeta(2)`` with an exact rational ratio."""

    ratio: Fraction

    def __float__(self) -> float:
        return float(self.ratio) / ZETA2

    @property
    def value(self) -> float:
        return float(self)

    def __str__(self) -> str:
        return f"({self.ratio})/zeta(2)"


def constant_C(n: int) -> ZetaRational:
    """C(n) = (1/zeta(2)) * prod_{p | n} p/(p+1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = Fraction(1)
    for p in prime_factors(n):
        r *= Fraction(p, p + 1)
    return ZetaRational(r)


def Ktilde(ell: int) -> ZetaRational:
    """Asymptotic density of fractions whose numerator is not divisible by ell."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    return ZetaRational(Fraction(1, 2) - constant_C(ell).ratio / (2 * ell))


def K_d(d: int) -> ZetaRational:
    """Asymptotic density of fractions with denominator coprime to d."""
    return ZetaRational(constant_C(d).ratio / 2)


# ---------------------------------------------------------------------------


@dataclass
class PiecewiseCurve:
    """A real function on [0, inf) that is analytic between listed breakpoints."""

    func: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple[float, ...] = ()
    name: str = ""

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = self.func(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def jump_at_breakpoints(self, h: float = 1e-9) -> float:
        """Largest |f(b+h) - f(b-h)| over interior breakpoints."""
        bs = np.array([b for b in self.breakpoints if b > 0 and math.isfinite(b)])
        if bs.size == 0:
            return 0.0
        return float(np.max(np.abs(self(bs + h) - self(bs - h))))


def _sqrt_pos(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.maximum(v, 0.0))


def A(xi) -> np.ndarray | float:
    """Area of the hyperbolic part {x*y >= 1/xi} of the Farey triangle."""
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.zeros_like(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        mid = (x > 1) & (x <= 4)
        out[mid] = 1 - (np.log(x[mid]) + 1) / x[mid]
        hi = x > 4
        xh = x[hi]
        r = _sqrt_pos(1 - 4 / xh)
        out[hi] = 1 - 1 / xh - 0.5 * r + (2 / xh) * np.log((1 + r) / 2)
    inf = np.isinf(x)
    out[inf] = 0.5
    return float(out[0]) if np.ndim(xi) == 0 else out


def A1_branches(xi: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three nonzero branch expressions of A_1, each evaluated on xi >= 4."""
    x = np.asarray(xi, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        r4 = _sqrt_pos(1 - 4 / x)
        r8 = _sqrt_pos(1 - 8 / x)
        u1, u2 = (1 - r4) / 2, (1 + r4) / 2
        v1, v2 = (1 - r8) / 4, (1 + r8) / 4
        base = 0.5 * r4 - np.log(u2 / u1) / x
        b2 = base
        b3 = base - 0.5 * r8 + (2 / x) * np.log(v2 / v1)
        b4 = base - 0.25 * r8 - 1 / 12 + np.log(2 * v2 / v1) / x
    return b2, b3, b4


def A1(xi) -> np.ndarray | float:
    """Area of {y >= x + 1/(xi*x)} inside the triangle T_1."""
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.zeros_like(x)
    fin = np.isfinite(x)
    b2, b3, b4 = A1_branches(np.where(fin & (x > 4), x, 16.0))
    out = np.where((x > 4) & (x <= 8), b2, out)
    out = np.where((x > 8) & (x <= 9), b3, out)
    out = np.where(x > 9, b4, out)
    out = np.where(np.isinf(x), 1 / 6, out)
    return float(out[0]) if np.ndim(xi) == 0 else out


def AK_breakpoints(K: int) -> tuple[float, ...]:
    if K == 1:
        return (4.0, 8.0, 9.0)
    return (float(K), K * (K + 1) / (K - 1), (K + 2) ** 2 / K)


def AK_branches(K: int, xi: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Branch expressions of A_K for K >= 2: (upper-edge branch, two-edge branch, full)."""
    x = np.asarray(xi, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        b2 = 1 / K - 1 / x - np.log(x / K) / x
        r = _sqrt_pos(1 - (4 / x) * (1 + 1 / K))
        vK = K / (2 * (K + 1)) * (1 + r)
        wK = K / 2 * (1 - r)
        b3 = (K**3 + 8) / (2 * K * (K + 1) * (K + 2)) - np.log(wK / vK) / x - vK / 2 + wK / (2 * (K + 1))
    return b2, b3, 4 / (K * (K + 1) * (K + 2))


def A_K(K: int, xi) -> np.ndarray | float:
    """Area of {y >= x/K + 1/(xi*x)} inside the cylinder T_K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if K == 1:
        return A1(xi)
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    _, m1, m2 = AK_breakpoints(K)
    b2, b3, full = AK_branches(K, np.where(np.isfinite(x) & (x > 0), x, float(K)))
    out = np.zeros_like(x)
    out = np.where((x > K) & (x <= m1), b2, out)
    out = np.where((x > m1) & (x < m2), b3, out)
    out = np.where(x >= m2, full, out)
    return float(out[0]) if np.ndim(xi) == 0 else out


def _full_cylinder_count(x: np.ndarray) -> np.ndarray:
    """Largest M >= 1 such that A_K(x) is the full area for every 2 <= K <= M.

    A_K is full once x >= K + 4 + 4/K; M = 1 means no such K.
    """
    with np.errstate(invalid="ignore"):
        disc = np.maximum((x - 4) ** 2 - 16, 0.0)
        M = np.floor(((x - 4) + np.sqrt(disc)) / 2)
    M = np.where(x >= 8, M, 1.0)
    M = np.nan_to_num(M, nan=1.0, posinf=1.0)
    # repair floating rounding at the boundary
    M = np.where((M >= 2) & ((M + 2) ** 2 / np.maximum(M, 1) > x), M - 1, M)
    M = np.where((M + 3) ** 2 / (M + 1) <= x, M + 1, M)
    return np.maximum(M, 1.0)


def cylinder_sum(xi) -> np.ndarray | float:
    """sum_{1 <= K <= xi} A_K(xi), with the fully covered cylinders summed in closed form.

    For K in [2, M] the region is the whole cylinder and those areas
    telescope to 1/3 - 2/((M+1)(M+2)); at most a handful of K near xi
    are partial and get evaluated explicitly.
    """
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.zeros_like(x)
    inf = np.isinf(x)
    fx = np.where(inf, 0.0, x)
    out += A1(fx)
    M = _full_cylinder_count(fx)
    full = np.where(M >= 2, 1 / 3 - 2 / ((M + 1) * (M + 2)), 0.0)
    out += full
    top = np.floor(fx)
    # partial cylinders: K in [max(2, M+1), floor(xi)], at most 6 of them
    for j in range(8):
        K = top - j
        ok = (K >= 2) & (K > M)
        if not np.any(ok):
            continue
        for Kv in np.unique(K[ok]).astype(int):
            sel = ok & (K == Kv)
            out[sel] += A_K(int(Kv), fx[sel])
    out[inf] = 0.5
    return float(out[0]) if np.ndim(xi) == 0 else out


def cylinder_sum_naive(xi: float) -> float:
    """Direct sum of A_K(xi) over 1 <= K <= xi (reference implementation)."""
    if not math.isfinite(xi):
        return 0.5
    return float(sum(A_K(K, xi) for K in range(1, int(math.floor(xi)) + 1)))


def G_ell(ell: int, xi) -> np.ndarray | float:
    """Limit of N_Q^{(ell)}(xi)/Q^2: density of thresholded gaps of the numerator-filtered set."""
    C = float(constant_C(ell))
    return (1 / ZETA2 - 2 * C / ell) * A(xi) + (C / ell) * cylinder_sum(xi)


def Ftilde_cdf(ell: int, s) -> np.ndarray | float:
    """Limiting CDF of normalized gaps of fractions whose numerator ell does not divide."""
    kt = float(Ktilde(ell))
    s_arr = np.asarray(s, dtype=float)
    out = G_ell(ell, np.maximum(np.atleast_1d(s_arr), 0.0) / kt) / kt
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if s_arr.ndim == 0 else out


def A_curve() -> PiecewiseCurve:
    return PiecewiseCurve(lambda x: A(x), (1.0, 4.0), "A")


def AK_curve(K: int) -> PiecewiseCurve:
    return PiecewiseCurve(lambda x: A_K(K, x), AK_breakpoints(K), f"A_{K}")


def G_curve(ell: int, xmax: float = 50.0) -> PiecewiseCurve:
    bps = {1.0, 4.0, 8.0, 9.0}
    for K in range(2, int(xmax) + 1):
        bps.update(b for b in AK_breakpoints(K) if b <= xmax)
    return PiecewiseCurve(lambda x: G_ell(ell, x), tuple(sorted(bps)), f"G_{ell}")


def Ftilde_curve(ell: int, smax: float = 20.0) -> PiecewiseCurve:
    kt = float(Ktilde(ell))
    g = G_curve(ell, smax / kt)
    return PiecewiseCurve(lambda s: Ftilde_cdf(ell, s), tuple(b * kt for b in g.breakpoints), f"Ftilde_{ell}")
