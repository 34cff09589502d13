"""Gap distribution of Farey fractions whose denominator is coprime to d.

A gap of the filtered sequence spans ell consecutive steps of F_Q: the two
endpoint denominators are coprime to d and the ell - 1 in between are not.
Grouping such gaps by the word of nu_2 values they cover, each word w
contributes the area of its polygon where the gap function is large enough,
weighted by the number of residue pairs (q_{i-1}, q_i) mod d that produce the
required coprimality pattern along w.

    C_d(xi) = P_d * (phi(d)^2 A(xi) + sum_w #A_w * area(Omega_w(xi)))
    P_d = 1/(zeta(2) d^2) * prod_{p | d} (1 - 1/p^2)^{-1}

and F_d(s) = C_d(s/K_d)/K_d.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .analytic import ZETA2, A, K_d, PiecewiseCurve, cylinder_sum
from .arith import euler_phi, omega, prime_factors
from .bcz import CylinderWord, WordRegion, cylinder_region, polygon_area_above_curve, word_region


class EmpiricalBoundWarning(UserWarning):
    """The run-length bound used for a modulus is empirical, not proven."""


def farey_continuant(xs: Sequence[int]) -> int:
    prev, cur = 0, 1
    for x in xs:
        prev, cur = cur, x * cur - prev
    return cur


def _extend_residues(states, x: int, d: int):
    return [(cur, (x * cur - prev) % d) for prev, cur in states]


def residue_sets(d: int, k: int, w: CylinderWord | Sequence[int]) -> set[tuple[int, int]]:
    """Residue pairs (q_{i-1}, q_i) mod d, as values in 1..d, compatible with the word.

    A pair qualifies when running r_{j+1} = x_j r_j - r_{j-1} along w gives a
    first and last term coprime to d and every intermediate term sharing a
    factor with d.  Brute force over all d^2 pairs.  ``k`` must be the Farey
    continuant of w; it is checked, not used.
    """
    letters = w.letters if isinstance(w, CylinderWord) else tuple(w)
    if farey_continuant(letters) != k:
        raise ValueError(f"word {letters} has continuant {farey_continuant(letters)}, not {k}")
    out = set()
    for r0 in range(1, d + 1):
        if gcd(r0, d) != 1:
            continue
        for r1 in range(1, d + 1):
            seq = [r0, r1]
            for x in letters:
                seq.append((x * seq[-1] - seq[-2]) % d)
            if all(gcd(r, d) > 1 for r in seq[1:-1]) and gcd(seq[-1], d) == 1:
                out.add((r0, r1))
    return out


def _letter_bound(k: int, ell: int) -> int:
    return k + 2 * ell + 2


def enumerate_words(k: int, ell: int, letter_bound: int | None = None) -> list[CylinderWord]:
    """Feasible words of length ell - 1 with Farey continuant k, in lexicographic order.

    Feasible means the word polygon has positive area.  Letters are searched
    up to k + 2*ell + 2 unless another bound is given.
    """
    if k < 1 or ell < 2:
        raise ValueError("need k >= 1 and ell >= 2")
    n = ell - 1
    bound = letter_bound or _letter_bound(k, ell)
    out: list[CylinderWord] = []

    def dfs(reg: WordRegion, prev: int, cur: int):
        depth = len(reg.word)
        if depth == n:
            if cur == k:
                out.append(reg.word)
            return
        lo, hi = reg.next_letters()
        for x in range(lo, int(min(hi, bound)) + 1):
            nxt = reg.extend(x)
            if nxt.polygon.is_empty:
                continue
            dfs(nxt, cur, x * cur - prev)

    for x1 in range(1, bound + 1):
        dfs(cylinder_region(x1), 1, x1)
    return sorted(out, key=lambda w: w.letters)


@dataclass(frozen=True)
class WordEntry:
    word: tuple[int, ...]
    k: int
    multiplicity: int
    region: WordRegion
    area: float
    xi_min: float
    xi_full: float

    def area_at(self, xi: np.ndarray) -> np.ndarray:
        """Area where the gap function is at least k/xi, for an array of xi."""
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape)
        out[xi >= self.xi_full] = self.area
        part = (xi > self.xi_min) & (xi < self.xi_full)
        if np.any(part):
            c, dd = self.region.linear_form
            beta = self.k / xi[part] / dd
            out[part] = polygon_area_above_curve(self.region.polygon, -c / dd, beta)
        return out


def _gap_bounds(reg: WordRegion, k: int) -> tuple[float, float]:
    # g = x*(c x + d y) is a product of positive linear forms, so its minimum
    # over the polygon sits at a vertex; for the maximum a product bound is enough
    c, dd = reg.linear_form
    xs = [x for x, _ in reg.polygon.vertices]
    ls = [c * x + dd * y for x, y in reg.polygon.vertices]
    gmin = min(x * l for x, l in zip(xs, ls))
    gmax = max(xs) * max(ls)
    xi_full = math.inf if gmin <= 0 else float(k / gmin)
    xi_min = max(float(k), float(k / gmax))
    return xi_min, xi_full


def run_length_cap(d: int) -> tuple[int, bool]:
    """(longest word needed, proven?) for modulus d.

    Prime powers: runs of non-coprime denominators have length 1.  Two prime
    powers: at most 5.  Otherwise the empirical maximum over Q <= 120 plus 2.
    """
    w = omega(d)
    if d == 1:
        return 0, True
    if w == 1:
        return 1, True
    if w == 2:
        return 5, True
    from .runs import certify_L

    rep = certify_L(d, 120)
    return rep.empirical_max + 2, False


@dataclass
class WordTable:
    """All words that can contribute to C_d(xi) for xi <= X.

    A word can only matter if every letter and every prefix continuant is at
    most X: each sub-gap of a thresholded gap is itself at most X/Q^2, and a
    sub-gap spanning j steps is at least (its j-index)/Q^2.
    """

    d: int
    X: int
    max_len: int
    entries: list[WordEntry] = field(default_factory=list)

    @classmethod
    def build(cls, d: int, X: int, max_len: int) -> "WordTable":
        table = cls(d, X, max_len)
        if d == 1 or max_len == 0:
            return table
        units = [r for r in range(d) if gcd(r, d) == 1]
        nonunits = [r for r in range(d) if gcd(r, d) > 1]
        start = [(r0, r1) for r0 in units for r1 in nonunits]
        is_unit = [gcd(r, d) == 1 for r in range(d)]

        def visit(reg: WordRegion, states, prev: int, cur: int):
            # states hold (r_{j-1}, r_j) with r_1 .. r_j all non-units
            x = reg.word.letters[-1]
            new = _extend_residues(states, x, d)
            ending = sum(1 for _, r in new if is_unit[r])
            if ending:
                xi_min, xi_full = _gap_bounds(reg, cur)
                table.entries.append(
                    WordEntry(reg.word.letters, cur, ending, reg, float(reg.polygon.area()), xi_min, xi_full)
                )
            going = [s for s in new if not is_unit[s[1]]]
            if not going or len(reg.word) >= max_len:
                return
            lo, hi = reg.next_letters()
            for y in range(lo, int(min(hi, X)) + 1):
                nk = y * cur - prev
                if nk > X:
                    break
                nxt = reg.extend(y)
                if nxt.polygon.is_empty:
                    continue
                visit(nxt, going, cur, nk)

        for x1 in range(1, X + 1):
            visit(cylinder_region(x1), start, 1, x1)
        return table

    def contribution(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape)
        for e in self.entries:
            if e.xi_min >= np.max(xi):
                continue
            out += e.multiplicity * e.area_at(xi)
        return out

    def multiplicities(self) -> dict[tuple[int, ...], int]:
        return {e.word: e.multiplicity for e in self.entries}


_TABLES: dict[int, WordTable] = {}


def word_table(d: int, X: float) -> WordTable:
    """Cached word table for d covering xi <= X; rebuilt larger on demand."""
    need = max(1, math.ceil(X))
    tab = _TABLES.get(d)
    if tab is None or tab.X < need:
        cap, proven = run_length_cap(d)
        if not proven:
            warnings.warn(
                f"d={d}: run length cap {cap} is an empirical maximum plus a margin, not a proven bound",
                EmpiricalBoundWarning,
                stacklevel=3,
            )
        size = need if tab is None else max(need, 2 * tab.X)
        tab = WordTable.build(d, size, cap)
        _TABLES[d] = tab
    return tab


def density_prefactor(d: int) -> float:
    r = Fraction(1, d * d)
    for p in prime_factors(d):
        r /= 1 - Fraction(1, p * p)
    return float(r) / ZETA2


def C_d_curve(d: int, xi) -> np.ndarray | float:
    """Limit of the number of filtered consecutive pairs with gap <= xi/Q^2, over Q^2."""
    if d < 1:
        raise ValueError("d must be >= 1")
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    out = euler_phi(d) ** 2 * A(x)
    fin = x[np.isfinite(x)]
    if d > 1:
        if fin.size and fin.max() > 0:
            tab = word_table(d, fin.max())
            out[np.isfinite(x)] += tab.contribution(fin)
        out[~np.isfinite(x)] = float(K_d(d)) / density_prefactor(d)
    out = density_prefactor(d) * out
    return float(out[0]) if np.ndim(xi) == 0 else out


def C_d_prime_power(d: int, xi) -> np.ndarray | float:
    """C_d for d = p^a via the cylinder sum: only single-step detours occur."""
    fac = prime_factors(d)
    if len(fac) != 1:
        raise ValueError(f"{d} is not a prime power")
    (p, a), = fac.items()
    phi = euler_phi(d)
    return density_prefactor(d) * phi * (phi * A(xi) + p ** (a - 1) * cylinder_sum(xi))


def Fd_cdf(d: int, s, explicit: bool | None = None) -> np.ndarray | float:
    """Limiting CDF of normalized gaps of fractions with denominator coprime to d.

    Prime powers use the cylinder-sum form unless ``explicit=False``.
    """
    kd = float(K_d(d))
    s_arr = np.asarray(s, dtype=float)
    xi = np.maximum(np.atleast_1d(s_arr), 0.0) / kd
    use_pp = omega(d) == 1 if explicit is None else explicit
    vals = C_d_prime_power(d, xi) if use_pp else C_d_curve(d, xi)
    out = np.clip(np.asarray(vals) / kd, 0.0, 1.0)
    return float(out[0]) if s_arr.ndim == 0 else out


def Fd_curve(d: int) -> PiecewiseCurve:
    return PiecewiseCurve(lambda s: Fd_cdf(d, s), (), f"F_{d}")
