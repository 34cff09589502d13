"""Farey fractions of order Q: streaming enumeration, filters, indices and counts.

The sequence F_Q lists the reduced fractions a/q in (0, 1] with q <= Q in
increasing order.  Everything here is exact integer arithmetic; the numpy
helpers use int64, which is exact for Q up to a few million.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .arith import euler_phi_table, mobius, prime_factors


class ContractViolation(ValueError):
    """Raised when an input breaks a documented precondition."""


@total_ordering
@dataclass(frozen=True, slots=True)
class FareyFraction:
    a: int
    q: int

    def __post_init__(self):
        if not (0 < self.a <= self.q):
            raise ContractViolation(f"{self.a}/{self.q} is not in (0, 1]")
        if gcd(self.a, self.q) != 1:
            raise ContractViolation(f"{self.a}/{self.q} is not reduced")

    def __lt__(self, other: "FareyFraction") -> bool:
        return self.a * other.q < other.a * self.q

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.q)

    def __str__(self) -> str:
        return f"{self.a}/{self.q}"

    @classmethod
    def parse(cls, text: str) -> "FareyFraction":
        a, _, q = text.partition("/")
        return cls(int(a), int(q or 1))


@dataclass(frozen=True)
class FareyFilter:
    """Membership constraint on F_Q.

    ``kind`` is ``"all"``, ``"numerator"`` (keep a/q with ell not dividing a)
    or ``"denominator"`` (keep a/q with gcd(q, d) = 1).  Use the class
    constructors rather than building instances by hand.
    """

    kind: str = "all"
    param: int = 0

    def __post_init__(self):
        if self.kind == "numerator" and self.param < 2:
            raise ContractViolation("numerator filter needs ell >= 2")
        if self.kind == "denominator" and self.param < 1:
            raise ContractViolation("denominator filter needs d >= 1")
        if self.kind not in ("all", "numerator", "denominator"):
            raise ContractViolation(f"unknown filter kind {self.kind!r}")

    @classmethod
    def all(cls) -> "FareyFilter":
        return cls("all", 0)

    @classmethod
    def numerator_not_divisible(cls, ell: int) -> "FareyFilter":
        return cls("numerator", ell)

    @classmethod
    def denominator_coprime(cls, d: int) -> "FareyFilter":
        return cls("denominator", d)

    def accepts(self, a: int, q: int) -> bool:
        if self.kind == "numerator":
            return a % self.param != 0
        if self.kind == "denominator":
            return gcd(q, self.param) == 1
        return True

    def mask(self, a: np.ndarray, q: np.ndarray) -> np.ndarray:
        if self.kind == "numerator":
            return a % self.param != 0
        if self.kind == "denominator":
            return np.gcd(q, self.param) == 1
        return np.ones(len(a), dtype=bool)

    def __str__(self) -> str:
        if self.kind == "numerator":
            return f"numerator-not-divisible({self.param})"
        if self.kind == "denominator":
            return f"denominator-coprime({self.param})"
        return "all"


ALL = FareyFilter.all()


def _check_order(Q: int) -> None:
    if not isinstance(Q, (int, np.integer)) or Q < 1:
        raise ContractViolation(f"order Q must be a positive integer, got {Q!r}")


def _iter_pairs(Q: int) -> Iterator[tuple[int, int]]:
    if Q == 1:
        yield 1, 1
        return
    a, q, a2, q2 = 1, Q, 1, Q - 1
    yield a, q
    while True:
        yield a2, q2
        if q2 == 1:
            return
        K = (Q + q) // q2
        a, q, a2, q2 = a2, q2, K * a2 - a, K * q2 - q


def enumerate_farey(Q: int, filt: FareyFilter = ALL) -> Iterator[FareyFraction]:
    """Yield the members of F_Q accepted by ``filt``, in increasing order.

    Uses the next-term recurrence, so memory does not grow with Q.
    """
    _check_order(Q)
    for a, q in _iter_pairs(Q):
        if filt.accepts(a, q):
            yield FareyFraction(a, q)


def next_fraction(Q: int, prev: FareyFraction, cur: FareyFraction) -> FareyFraction:
    """Successor of ``cur`` in F_Q given its predecessor ``prev``."""
    _check_order(Q)
    if cur.a * prev.q - prev.a * cur.q != 1 or max(prev.q, cur.q) > Q or prev.q + cur.q <= Q:
        raise ContractViolation(f"{prev} and {cur} are not consecutive in F_{Q}")
    if cur.q == 1:
        raise ContractViolation("1/1 is the last element of F_Q")
    K = (Q + prev.q) // cur.q
    return FareyFraction(K * cur.a - prev.a, K * cur.q - prev.q)


@lru_cache(maxsize=16)
def _farey_arrays_cached(Q: int) -> tuple[np.ndarray, np.ndarray]:
    a_list = []
    q_list = []
    for a, q in _iter_pairs(Q):
        a_list.append(a)
        q_list.append(q)
    a_arr = np.array(a_list, dtype=np.int64)
    q_arr = np.array(q_list, dtype=np.int64)
    a_arr.flags.writeable = False
    q_arr.flags.writeable = False
    return a_arr, q_arr


def farey_arrays(Q: int, filt: FareyFilter = ALL) -> tuple[np.ndarray, np.ndarray]:
    """Numerators and denominators of the filtered F_Q as int64 arrays."""
    _check_order(Q)
    a, q = _farey_arrays_cached(int(Q))
    if filt.kind == "all":
        return a, q
    keep = filt.mask(a, q)
    return a[keep], q[keep]


def iter_farey_chunks(Q: int, chunk: int = 1 << 20) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Stream F_Q as successive (a, q) array chunks of at most ``chunk`` terms."""
    _check_order(Q)
    a_buf: list[int] = []
    q_buf: list[int] = []
    for a, q in _iter_pairs(Q):
        a_buf.append(a)
        q_buf.append(q)
        if len(a_buf) == chunk:
            yield np.array(a_buf, dtype=np.int64), np.array(q_buf, dtype=np.int64)
            a_buf, q_buf = [], []
    if a_buf:
        yield np.array(a_buf, dtype=np.int64), np.array(q_buf, dtype=np.int64)


def count(Q: int, filt: FareyFilter = ALL) -> int:
    """Exact size of the filtered F_Q, from one enumeration pass."""
    _check_order(Q)
    if Q <= 4000:
        a, q = farey_arrays(Q)
        return int(filt.mask(a, q).sum())
    total = 0
    for a, q in iter_farey_chunks(Q):
        total += int(filt.mask(a, q).sum())
    return total


def count_by_totient(Q: int, filt: FareyFilter = ALL) -> int:
    """Exact size of the filtered F_Q by arithmetic summation (no enumeration).

    All: sum of phi(q).  Denominator filter: sum of phi(q) over q coprime to d.
    Numerator filter: #F_Q minus the number of a/q with ell | a, which is
    zero unless gcd(q, ell) = 1 and then counts k <= q/ell coprime to q
    (Moebius summation).
    """
    _check_order(Q)
    phi = euler_phi_table(Q)
    if filt.kind == "all":
        return int(phi[1:].sum())
    if filt.kind == "denominator":
        qs = np.arange(1, Q + 1)
        return int(phi[1:][np.gcd(qs, filt.param) == 1].sum())
    ell = filt.param
    multiples = 0
    for q in range(1, Q + 1):
        if gcd(q, ell) != 1:
            continue
        m = q // ell
        multiples += sum(mobius(e) * (m // e) for e in _divisors(q))
    return int(phi[1:].sum()) - multiples


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in prime_factors(n).items():
        divs = [x * p**i for x in divs for i in range(e + 1)]
    return divs


def nu_index(Q: int, window: Sequence[FareyFraction]) -> int:
    """nu_2 of the middle fraction of three consecutive elements of F_Q.

    Equals (q_left + q_right) / q_mid, which is always an exact integer and
    coincides with floor((Q + q_left) / q_mid).
    """
    left, mid, right = window
    for x, y in ((left, mid), (mid, right)):
        if y.a * x.q - x.a * y.q != 1 or max(x.q, y.q) > Q or x.q + y.q <= Q:
            raise ContractViolation(f"{x}, {y} are not consecutive in F_{Q}")
    nu, rem = divmod(left.q + right.q, mid.q)
    if rem:
        raise ContractViolation("index division is not exact")
    assert nu == (Q + left.q) // mid.q
    return nu


def nu_ell(Q: int, i: int, ell: int) -> int:
    """ell-index of the i-th element (0-based) of F_Q.

    nu_ell(gamma_i) = a_{i+ell-1} q_{i-1} - a_{i-1} q_{i+ell-1}.
    """
    if ell < 2:
        raise ContractViolation("ell must be >= 2")
    a, q = farey_arrays(Q)
    if i - 1 < 0 or i + ell - 1 >= len(q):
        raise IndexError(f"position {i} has no ell={ell} window in F_{Q}")
    return int(a[i + ell - 1] * q[i - 1] - a[i - 1] * q[i + ell - 1])


def nu_ell_array(a: np.ndarray, q: np.ndarray, ell: int) -> np.ndarray:
    """nu_ell at every admissible position 1 .. len-ell (vectorized)."""
    n = len(q)
    lo = slice(0, n - ell)
    hi = slice(ell, n)
    return a[hi] * q[lo] - a[lo] * q[hi]


def nu2_array(q: np.ndarray) -> np.ndarray:
    """nu_2 at the interior positions 1 .. len-2, from denominators alone."""
    nu, rem = np.divmod(q[:-2] + q[2:], q[1:-1])
    if np.any(rem):
        raise ContractViolation("denominators are not consecutive Farey denominators")
    return nu
