"""Runs of consecutive Farey denominators sharing a factor with d, and continuants.

The runs bound L(d) is the longest such run over all orders Q; a finite
search only certifies lower bounds, so reports pair the empirical maximum
with the best proven upper bound that applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .arith import is_prime_power, omega, prime_factors
from .farey import ContractViolation, farey_arrays, nu2_array, nu_ell_array


@dataclass(frozen=True)
class RunRecord:
    d: int
    Q: int
    start_index: int
    length: int
    denominators: tuple[int, ...]


def _run_bounds(nonunit: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Start indices and lengths of the maximal True runs."""
    padded = np.concatenate(([False], nonunit, [False])).astype(np.int8)
    diff = np.diff(padded)
    starts = np.flatnonzero(diff == 1)
    ends = np.flatnonzero(diff == -1)
    return starts, ends - starts


def iter_runs(d: int, Q: int) -> Iterable[RunRecord]:
    """Every maximal run of denominators not coprime to d, left to right."""
    _, q = farey_arrays(Q)
    starts, lengths = _run_bounds(np.gcd(q, d) > 1)
    for s, n in zip(starts, lengths):
        yield RunRecord(d, Q, int(s), int(n), tuple(int(v) for v in q[s : s + n]))


def max_run(d: int, Q: int) -> RunRecord:
    """Longest maximal run in F_Q (earliest on ties); length 0 when there is none.

    Runs may start at the first element 1/Q; the last element 1/1 is always
    coprime to d.
    """
    if d < 2:
        raise ContractViolation("d must be >= 2")
    _, q = farey_arrays(Q)
    starts, lengths = _run_bounds(np.gcd(q, d) > 1)
    if lengths.size == 0:
        return RunRecord(d, Q, -1, 0, ())
    j = int(np.argmax(lengths))
    s, n = int(starts[j]), int(lengths[j])
    return RunRecord(d, Q, s, n, tuple(int(v) for v in q[s : s + n]))


def max_run_many(ds: Sequence[int], Q: int) -> dict[int, int]:
    """Longest run length for several moduli, sharing one enumeration of F_Q."""
    _, q = farey_arrays(Q)
    out = {}
    for d in ds:
        _, lengths = _run_bounds(np.gcd(q, d) > 1)
        out[d] = int(lengths.max()) if lengths.size else 0
    return out


def proven_bound(d: int) -> tuple[int, str]:
    """Smallest known upper bound on L(d) and where it comes from."""
    w = omega(d)
    fac = prime_factors(d)
    if w == 1:
        return 1, "prime power"
    candidates = [(4 * d**3, "4d^3 general bound")]
    if w == 2:
        candidates.append((5, "two prime powers"))
    if w <= min(fac):
        candidates.append((4 * w**3, "4 omega(d)^3 (omega(d) <= least prime factor)"))
    return min(candidates)


@dataclass
class RunCertificate:
    d: int
    Qmax: int
    empirical_max: int
    attaining_Q: int | None
    proven_bound: int
    bound_source: str
    attains_bound: bool
    witness: RunRecord | None = None

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "Qmax": self.Qmax,
            "empirical_max": self.empirical_max,
            "attaining_Q": self.attaining_Q,
            "proven_bound": self.proven_bound,
            "bound_source": self.bound_source,
            "attains_bound": self.attains_bound,
            "witness": None if self.witness is None else list(self.witness.denominators),
        }


def certify_L(d: int, Qmax: int) -> RunCertificate:
    """Maximum run length over Q <= Qmax together with the applicable proven bound."""
    if d < 2:
        raise ContractViolation("d must be >= 2")
    best = RunRecord(d, 1, -1, 0, ())
    for Q in range(1, Qmax + 1):
        r = max_run(d, Q)
        if r.length > best.length:
            best = r
    bound, source = proven_bound(d)
    return RunCertificate(
        d,
        Qmax,
        best.length,
        best.Q if best.length else None,
        bound,
        source,
        best.length == bound,
        best if best.length else None,
    )


def certify_many(ds: Sequence[int], Qmax: int) -> dict[int, tuple[int, int]]:
    """{d: (empirical max over Q <= Qmax, first attaining Q)} in one sweep over Q."""
    best = {d: (0, 0) for d in ds}
    for Q in range(1, Qmax + 1):
        for d, n in max_run_many(ds, Q).items():
            if n > best[d][0]:
                best[d] = (n, Q)
    return best


def alternates_between_primes(run: RunRecord) -> bool:
    """For d = p^a r^b: along the run, the prime dividing q_j switches at every step."""
    fac = list(prime_factors(run.d))
    if len(fac) != 2:
        raise ValueError("needs a modulus with exactly two prime factors")
    p, r = fac
    tags = []
    for q in run.denominators:
        tags.append(p if q % p == 0 else r)
    return all(a != b for a, b in zip(tags, tags[1:]))


# ---------------------------------------------------------------------------
# continuants


REGULAR = "regular"
FAREY = "farey"


def continuant(kind: str, xs: Sequence[int]) -> int:
    """K_n (regular, plus sign) or K^F_n (Farey, minus sign) of xs; the empty word gives 1.

    Both start from K_0 = 1 and K_1(x) = x.
    """
    sign = {REGULAR: 1, FAREY: -1}[kind]
    prev, cur = 0, 1
    for x in xs:
        prev, cur = cur, x * cur + sign * prev
    return cur


def continuant_matrix(kind: str, xs: Sequence[int]) -> np.ndarray:
    """Product of [[x, 1], [s, 0]] over xs, with s = 1 (regular) or -1 (Farey)."""
    s = {REGULAR: 1, FAREY: -1}[kind]
    m = np.eye(2, dtype=object)
    for x in xs:
        m = m.dot(np.array([[x, 1], [s, 0]], dtype=object))
    return m


def continuant_matrix_expected(kind: str, xs: Sequence[int]) -> np.ndarray:
    """Closed form of continuant_matrix in terms of continuants of sub-words (len >= 2)."""
    n = len(xs)
    if n < 2:
        raise ValueError("needs at least two letters")
    top = [continuant(kind, xs), continuant(kind, xs[: n - 1])]
    bottom = [continuant(kind, xs[1:]), continuant(kind, xs[1 : n - 1])]
    if kind == FAREY:
        bottom = [-v for v in bottom]
    return np.array([top, bottom], dtype=object)


def _alternating_sign(ell: int) -> int:
    return 1 if ell % 4 in (0, 1) else -1


def _continuant_rows(kind: str, cols: np.ndarray) -> np.ndarray:
    # cols has shape (positions, n); recurrence along axis 1
    sign = 1 if kind == REGULAR else -1
    prev = np.zeros(cols.shape[0], dtype=np.int64)
    cur = np.ones(cols.shape[0], dtype=np.int64)
    for j in range(cols.shape[1]):
        prev, cur = cur, cols[:, j] * cur + sign * prev
    return cur


@dataclass
class IdentityReport:
    Q: int
    ell_max: int
    checked: int
    violations: list[tuple[str, int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_identity_32(Q: int, ell_max: int) -> IdentityReport:
    """Check nu_ell against both continuant expressions at every admissible position.

    nu_ell(gamma_i) = K^F_{ell-1}(nu_2(gamma_i), ..., nu_2(gamma_{i+ell-2}))
                    = eps_ell * K_{ell-1}(-nu_2(gamma_i), +nu_2(gamma_{i+1}), ...)

    with eps_ell = 1 for ell = 0, 1 mod 4 and -1 otherwise.  Violations are
    recorded as (identity, ell, position, expected, got).
    """
    if Q < 3 or ell_max < 2:
        raise ContractViolation("need Q >= 3 and ell_max >= 2")
    a, q = farey_arrays(Q)
    nu2 = nu2_array(q)  # nu2[j] belongs to position j + 1
    rep = IdentityReport(Q, ell_max, 0)
    n = len(q)
    for ell in range(2, ell_max + 1):
        m = n - ell  # positions 1 .. n - ell
        if m <= 0:
            continue
        nu = nu_ell_array(a, q, ell)
        cols = np.stack([nu2[j : j + m] for j in range(ell - 1)], axis=1)
        kf = _continuant_rows(FAREY, cols)
        signs = np.array([(-1) ** (j + 1) for j in range(ell - 1)], dtype=np.int64)
        kr = _alternating_sign(ell) * _continuant_rows(REGULAR, cols * signs)
        rep.checked += 2 * m
        for name, vals in (("farey", kf), ("regular", kr)):
            bad = np.flatnonzero(vals != nu)
            for b in bad[:10]:
                rep.violations.append((name, ell, int(b) + 1, int(nu[b]), int(vals[b])))
    return rep
