import numpy as np
import pytest

from fareygaps.arith import is_prime_power, omega, primes_upto, prime_factors
from fareygaps.farey import ContractViolation, count
from fareygaps.runs import (
    FAREY,
    REGULAR,
    alternates_between_primes,
    certify_L,
    certify_many,
    continuant,
    continuant_matrix,
    continuant_matrix_expected,
    iter_runs,
    max_run,
    max_run_many,
    proven_bound,
    verify_identity_32,
)


def test_run_example_d6():
    r = max_run(6, 4)
    assert r.denominators == (4, 3, 2, 3, 4)
    assert r.length == 5 and r.start_index == 0


def test_runs_are_maximal():
    for d in (6, 10, 30):
        for Q in (7, 40):
            from fareygaps.farey import farey_arrays

            _, q = farey_arrays(Q)
            for r in iter_runs(d, Q):
                assert all(np.gcd(v, d) > 1 for v in r.denominators)
                if r.start_index > 0:
                    assert np.gcd(q[r.start_index - 1], d) == 1
                end = r.start_index + r.length
                assert end < len(q) and np.gcd(q[end], d) == 1


def test_runs_for_primes_are_short():
    for p in (2, 3, 5, 7, 11):
        for Q in (1, 5, 30, 90):
            assert max_run(p, Q).length <= 1


def test_no_run():
    r = max_run(7, 3)
    assert r.length == 0 and r.start_index == -1
    with pytest.raises(ContractViolation):
        max_run(1, 10)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_primorial_run(n):
    ps = primes_upto(20)[:n]
    d = int(np.prod(ps))
    assert max_run(d, ps[-1]).length == count(ps[-1]) - 1


def test_max_run_many_matches_single():
    ds = [6, 10, 12, 30, 36]
    for Q in (10, 57):
        many = max_run_many(ds, Q)
        assert many == {d: max_run(d, Q).length for d in ds}


def test_certificates():
    c = certify_L(6, 300)
    assert (c.empirical_max, c.attaining_Q, c.proven_bound, c.attains_bound) == (5, 4, 5, True)
    assert c.to_json()["witness"] == [4, 3, 2, 3, 4]
    c = certify_L(9, 100)
    assert (c.empirical_max, c.proven_bound, c.bound_source) == (1, 1, "prime power")
    c = certify_L(30, 300)
    assert c.proven_bound == 4 * 30**3 and c.bound_source == "4d^3 general bound"
    assert c.empirical_max == 11 and not c.attains_bound


def test_bound_sources():
    assert proven_bound(12) == (5, "two prime powers")
    # 1001 = 7 * 11 * 13: omega = 3 <= 7
    assert proven_bound(1001) == (108, "4 omega(d)^3 (omega(d) <= least prime factor)")


def test_bounds_hold_up_to_300():
    ds = list(range(2, 121))
    best = certify_many(ds, 300)
    for d in ds:
        assert best[d][0] <= proven_bound(d)[0], d


def test_parity_alternation():
    for d in (6, 10, 12, 15, 18, 20, 45, 72):
        assert omega(d) == 2
        for Q in range(3, 120):
            for r in iter_runs(d, Q):
                if r.length >= 3:
                    assert alternates_between_primes(r), r


def test_continuant_examples():
    assert continuant(REGULAR, (1, 2, 3)) == 10
    assert continuant(REGULAR, ()) == 1
    assert continuant(FAREY, ()) == 1
    assert continuant(REGULAR, (7,)) == 7
    for x in range(-5, 6):
        for y in range(-5, 6):
            assert continuant(FAREY, (x, y)) == x * y - 1


def test_identity_example():
    # positions of F_5: 1/5, 1/4, 1/3, ...; 1/4 is position 1, nu_3 = 5 = 2*3 - 1
    rep = verify_identity_32(5, 3)
    assert rep.ok and rep.checked > 0


def test_identity_exhaustive_small():
    for Q in range(3, 120):
        rep = verify_identity_32(Q, 6)
        assert rep.ok, (Q, rep.violations[:3])


def test_matrix_identities_random_words():
    rng = np.random.Generator(np.random.PCG64(2024))
    for _ in range(3000):
        n = int(rng.integers(2, 11))
        xs = [int(v) for v in rng.integers(-9, 10, n)]
        for kind in (REGULAR, FAREY):
            assert np.array_equal(continuant_matrix(kind, xs), continuant_matrix_expected(kind, xs))


def test_regular_farey_relation():
    # Farey continuant equals a sign-twisted regular continuant
    rng = np.random.Generator(np.random.PCG64(5))
    for _ in range(500):
        n = int(rng.integers(0, 9))
        xs = [int(v) for v in rng.integers(-9, 10, n)]
        alt = [(-1) ** (j + 1) * x for j, x in enumerate(xs)]
        sign = 1 if (n + 1) % 4 in (0, 1) else -1
        assert continuant(FAREY, xs) == sign * continuant(REGULAR, alt)
