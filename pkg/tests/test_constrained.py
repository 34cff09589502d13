from collections import defaultdict
from math import gcd

import numpy as np
import pytest

from fareygaps import constrained
from fareygaps.analytic import ZETA2, A, K_d
from fareygaps.bcz import CylinderWord, omega_area, word_region
from fareygaps.constrained import (
    C_d_curve,
    C_d_prime_power,
    EmpiricalBoundWarning,
    Fd_cdf,
    WordTable,
    enumerate_words,
    farey_continuant,
    residue_sets,
    run_length_cap,
)
from fareygaps.empirical import threshold_count
from fareygaps.farey import FareyFilter, farey_arrays, nu2_array


def _letters(words):
    return [w.letters for w in words]


def harvest(Q, d):
    """Words and leading residue pairs of every gap of the d-filtered F_Q."""
    a, q = farey_arrays(Q)
    nu2 = np.concatenate(([0], nu2_array(q), [0]))
    unit = np.gcd(q, d) == 1
    kept = np.flatnonzero(unit)
    found = defaultdict(set)
    for i, j in zip(kept, kept[1:]):
        if j - i < 2:
            continue
        word = tuple(int(v) for v in nu2[i + 1 : j])
        k = int(a[j] * q[i] - a[i] * q[j])
        found[(word, k)].add((int(q[i]) % d or d, int(q[i + 1]) % d or d))
    return found


def test_enumerate_words_examples():
    for k in (1, 2, 7, 30):
        assert _letters(enumerate_words(k, 2)) == [(k,)]
    assert _letters(enumerate_words(5, 3)) == [(1, 6), (2, 3), (3, 2), (6, 1)]
    assert _letters(enumerate_words(1, 3)) == [(1, 2), (2, 1)]
    assert _letters(enumerate_words(5, 4)) == [
        (1, 4, 2), (1, 7, 1), (2, 1, 7), (2, 4, 1), (3, 1, 4), (4, 1, 3), (7, 1, 2)
    ]


@pytest.mark.parametrize("k,ell", [(k, ell) for ell in (3, 4, 5) for k in range(1, 9)])
def test_letter_bound_is_not_binding(k, ell):
    words = enumerate_words(k, ell)
    wide = enumerate_words(k, ell, letter_bound=3 * k + 4 * ell + 10)
    assert words == wide
    for w in words:
        assert farey_continuant(w.letters) == k
        assert not word_region(w).polygon.is_empty


def test_harvested_words_are_enumerated():
    seen = harvest(400, 30)
    by_kl = defaultdict(set)
    for word, k in seen:
        assert farey_continuant(word) == k
        by_kl[(k, len(word) + 1)].add(word)
    for (k, ell), words in by_kl.items():
        if k <= 12:
            assert words <= set(_letters(enumerate_words(k, ell))), (k, ell)


def test_residue_set_examples():
    assert residue_sets(1, 3, (3,)) == set()
    assert residue_sets(4, 3, (3,)) == {(1, 2), (1, 4), (3, 2), (3, 4)}
    assert residue_sets(6, 5, CylinderWord.of(2, 3)) == {(1, 2), (5, 4)}
    with pytest.raises(ValueError):
        residue_sets(6, 4, (2, 3))


@pytest.mark.parametrize("d", [4, 6, 10, 12])
def test_residue_sets_cover_harvested_pairs(d):
    for (word, k), pairs in harvest(200, d).items():
        assert pairs <= residue_sets(d, k, word), word


def test_word_table_multiplicities_match_residue_sets():
    tab = WordTable.build(6, 40, 5)
    for word, mult in tab.multiplicities().items():
        k = farey_continuant(word)
        assert mult == len(residue_sets(6, k, word))


def test_linear_form_second_entry_is_continuant():
    for k in range(1, 10):
        for ell in (2, 3, 4):
            for w in enumerate_words(k, ell):
                assert word_region(w).linear_form[1] == k


def test_C1_is_unconstrained():
    xs = np.linspace(0, 40, 401)
    assert np.allclose(C_d_curve(1, xs), A(xs) / ZETA2, atol=1e-15)


def test_unit_region_area_is_A():
    for xi in (0.5, 1.5, 2, 4, 7.25, 30):
        assert A(xi) == pytest.approx(omega_area("unit", 1, xi), abs=1e-10)


def test_C4_vanishes_below_one():
    assert np.all(C_d_curve(4, np.linspace(0, 1, 50)) == 0)
    assert C_d_curve(4, 1.2) > 0


@pytest.mark.parametrize("d", [2, 3, 4, 8, 9, 25, 27])
def test_prime_power_paths_agree(d):
    xs = np.linspace(0.0, 25.0, 301)
    assert np.allclose(C_d_curve(d, xs), C_d_prime_power(d, xs), atol=1e-12, rtol=0)
    s = np.linspace(0, 4, 101)
    assert np.allclose(Fd_cdf(d, s, explicit=False), Fd_cdf(d, s), atol=1e-12)


def test_C6_matches_count():
    Q = 1000
    emp = threshold_count(Q, FareyFilter.denominator_coprime(6), 3) / Q**2
    assert abs(C_d_curve(6, 3.0) - emp) <= 0.02


@pytest.mark.parametrize("d", [4, 6, 10])
def test_C_d_matches_counts_on_grid(d):
    Q = 600
    filt = FareyFilter.denominator_coprime(d)
    for xi in (1.5, 2, 4, 6.5):
        emp = threshold_count(Q, filt, xi) / Q**2
        assert C_d_curve(d, xi) == pytest.approx(emp, abs=5e-3)


def test_Fd_basic_shape():
    for d in (2, 4, 6):
        assert Fd_cdf(d, 0.0) == 0
        s = np.linspace(0, 8, 10**4)
        v = Fd_cdf(d, s)
        assert np.all(np.diff(v) >= -1e-12)
        assert np.all((0 <= v) & (v <= 1))
        assert Fd_cdf(d, 30.0) == pytest.approx(1, abs=1e-3)


def test_run_length_caps():
    assert run_length_cap(9) == (1, True)
    assert run_length_cap(12) == (5, True)
    cap, proven = run_length_cap(30)
    assert not proven and cap >= 11


def test_empirical_cap_warns():
    constrained._TABLES.pop(30, None)
    with pytest.warns(EmpiricalBoundWarning):
        C_d_curve(30, 2.0)


def test_caps_cover_observed_runs():
    for d in (6, 10, 12, 30):
        seen = harvest(150, d)
        cap, _ = run_length_cap(d)
        assert max(len(w) for w, _ in seen) <= cap
