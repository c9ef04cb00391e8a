from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from hadlab import (ConsistencyError, InvalidInputError, PhaseEntry,
                    SearchBudgetExceeded, cycle_decompose,
                    cycle_decompose_integer, cycle_structure_profile,
                    fourier_cyclic, is_regular, lam_leung_length_admissible,
                    petrescu, term_multiset, weak_isolation_probe)


def roots(p: int, rho: complex = 1.0) -> list:
    return [rho * np.exp(2j * np.pi * m / p) for m in range(p)]


def test_single_prime_cycles():
    for p in (2, 3, 5, 7):
        dec = cycle_decompose(roots(p, rho=np.exp(0.321j)))
        assert dec is not None
        assert dec.label == str(p)
        assert dec.cycles[0].indices == tuple(range(p))


def test_five_term_rotated_sum_is_3_plus_2():
    # w^0 + w^2 + w^4 vanishes (cube roots); q*w + q*w^4 vanishes (a 2-cycle)
    w = np.exp(2j * np.pi / 6)
    q = np.exp(2j * np.pi * 0.1357)
    terms = [1, w ** 2, w ** 4, q * w, q * w ** 4]
    dec = cycle_decompose(terms)
    assert dec is not None
    assert dec.label == "3+2"


def test_decompose_rejects_nonvanishing():
    with pytest.raises(InvalidInputError):
        cycle_decompose([1, 1j])


def test_decompose_empty_is_trivial():
    dec = cycle_decompose([])
    assert dec is not None and dec.label == ""


def test_decompose_irregular_sum_returns_none():
    # the classic six-term vanishing sum of 30th roots with no partition
    # into rotated prime cycles
    z = np.exp(2j * np.pi / 30)
    terms = [z ** e for e in (5, 6, 12, 18, 24, 25)]
    assert cycle_decompose(terms) is None


def test_decompose_budget_exhaustion_raises():
    z = np.exp(2j * np.pi / 30)
    terms = [z ** e for e in (5, 6, 12, 18, 24, 25)]
    with pytest.raises(SearchBudgetExceeded):
        cycle_decompose(terms, budget=3)


def test_deterministic_search_order():
    terms = roots(2) + roots(3)
    a = cycle_decompose(terms)
    b = cycle_decompose(terms)
    assert a.label == b.label == "3+2"
    assert [c.indices for c in a.cycles] == [c.indices for c in b.cycles]


def test_fourier6_pair_profile():
    prof = cycle_structure_profile(fourier_cyclic(6))
    counts = Counter(prof.values())
    assert counts == {"3+3": 12, "2+2+2": 3}
    # difference 3 mod 6 gives the all-2-cycle pairs
    for (i, j), label in prof.items():
        assert label == ("2+2+2" if (j - i) % 6 == 3 else "3+3")
    assert is_regular(fourier_cyclic(6))


def test_petrescu_pairs_all_3_2_2():
    h = petrescu(PhaseEntry.turns(0.1234567))
    prof = cycle_structure_profile(h)
    assert set(prof.values()) == {"3+2+2"}
    assert len(prof) == 21


def test_term_multiset_checks_rows():
    h = fourier_cyclic(3)
    terms = term_multiset(h, 0, 1)
    assert len(terms) == 3
    with pytest.raises(InvalidInputError):
        term_multiset(h, 1, 1)


def test_integer_route_simple_cycles():
    d = cycle_decompose_integer([0, 2, 4], 6)
    assert d.vanishing and d.method == "exact-cover"
    assert d.components == ((3, 0, 1),)
    assert d.nonnegative is True

    d = cycle_decompose_integer([1, 4, 2, 5, 0, 3], 6)
    assert d.vanishing
    assert d.nonnegative is True
    counts = [0] * 6
    for p, r, c in d.components:
        for t in range(p):
            counts[(r + t * (6 // p)) % 6] += c
    assert counts == [1] * 6


def test_integer_route_nonvanishing():
    d = cycle_decompose_integer([0, 1], 6)
    assert not d.vanishing
    assert d.components is None and d.nonnegative is None


def test_integer_route_negative_coefficients_l30():
    d = cycle_decompose_integer([5, 6, 12, 18, 24, 25], 30)
    assert d.vanishing
    assert d.method == "lattice-solve"
    assert d.search_complete
    assert d.nonnegative is False
    # the witness reconstructs the multiset exactly
    counts = [0] * 30
    for p, r, c in d.components:
        step = 30 // p
        for m in range(p):
            counts[(r + m * step) % 30] += c
    expect = [0] * 30
    for e in (5, 6, 12, 18, 24, 25):
        expect[e] += 1
    assert counts == expect
    assert any(c < 0 for _, _, c in d.components)


def test_integer_route_budget_gives_indeterminate_sign():
    d = cycle_decompose_integer([5, 6, 12, 18, 24, 25], 30, budget=2)
    assert d.vanishing and d.method == "lattice-solve"
    assert not d.search_complete
    assert d.nonnegative is None


def test_lam_leung_admissible_lengths():
    # l = 6: primes 2 and 3 reach everything except 1
    assert [lam_leung_length_admissible(n, 6) for n in range(6)] == \
        [True, False, True, True, True, True]
    # l = 5: only multiples of 5
    assert lam_leung_length_admissible(10, 5)
    assert not lam_leung_length_admissible(7, 5)
    with pytest.raises(InvalidInputError):
        lam_leung_length_admissible(-1, 6)


def test_weak_isolation_probe_fields():
    probe = weak_isolation_probe(fourier_cyclic(5))
    assert probe.regular is True
    assert probe.certified_isolated
    assert probe.butson_order == 5
    # root-of-unity type, so not a separating candidate
    assert not probe.counterexample_candidate
