from fractions import Fraction

import numpy as np
import pytest

from hadlab import (InvalidInputError, PartialPermutation, PHMatrix,
                    SearchBudgetExceeded, classicality_test, compose,
                    cyclic_moment_oracle, extract_semigroup, f22q,
                    fourier_cyclic, interval_shift_maps, moment,
                    moment_matrix, pre_latin_square,
                    predicted_truncated_semigroup, semigroup_closure,
                    sigma_from_square, truncated_fourier, verify_submagic)


def f25():
    return truncated_fourier([0, 1], [5])


def test_submagic_truncated_and_square():
    rep = verify_submagic(f25())
    assert rep.ok
    assert rep.max_row_residual < 1e-12
    rep = verify_submagic(fourier_cyclic(3))
    assert rep.ok and rep.max_col_residual < 1e-12


def test_submagic_rejects_non_hadamard():
    bad = PHMatrix([[1, 1], [1, 1]])
    with pytest.raises(InvalidInputError):
        verify_submagic(bad)


def test_classicality_split():
    assert classicality_test(f25()).classical
    assert classicality_test(fourier_cyclic(6)).classical
    rep = classicality_test(f22q(Fraction(1, 20)))
    assert not rep.classical
    assert rep.worst_overlap > 0.1


def test_pre_latin_square_f25():
    square, reps = pre_latin_square(f25())
    assert square.labels == ((1, 2), (3, 1))
    assert square.n_labels == 3
    assert len(reps) == 3
    assert np.allclose(reps[0], np.ones(5))


def test_pre_latin_square_none_for_quantum_grid():
    assert pre_latin_square(f22q(Fraction(1, 20))) is None


def test_partial_permutation_basics():
    pp = PartialPermutation((None, 0))
    assert pp.m == 2 and pp.kappa == 1
    assert pp.notation() == "21"
    assert PartialPermutation.identity(3).notation() == "id"
    assert PartialPermutation.empty(3).notation() == "∅"
    assert PartialPermutation((1, 2, None)).notation() == "12,23"
    with pytest.raises(InvalidInputError):
        PartialPermutation((0, 0, None))
    with pytest.raises(InvalidInputError):
        PartialPermutation((5, None))


def test_compose_semantics():
    # f after g
    f = PartialPermutation((None, 0))       # 2 -> 1
    g = PartialPermutation((1, None))       # 1 -> 2
    assert compose(f, g).targets == (0, None)
    assert compose(g, f).targets == (None, 1)
    assert compose(f, f).targets == (None, None)
    ident = PartialPermutation.identity(2)
    assert compose(f, ident) == f == compose(ident, f)
    with pytest.raises(InvalidInputError):
        compose(f, PartialPermutation.identity(3))


def test_kappa_subadditive_random():
    rng = np.random.default_rng(41)
    for _ in range(200):
        m = int(rng.integers(1, 7))

        def rand_pp():
            perm = rng.permutation(m)
            keep = rng.random(m) < 0.6
            return PartialPermutation(
                tuple(int(p) if k else None for p, k in zip(perm, keep)))

        f, g, h = rand_pp(), rand_pp(), rand_pp()
        fg = compose(f, g)
        assert fg.kappa <= min(f.kappa, g.kappa)
        assert compose(f, compose(g, h)) == compose(compose(f, g), h)


def test_sigma_from_square_f25():
    square, _ = pre_latin_square(f25())
    assert sigma_from_square(square, 1) == PartialPermutation.identity(2)
    assert sigma_from_square(square, 2).notation() == "21"
    assert sigma_from_square(square, 3).notation() == "12"


def test_closure_f25_is_six_elements():
    closure, square = extract_semigroup(f25())
    assert square.labels == ((1, 2), (3, 1))
    assert closure.size == 6
    assert closure.generator_count == 3
    assert closure.notations() == ["id", "21", "22", "11", "12", "∅"]


def test_closure_matches_interval_model():
    for rows, orders, m, n in [([0, 1, 2], [7], 3, 7),
                               ([0, 1, 2, 3], [9], 4, 9)]:
        closure, _ = extract_semigroup(truncated_fourier(rows, orders))
        model = predicted_truncated_semigroup(m, n)
        assert closure.size == model.size == \
            1 + sum((m + 1 - k) ** 2 for k in range(1, m + 1))
        assert {e.targets for e in closure.elements} == \
            {e.targets for e in model.elements}


def test_closure_f46_exceeds_interval_model():
    # N = 2M - 2 wraps around, adding elements beyond the interval shifts
    closure, _ = extract_semigroup(truncated_fourier([0, 1, 2, 3], [6]))
    assert closure.size == 33
    shifts = {e.targets for e in interval_shift_maps(4)}
    assert shifts < {e.targets for e in closure.elements}
    big = {e.targets for e in closure.elements if e.kappa > 2}
    assert big == {e.targets for e in interval_shift_maps(4) if e.kappa > 2}
    assert len(big) == 5


def test_extract_semigroup_rejects_quantum_grid():
    with pytest.raises(InvalidInputError):
        extract_semigroup(f22q(Fraction(1, 20)))


def test_closure_cap():
    square, _ = pre_latin_square(truncated_fourier([0, 1, 2], [7]))
    gens = [sigma_from_square(square, x) for x in range(1, square.n_labels + 1)]
    with pytest.raises(SearchBudgetExceeded):
        semigroup_closure(gens, cap=5)
    assert semigroup_closure([]).size == 0


def test_interval_shift_maps_counts():
    assert len(interval_shift_maps(1)) == 2
    for m in range(1, 6):
        expect = 1 + sum((m + 1 - k) ** 2 for k in range(1, m + 1))
        assert len(interval_shift_maps(m)) == expect
    with pytest.raises(InvalidInputError):
        interval_shift_maps(0)


def test_predicted_semigroup_guards():
    with pytest.raises(InvalidInputError):
        predicted_truncated_semigroup(1, 5)
    with pytest.raises(InvalidInputError):
        predicted_truncated_semigroup(4, 6)    # 6 = 2*4 - 2 wraps


def test_moment_matrix_f2():
    mm = moment_matrix(fourier_cyclic(2), 1)
    assert mm.side == 2 and not mm.formal
    assert np.allclose(mm.matrix, 0.5 * np.ones((2, 2)))
    mm = moment_matrix(fourier_cyclic(3), 2)
    assert mm.side == 9
    # traces of projection words are bounded by 1
    assert np.max(np.abs(mm.matrix)) <= 1 + 1e-12


def test_moment_counts_square_fourier():
    for n in (2, 3, 4):
        for p in (1, 2, 3):
            rep = moment(fourier_cyclic(n), p)
            assert rep.value == cyclic_moment_oracle(n, p) == n ** (p - 1)
            assert not rep.formal
            assert not rep.ambiguous


def test_moment_truncated_is_formal():
    rep = moment(f25(), 1)
    assert rep.formal
    assert rep.value == 0
    assert abs(rep.nearest_excluded - 0.6) < 1e-9


def test_moment_guards():
    with pytest.raises(InvalidInputError):
        moment_matrix(fourier_cyclic(2), 0)
    with pytest.raises(InvalidInputError):
        moment_matrix(fourier_cyclic(2), 13)
    with pytest.raises(InvalidInputError):
        cyclic_moment_oracle(0, 1)
