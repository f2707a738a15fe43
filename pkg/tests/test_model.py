import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sensorqubo.errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    EmptyMatrix,
    IndexOutOfRange,
    NotPositiveDefinite,
)
from sensorqubo.model import (
    SensorSelection,
    SpinPolynomial,
    evaluate_polynomial,
    selection_from_spins,
    validate_covariance,
)

from conftest import TOY_A, random_pd


class TestValidateCovariance:
    def test_accepts_toy_a(self):
        cov = validate_covariance(TOY_A)
        assert cov.n == 3
        np.testing.assert_array_equal(cov.entries, np.array(TOY_A))

    def test_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            validate_covariance([[1, 2], [2, 1]])

    def test_asymmetric(self):
        with pytest.raises(AsymmetricMatrix):
            validate_covariance([[2, 0.1], [0.5, 2]])

    def test_empty(self):
        with pytest.raises(EmptyMatrix):
            validate_covariance(np.zeros((0, 0)))

    def test_rounding_noise_is_averaged(self):
        cov = validate_covariance([[2.0, 0.1 + 1e-10], [0.1, 2.0]])
        assert cov.entries[0, 1] == cov.entries[1, 0]
        assert cov.entries[0, 1] == pytest.approx(0.1 + 5e-11, abs=1e-15)

    def test_nonpositive_diagonal(self):
        with pytest.raises(NotPositiveDefinite):
            validate_covariance([[0.0]])

    def test_read_only(self):
        cov = validate_covariance(TOY_A)
        with pytest.raises(ValueError):
            cov.entries[0, 0] = 5.0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_idempotent(self, n, seed):
        cov = random_pd(np.random.default_rng(seed), n)
        again = validate_covariance(cov.entries)
        np.testing.assert_array_equal(again.entries, cov.entries)


class TestSelection:
    def test_from_spins(self):
        sel = selection_from_spins([1, 1, -1])
        assert sel.selected == {0, 1}
        assert sel.unselected == {2}
        assert sel.labels() == [1, 2]

    def test_all_negative(self):
        sel = selection_from_spins([-1, -1, -1])
        assert sel.selected == frozenset()
        assert sel.unselected == {0, 1, 2}

    def test_complementary_patterns_same_partition(self):
        a = selection_from_spins([1, -1, -1])
        b = selection_from_spins([-1, 1, 1])
        assert a.complement() == b
        assert a.partition() == b.partition() == ((1, 2), (0,))

    @given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=10))
    def test_negation_swaps_blocks(self, spins):
        sel = selection_from_spins(spins)
        neg = selection_from_spins([-v for v in spins])
        assert neg.selected == sel.unselected
        assert neg.unselected == sel.selected
        assert sel.selected | sel.unselected == set(range(len(spins)))
        assert not sel.selected & sel.unselected

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            SensorSelection(3, frozenset({3}))

    def test_labels_round_trip(self):
        sel = SensorSelection.from_labels(4, [2, 4])
        assert sel.selected == {1, 3}
        assert str(sel) == "{S2,S4}"


class TestSpinPolynomial:
    def test_constant(self):
        p = SpinPolynomial(3, {(): 5.98})
        assert evaluate_polynomial(p, [1, -1, 1]) == 5.98

    def test_substitution(self):
        p = SpinPolynomial(2, {(): 1.0, (0, 1): 2.0})
        assert evaluate_polynomial(p, [1, -1]) == -1.0

    def test_reduction_and_zero_dropping(self):
        p = SpinPolynomial(3, [((0, 1, 1), 2.0), ((0,), -2.0), ((2,), 1.0)])
        assert p.terms == {(2,): 1.0}

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            evaluate_polynomial(SpinPolynomial(2, {(): 1.0}), [1, 1, 1])

    @settings(max_examples=50)
    @given(st.data())
    def test_linear_in_coefficients(self, data):
        n = data.draw(st.integers(1, 5))
        mono = st.lists(st.integers(0, n - 1), max_size=n, unique=True).map(lambda m: tuple(sorted(m)))
        coef = st.floats(-10, 10, allow_nan=False)
        p = SpinPolynomial(n, data.draw(st.dictionaries(mono, coef, max_size=6)))
        q = SpinPolynomial(n, data.draw(st.dictionaries(mono, coef, max_size=6)))
        s = data.draw(st.lists(st.sampled_from([-1, 1]), min_size=n, max_size=n))
        assert evaluate_polynomial(p + q, s) == pytest.approx(
            evaluate_polynomial(p, s) + evaluate_polynomial(q, s), abs=1e-9)
