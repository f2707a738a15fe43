import itertools
import math

import numpy as np
import pytest

from sensorqubo.errors import InvalidCardinality, ProblemTooLarge
from sensorqubo.expansion import expand_objective, masked_determinant
from sensorqubo.model import (
    SensorSelection,
    SpinPolynomial,
    evaluate_polynomial,
    selection_from_spins,
    validate_covariance,
)
from sensorqubo.oracle import (
    all_spin_assignments,
    brute_force_optimum,
    entropy,
    interpolate_polynomial,
    mutual_information,
    subset_objective,
    walsh_hadamard,
)

from conftest import random_pd

HALF_LOG_2PI_E = 0.5 * (1 + math.log(2 * math.pi))


def all_selections(n):
    for mask in range(1 << n):
        yield SensorSelection(n, frozenset(i for i in range(n) if mask >> i & 1))


class TestEntropy:
    def test_unit_gaussian(self):
        assert entropy(validate_covariance([[1.0]])) == pytest.approx(1.41894, abs=1e-5)

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_identity(self, n):
        assert entropy(validate_covariance(np.eye(n))) == pytest.approx(n * HALF_LOG_2PI_E, abs=1e-12)

    def test_toy_a(self, toy_a):
        # det(toy A) = 5.98 by cofactor expansion along the first row
        assert np.linalg.det(toy_a.entries) == pytest.approx(5.98, abs=1e-12)
        assert entropy(toy_a) == pytest.approx(0.5 * math.log(5.98) + 1.5 * (1 + math.log(2 * math.pi)), abs=1e-12)
        assert entropy(toy_a) == pytest.approx(5.151, abs=1e-3)

    def test_empty_subset(self, toy_a):
        assert entropy(toy_a, []) == 0.0


class TestSubsetObjective:
    def test_toy_a(self, toy_a):
        assert subset_objective(toy_a, SensorSelection.from_labels(3, [1, 2])) == pytest.approx(7.98, abs=1e-12)

    def test_toy_b(self, toy_b):
        assert subset_objective(toy_b, SensorSelection.from_labels(3, [2, 3])) == pytest.approx(7.98, abs=1e-12)
        # (2*2 - 1*1) * 2
        assert subset_objective(toy_b, SensorSelection.from_labels(3, [1, 3])) == pytest.approx(6.0, abs=1e-12)

    def test_empty_block(self, toy_a):
        assert subset_objective(toy_a, SensorSelection(3)) == pytest.approx(5.98, abs=1e-12)


class TestMutualInformation:
    def test_trivial_selections(self, toy_a):
        assert mutual_information(toy_a, SensorSelection(3)) == 0.0
        assert mutual_information(toy_a, SensorSelection(3, frozenset({0, 1, 2}))) == 0.0

    def test_identity(self):
        cov = validate_covariance(np.eye(4))
        for sel in all_selections(4):
            assert mutual_information(cov, sel) == pytest.approx(0.0, abs=1e-15)

    def test_toy_a(self, toy_a):
        mi = mutual_information(toy_a, SensorSelection.from_labels(3, [1, 2]))
        assert mi == pytest.approx(0.5 * math.log(7.98 / 5.98), abs=1e-12)
        assert mi == pytest.approx(0.1443, abs=1e-4)

    def test_complement_nonnegative_and_entropy_identity(self, rng):
        for n in range(1, 7):
            cov = random_pd(rng, n)
            for sel in all_selections(n):
                mi = mutual_information(cov, sel)
                assert mi == mutual_information(cov, sel.complement())
                assert mi >= -1e-12
                h = entropy(cov, sel.selected) + entropy(cov, sel.unselected) - entropy(cov)
                assert h == pytest.approx(mi, abs=1e-9)


class TestBruteForce:
    def test_toy_a(self, toy_a):
        res = brute_force_optimum(toy_a)
        assert res.value == pytest.approx(7.98, abs=1e-12)
        assert res.partitions() == {((0, 1), (2,)), ((1, 2), (0,))}

    def test_toy_b(self, toy_b):
        res = brute_force_optimum(toy_b)
        assert res.value == pytest.approx(7.98, abs=1e-12)
        assert res.partitions() == {((1, 2), (0,))}

    def test_toy_a_fixed_size(self, toy_a):
        res = brute_force_optimum(toy_a, k=1)
        assert {tuple(s.labels()) for s in res.maximizers} == {(1,), (3,)}
        assert res.value == pytest.approx(7.98, abs=1e-12)

    def test_matches_polynomial_scan(self, rng):
        for n in range(2, 7):
            cov = random_pd(rng, n)
            p = expand_objective(cov)
            values = {s: evaluate_polynomial(p, s) for s in itertools.product([1, -1], repeat=n)}
            top = max(values.values())
            scan = {selection_from_spins(s).partition() for s, v in values.items() if v >= top - 1e-9 * abs(top)}
            assert brute_force_optimum(cov).partitions() == scan

    def test_chunked_enumeration_agrees(self, rng):
        cov = random_pd(rng, 7)
        assert brute_force_optimum(cov, chunk=3).partitions() == brute_force_optimum(cov).partitions()

    def test_errors(self, toy_a):
        with pytest.raises(InvalidCardinality):
            brute_force_optimum(toy_a, k=4)
        with pytest.raises(ProblemTooLarge):
            brute_force_optimum(validate_covariance(np.eye(25)))


class TestInterpolation:
    def test_walsh_hadamard_matches_dense_matrix(self):
        from scipy.linalg import hadamard

        v = np.random.default_rng(0).normal(size=16)
        np.testing.assert_allclose(walsh_hadamard(v), hadamard(16) @ v, atol=1e-12)

    def test_assignment_rows(self):
        np.testing.assert_array_equal(all_spin_assignments(2), [[1, 1], [-1, 1], [1, -1], [-1, -1]])

    def test_constant(self):
        assert interpolate_polynomial(lambda s: 3.25, 4).terms == {(): 3.25}

    def test_single_character(self):
        assert interpolate_polynomial(lambda s: s[0] * s[1], 3).terms == {(0, 1): 1.0}

    def test_toy_a_matches_expansion(self, toy_a):
        p = interpolate_polynomial(lambda s: masked_determinant(toy_a, selection_from_spins(s)), 3)
        q = expand_objective(toy_a)
        assert p.terms.keys() == q.terms.keys()
        for m in p.terms:
            assert abs(p.terms[m] - q.terms[m]) <= 1e-9

    def test_round_trip_random_sparse(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 9))
            terms = {}
            for _ in range(int(rng.integers(1, 6))):
                mono = tuple(sorted(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False).tolist()))
                terms[mono] = float(rng.uniform(0.5, 3.0)) * (1 if rng.random() < 0.5 else -1)
            p = SpinPolynomial(n, terms)
            back = interpolate_polynomial(lambda s: evaluate_polynomial(p, s), n)
            assert back.terms.keys() == p.terms.keys()
            for m, c in p.terms.items():
                assert back.terms[m] == pytest.approx(c, abs=1e-12)

    def test_limit(self):
        with pytest.raises(ProblemTooLarge):
            interpolate_polynomial(lambda s: 0.0, 21)
