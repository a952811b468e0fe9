import itertools
import math

import numpy as np
import pytest

from config.matrix_sets import ANDO_SHIH, QUARTIC_SOS_EXAMPLE, QUARTIC_SOS_MONOMIALS
from symalg import (
    coefficient_functionals,
    compose_coeffs,
    enumerate_basis,
    eval_poly,
    from_monomial_coeffs,
    gram_to_coeffs,
    gram_to_monomials,
    induced_matrix,
    lift_dimension,
    lift_vector,
    monomial_key,
    norm_power_poly,
    permanent,
    to_monomial_coeffs,
    zero_poly,
)
from utils.errors import DimensionCapError


class TestBasis:
    def test_cubic_in_two_variables(self):
        basis = enumerate_basis(2, 3)
        assert basis.indices == ((3, 0), (2, 1), (1, 2), (0, 3))
        np.testing.assert_allclose(basis.scalings, [1.0, math.sqrt(3), math.sqrt(3), 1.0])

    def test_single_variable(self):
        basis = enumerate_basis(1, 5)
        assert basis.indices == ((5,),)
        np.testing.assert_allclose(basis.scalings, [1.0])

    @pytest.mark.parametrize("n, d, size", [(10, 4, 715), (10, 2, 55), (3, 3, 10), (2, 5, 6)])
    def test_size(self, n, d, size):
        assert len(enumerate_basis(n, d)) == size == lift_dimension(n, d)

    def test_order_is_lexicographically_descending(self):
        indices = enumerate_basis(3, 3).indices
        assert list(indices) == sorted(indices, reverse=True)

    def test_position_and_labels(self):
        basis = enumerate_basis(2, 2)
        assert basis.position((1, 1)) == 1
        assert basis.labels() == ["(2,0)", "(1,1)", "(0,2)"]
        with pytest.raises(ValueError):
            basis.position((3, 0))

    def test_rejects_degree_zero(self):
        with pytest.raises(ValueError):
            enumerate_basis(2, 0)


class TestLiftVector:
    def test_quadratic_lift(self):
        u, v = 0.7, -1.3
        np.testing.assert_allclose(lift_vector([u, v], 2), [u * u, math.sqrt(2) * u * v, v * v])

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_unit_vector(self, k):
        x = np.zeros(3)
        x[k] = 1.0
        lifted = lift_vector(x, 3)
        expected = np.zeros(len(lifted))
        target = tuple(3 if i == k else 0 for i in range(3))
        expected[enumerate_basis(3, 3).position(target)] = 1.0
        np.testing.assert_allclose(lifted, expected)

    def test_norm_of_known_point(self):
        assert float(np.linalg.norm(lift_vector([3.0, 4.0], 2))) == pytest.approx(25.0)

    @pytest.mark.parametrize("n, d", [(2, 3), (3, 2), (4, 4)])
    def test_norm_law(self, rng, n, d):
        x = rng.standard_normal(n)
        assert float(np.linalg.norm(lift_vector(x, d))) == pytest.approx(float(np.linalg.norm(x)) ** d, rel=1e-10)


class TestPermanent:
    @pytest.mark.parametrize("method", ["ryser", "naive"])
    @pytest.mark.parametrize(
        "matrix, expected",
        [
            ([[1.0, 2.0], [3.0, 4.0]], 10.0),
            (np.ones((3, 3)), 6.0),
            ([[1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [2.0, 2.0, 2.0]], 12.0),
            ([[5.0]], 5.0),
        ],
    )
    def test_known_values(self, method, matrix, expected):
        assert permanent(matrix, method) == pytest.approx(expected)

    @pytest.mark.parametrize("size", [1, 2, 3, 4, 5, 6])
    def test_ryser_matches_naive(self, rng, size):
        M = rng.standard_normal((size, size))
        assert permanent(M, "ryser") == pytest.approx(permanent(M, "naive"), rel=1e-9, abs=1e-12)

    def test_size_limits(self):
        with pytest.raises(DimensionCapError):
            permanent(np.ones((9, 9)), "naive")
        with pytest.raises(DimensionCapError):
            permanent(np.ones((21, 21)), "ryser")

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            permanent(np.eye(2), "glynn")


class TestInducedMatrix:
    def test_cubic_entry(self):
        A = np.array([[1.0, 2.0], [3.0, 4.0]])
        basis = enumerate_basis(2, 3)
        lifted = induced_matrix(A, 3)
        row, col = basis.position((2, 1)), basis.position((3, 0))
        assert lifted[row, col] == pytest.approx(math.sqrt(3) * A[0, 0] ** 2 * A[1, 0])

    @pytest.mark.parametrize("n, d", [(2, 2), (3, 3), (4, 2)])
    def test_identity(self, n, d):
        np.testing.assert_allclose(induced_matrix(np.eye(n), d), np.eye(lift_dimension(n, d)), atol=1e-12)

    def test_ando_shih_first_matrix(self):
        expected = [[1.0, 0.0, 0.0], [math.sqrt(2), 0.0, 0.0], [1.0, 0.0, 0.0]]
        np.testing.assert_allclose(induced_matrix(ANDO_SHIH[0], 2), expected, atol=1e-12)

    def test_lifted_sum_of_ando_shih(self):
        total = induced_matrix(ANDO_SHIH[0], 2) + induced_matrix(ANDO_SHIH[1], 2)
        expected = [[1.0, 0.0, 1.0], [math.sqrt(2), 0.0, -math.sqrt(2)], [1.0, 0.0, 1.0]]
        np.testing.assert_allclose(total, expected, atol=1e-12)

    @pytest.mark.parametrize("n, d", [(2, 3), (3, 2), (3, 3), (4, 2)])
    def test_defining_identity(self, rng, n, d):
        A = rng.standard_normal((n, n))
        x = rng.standard_normal(n)
        np.testing.assert_allclose(induced_matrix(A, d) @ lift_vector(x, d), lift_vector(A @ x, d), atol=1e-10)

    @pytest.mark.parametrize("n, d", [(2, 2), (2, 4), (3, 3), (4, 2)])
    def test_homomorphism(self, rng, n, d):
        A = rng.standard_normal((n, n))
        B = rng.standard_normal((n, n))
        left = induced_matrix(A @ B, d)
        right = induced_matrix(A, d) @ induced_matrix(B, d)
        scale = 1.0 + float(np.max(np.abs(right)))
        assert float(np.max(np.abs(left - right))) <= 1e-9 * scale

    @pytest.mark.parametrize("n, d", [(2, 2), (2, 3), (3, 2), (3, 3)])
    def test_eigenvalue_law(self, rng, n, d):
        A = rng.standard_normal((n, n))
        lam = np.linalg.eigvals(A)
        expected = sorted(abs(np.prod(lam[list(S)])) for S in itertools.combinations_with_replacement(range(n), d))
        actual = sorted(np.abs(np.linalg.eigvals(induced_matrix(A, d))))
        np.testing.assert_allclose(actual, expected, rtol=1e-6, atol=1e-6)

    @pytest.mark.parametrize("n, d", [(2, 2), (2, 3), (3, 2), (3, 3)])
    def test_inverse_law(self, rng, n, d):
        A = rng.standard_normal((n, n)) + 3.0 * np.eye(n)
        np.testing.assert_allclose(
            induced_matrix(np.linalg.inv(A), d), np.linalg.inv(induced_matrix(A, d)), atol=1e-7
        )


class TestPolynomials:
    def test_example_gram_gives_quartic(self):
        Q = [[2.0, -3.0, 1.0], [-3.0, 5.0, 0.0], [1.0, 0.0, 5.0]]
        terms = gram_to_monomials(Q, QUARTIC_SOS_MONOMIALS)
        nonzero = {k: v for k, v in terms.items() if abs(v) > 1e-12}
        assert nonzero == pytest.approx(QUARTIC_SOS_EXAMPLE)

    def test_zero_gram(self):
        assert gram_to_coeffs(np.zeros((3, 3)), enumerate_basis(2, 2)).is_zero()

    def test_identity_gram_is_squared_norm(self):
        p = gram_to_coeffs(np.eye(2), enumerate_basis(2, 1))
        assert to_monomial_coeffs(p) == pytest.approx({(2, 0): 1.0, (1, 1): 0.0, (0, 2): 1.0})

    def test_gram_agrees_with_quadratic_form(self, rng):
        basis = enumerate_basis(3, 2)
        B = rng.standard_normal((len(basis), len(basis)))
        Q = B + B.T
        p = gram_to_coeffs(Q, basis)
        for _ in range(20):
            x = rng.standard_normal(3)
            y = lift_vector(x, 2)
            direct = float(y @ Q @ y)
            assert eval_poly(p, x) == pytest.approx(direct, rel=1e-9, abs=1e-12)

    def test_coefficient_functionals_are_symmetric(self):
        E = coefficient_functionals(2, 2)
        assert E.shape == (5, 3, 3)
        np.testing.assert_allclose(E, np.transpose(E, (0, 2, 1)))

    def test_gram_size_mismatch(self):
        with pytest.raises(ValueError):
            gram_to_coeffs(np.eye(2), enumerate_basis(2, 2))

    def test_compose_swap(self):
        p = from_monomial_coeffs(2, 2, {(2, 0): 1.0})
        swapped = compose_coeffs(p, [[0.0, 1.0], [1.0, 0.0]])
        assert to_monomial_coeffs(swapped) == pytest.approx({(2, 0): 0.0, (1, 1): 0.0, (0, 2): 1.0})

    def test_compose_identity(self, rng):
        p = gram_to_coeffs(np.diag(rng.uniform(0.5, 2.0, size=3)), enumerate_basis(2, 2))
        np.testing.assert_allclose(compose_coeffs(p, np.eye(2)).coeffs, p.coeffs, atol=1e-12)

    def test_compose_annihilates(self, rng):
        # (x1^2 - x2^2)^2 vanishes on the range of the first Ando-Shih matrix
        p = from_monomial_coeffs(2, 4, {(4, 0): 1.0, (2, 2): -2.0, (0, 4): 1.0})
        q = compose_coeffs(p, ANDO_SHIH[0])
        for _ in range(10):
            assert eval_poly(q, rng.standard_normal(2)) == pytest.approx(0.0, abs=1e-10)

    def test_compose_dimension_mismatch(self):
        with pytest.raises(ValueError):
            compose_coeffs(zero_poly(2, 2), np.eye(3))

    def test_eval_known_values(self):
        assert eval_poly(from_monomial_coeffs(2, 4, {(4, 0): 1.0, (0, 4): 1.0}), [1.0, 1.0]) == pytest.approx(2.0)
        quartic = from_monomial_coeffs(2, 4, QUARTIC_SOS_EXAMPLE)
        assert eval_poly(quartic, [1.0, 1.0]) == pytest.approx(8.0)
        x, y = 1.0, 1.0
        sos_form = 0.5 * (2 * x * x - 3 * y * y + x * y) ** 2 + 0.5 * (y * y + 3 * x * y) ** 2
        assert eval_poly(quartic, [x, y]) == pytest.approx(sos_form)

    def test_eval_dimension_mismatch(self):
        with pytest.raises(ValueError):
            eval_poly(zero_poly(2, 2), [1.0, 2.0, 3.0])

    def test_monomial_round_trip(self):
        p = from_monomial_coeffs(2, 4, QUARTIC_SOS_EXAMPLE)
        terms = {k: v for k, v in to_monomial_coeffs(p).items() if v}
        assert terms == pytest.approx(QUARTIC_SOS_EXAMPLE)

    def test_norm_power(self, rng):
        p = norm_power_poly(3, 2)
        x = rng.standard_normal(3)
        assert eval_poly(p, x) == pytest.approx(float(x @ x) ** 2)

    def test_monomial_key(self):
        assert monomial_key((2, 1, 0)) == "x1^2*x2"
        assert monomial_key((0, 0)) == "1"

    def test_arithmetic(self):
        p = norm_power_poly(2, 1)
        np.testing.assert_allclose((p + p - p.scaled(2.0)).coeffs, 0.0)
        with pytest.raises(ValueError):
            p + norm_power_poly(2, 2)
