import math

import numpy as np
import pytest

from linalg import as_matrix, min_eig_symmetric, solve_linear, spectral_radius
from utils.errors import SingularMatrixError


class TestSpectralRadius:
    @pytest.mark.parametrize(
        "matrix, expected",
        [
            ([[1.0, 0.0], [1.0, 0.0]], 1.0),
            (np.eye(3), 1.0),
            ([[1.0, 0.0, 1.0], [math.sqrt(2), 0.0, -math.sqrt(2)], [1.0, 0.0, 1.0]], 2.0),
            ([[-3.5]], 3.5),
            ([[0.0, -1.0], [1.0, 0.0]], 1.0),
        ],
    )
    def test_known_values(self, matrix, expected):
        assert spectral_radius(matrix) == pytest.approx(expected, abs=1e-10)

    def test_homogeneous(self, rng):
        M = rng.standard_normal((5, 5))
        for c in (-2.5, 0.3, 7.0):
            assert spectral_radius(c * M) == pytest.approx(abs(c) * spectral_radius(M), rel=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_matches_characteristic_polynomial_roots(self, rng, n):
        M = rng.standard_normal((n, n))
        roots = np.roots(np.poly(M))
        assert spectral_radius(M) == pytest.approx(float(np.max(np.abs(roots))), abs=1e-6)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            spectral_radius([[1.0, 2.0, 3.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            spectral_radius([[1.0, np.nan], [0.0, 1.0]])

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ValueError):
            spectral_radius(np.eye(2), rel_tol=0.5)
        with pytest.raises(ValueError):
            spectral_radius(np.eye(2), rel_tol=0.0)

    def test_tolerance_does_not_change_result(self, rng):
        M = rng.standard_normal((6, 6))
        assert spectral_radius(M, rel_tol=1e-2) == spectral_radius(M, rel_tol=1e-12)


class TestSolveLinear:
    @pytest.mark.parametrize(
        "matrix, rhs, expected",
        [
            (np.eye(2), [3.0, 4.0], [3.0, 4.0]),
            ([[2.0, 0.0], [0.0, 4.0]], [2.0, 8.0], [1.0, 2.0]),
            ([[1.0 - 0.5 * 0.5]], [1.0], [4.0 / 3.0]),
        ],
    )
    def test_known_solutions(self, matrix, rhs, expected):
        np.testing.assert_allclose(solve_linear(matrix, rhs), expected, atol=1e-12)

    def test_reproduces_rhs(self, rng):
        M = rng.standard_normal((8, 8)) + 8.0 * np.eye(8)
        b = rng.standard_normal(8)
        x = solve_linear(M, b)
        assert float(np.max(np.abs(M @ x - b))) <= 1e-8

    def test_ill_conditioned_matrix(self, rng):
        # condition number 1e9, solution of norm ~1e9
        U, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        V, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        M = U @ np.diag([1.0, 0.5, 0.1, 1e-9]) @ V.T
        b = U[:, 3] + 0.1 * U[:, 0]
        x = solve_linear(M, b)
        expected = V[:, 3] * 1e9 + 0.1 * V[:, 0]
        np.testing.assert_allclose(x, expected, rtol=1e-4, atol=1e-4 * 1e9)

    def test_singular_matrix(self):
        with pytest.raises(SingularMatrixError):
            solve_linear([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve_linear(np.eye(2), [1.0, 2.0, 3.0])


class TestMinEigSymmetric:
    def test_example_gram_is_psd(self):
        # singular Gram matrix: the smallest eigenvalue is zero up to roundoff
        S = np.array([[2.0, -3.0, 1.0], [-3.0, 5.0, 0.0], [1.0, 0.0, 5.0]])
        assert min_eig_symmetric(S) >= -1e-10 * (1.0 + float(np.max(np.abs(S))))
        assert min_eig_symmetric(S) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize(
        "matrix, expected",
        [
            (np.eye(4), 1.0),
            ([[0.0, 1.0], [1.0, 0.0]], -1.0),
            ([[-2.0]], -2.0),
        ],
    )
    def test_known_values(self, matrix, expected):
        assert min_eig_symmetric(matrix) == pytest.approx(expected, abs=1e-10)

    def test_shift(self, rng):
        B = rng.standard_normal((6, 6))
        S = B + B.T
        base = min_eig_symmetric(S)
        for t in (-1.0, 0.5, 3.0):
            assert min_eig_symmetric(S + t * np.eye(6)) == pytest.approx(base + t, abs=1e-9)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            min_eig_symmetric([[1.0, 2.0], [0.0, 1.0]])


def test_as_matrix_is_read_only():
    M = as_matrix([[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(ValueError):
        M[0, 0] = 5.0
