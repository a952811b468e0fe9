import logging
from typing import Sequence, Union

import numpy as np
import scipy.linalg

from utils.errors import SingularMatrixError


LOGGER = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, Sequence]

DEFAULT_SPECTRAL_TOL = 1e-10
SYMMETRY_TOL = 1e-12


def as_matrix(data: ArrayLike, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Return a read-only float64 copy of ``data`` after shape and finiteness checks."""
    arr = np.array(data, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a nonempty 2-D array, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


def as_vector(data: ArrayLike, *, name: str = "vector") -> np.ndarray:
    arr = np.array(data, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError(f"{name} must be a nonempty 1-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


def symmetrize(S: np.ndarray) -> np.ndarray:
    return 0.5 * (S + S.T)


def spectral_radius(M: ArrayLike, rel_tol: float = DEFAULT_SPECTRAL_TOL) -> float:
    """Largest eigenvalue modulus of a real square matrix.

    LAPACK ``geev`` balances, reduces to Hessenberg form and runs the
    Francis double-shift QR, so complex dominant pairs of lifted sums are
    handled like real ones. Its backward-stable result meets any
    ``rel_tol`` >= 1e-10 for the non-defective dominant eigenvalues the
    bounds produce; ``rel_tol`` is validated, and a tighter request gets
    the same LAPACK result.
    """
    if not 0 < rel_tol <= 1e-2:
        raise ValueError(f"rel_tol must lie in (0, 1e-2], got {rel_tol!r}")
    A = as_matrix(M, square=True)
    if A.shape[0] == 1:
        return float(abs(A[0, 0]))
    eigenvalues = np.linalg.eigvals(A)
    return float(np.max(np.abs(eigenvalues)))


def solve_linear(M: ArrayLike, b: ArrayLike) -> np.ndarray:
    """Solve ``M x = b`` by LU with partial pivoting (one refinement step)."""
    A = as_matrix(M, square=True)
    rhs = as_vector(b, name="b")
    n = A.shape[0]
    if rhs.shape[0] != n:
        raise ValueError(f"dimension mismatch: matrix is {n}x{n}, b has {rhs.shape[0]} entries")

    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    scale = max(float(np.max(pivots)), 1.0)
    if float(np.min(pivots)) <= n * np.finfo(float).eps * scale:
        raise SingularMatrixError(
            f"matrix is singular to working precision (smallest pivot {float(np.min(pivots)):.3e})"
        )

    x = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    residual = rhs - A @ x
    x = x + scipy.linalg.lu_solve((lu, piv), residual, check_finite=False)

    # backward-error bound: a large but accurate x of an ill-conditioned system passes
    norm_a = float(np.max(np.sum(np.abs(A), axis=1)))
    norm_x = float(np.max(np.abs(x)))
    bound = 1e-9 * (1.0 + float(np.max(np.abs(rhs)))) + 10.0 * n * np.finfo(float).eps * norm_a * norm_x
    err = float(np.max(np.abs(A @ x - rhs)))
    if err > bound:
        raise SingularMatrixError(f"matrix is too ill-conditioned: residual {err:.3e} exceeds {bound:.3e}")
    return x


def min_eig_symmetric(S: ArrayLike) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    A = as_matrix(S, square=True)
    scale = max(float(np.max(np.abs(A))), 1.0)
    asym = float(np.max(np.abs(A - A.T)))
    if asym > SYMMETRY_TOL * scale:
        raise ValueError(f"matrix is not symmetric (asymmetry {asym:.3e})")
    return float(scipy.linalg.eigvalsh(symmetrize(A), subset_by_index=[0, 0], check_finite=False)[0])
