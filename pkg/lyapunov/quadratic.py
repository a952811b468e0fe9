import logging
from typing import Optional, Sequence

import numpy as np

from bounds.models import MatrixSet
from bounds.spectral import lifted_matrices
from config.settings import SETTINGS
from linalg import as_matrix, solve_linear, spectral_radius, symmetrize


LOGGER = logging.getLogger(__name__)


def _congruence_operator(mats: Sequence[np.ndarray]) -> np.ndarray:
    # row-major vec(B^T P B) = (B^T kron B^T) vec(P)
    return sum(np.kron(B.T, B.T) for B in mats)


def _weight(Q, size: int) -> np.ndarray:
    if Q is None:
        return np.eye(size)
    W = as_matrix(Q, square=True, name="Q")
    if W.shape[0] != size:
        raise ValueError(f"Q is {W.shape[0]}x{W.shape[0]}, expected {size}x{size}")
    return symmetrize(np.array(W))


def iterate_quadratic(
    mset: MatrixSet,
    d: int,
    beta: float,
    Q=None,
    steps: int = 100,
    lifted: Optional[Sequence[np.ndarray]] = None,
) -> np.ndarray:
    """P_0 = 0, P_(k+1) = Q + (1/beta) sum_i (A_i^[d])^T P_k A_i^[d]."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    mats = lifted if lifted is not None else lifted_matrices(mset, d)
    W = _weight(Q, mats[0].shape[0])
    P = np.zeros_like(W)
    for _ in range(steps):
        P = W + sum(B.T @ P @ B for B in mats) / beta
    return symmetrize(P)


def quadratic_fixed_point(
    mset: MatrixSet,
    d: int,
    beta: Optional[float] = None,
    Q=None,
    lifted: Optional[Sequence[np.ndarray]] = None,
) -> np.ndarray:
    """Limit P of ``iterate_quadratic``, solved as one linear system.

    For Q positive definite, P is positive definite and beta P - B_i^T P B_i
    is PSD for every i, a common quadratic certificate at gamma = beta^(1/2d).
    beta must exceed the spectral radius of P -> sum_i B_i^T P B_i.
    """
    mats = lifted if lifted is not None else lifted_matrices(mset, d)
    size = mats[0].shape[0]
    W = _weight(Q, size)
    L = _congruence_operator(mats)
    rho = spectral_radius(L, SETTINGS.spectral_tol)
    if beta is None:
        beta = rho * (1.0 + 1e-6) if rho > 0 else 1.0
    if not beta > rho:
        raise ValueError(f"beta={beta!r} must exceed the spectral radius {rho!r} of the congruence map")
    vec = solve_linear(np.eye(size * size) - L / beta, W.reshape(-1))
    LOGGER.debug("Quadratic fixed point of size %s at beta=%.10g (rho=%.10g)", size, beta, rho)
    return symmetrize(vec.reshape(size, size))
