import logging
from typing import Optional, Sequence

import numpy as np

from bounds.models import MatrixSet
from bounds.spectral import half_degree, lifted_sum
from config.settings import SETTINGS
from linalg import solve_linear, spectral_radius
from symalg import PolyCoeffs, norm_power_poly


LOGGER = logging.getLogger(__name__)

BETA_MARGIN = 1e-6


def _check_poly(mset: MatrixSet, Q: PolyCoeffs) -> int:
    if Q.n != mset.n:
        raise ValueError(f"Q has {Q.n} variables but the matrices are {mset.n}x{mset.n}")
    half_degree(Q.degree)
    return Q.degree


def iterate(
    mset: MatrixSet,
    Q: PolyCoeffs,
    beta: float,
    steps: int,
    lifted: Optional[Sequence[np.ndarray]] = None,
) -> PolyCoeffs:
    """V_0 = 0, V_(k+1)(x) = Q(x) + (1/beta) sum_i V_k(A_i x), carried out on coefficients."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps!r}")
    two_d = _check_poly(mset, Q)
    S = lifted_sum(mset, two_d, lifted=lifted)
    v = np.zeros_like(Q.coeffs)
    for _ in range(steps):
        v = Q.coeffs + (S.T @ v) / beta
    return PolyCoeffs(Q.basis, v)


def solve_fixed_point(
    mset: MatrixSet,
    Q: Optional[PolyCoeffs] = None,
    beta: Optional[float] = None,
    two_d: Optional[int] = None,
    lifted: Optional[Sequence[np.ndarray]] = None,
) -> PolyCoeffs:
    """Limit of ``iterate``: solve (I - (1/beta) sum_i A_i^[2d])^T v = q directly.

    Q defaults to (sum x_i^2)^d, which needs ``two_d``. beta must exceed
    rho(sum_i A_i^[2d]); otherwise the limit does not exist and ValueError is raised.
    """
    if Q is None:
        if two_d is None:
            raise ValueError("two_d is required when Q is not given")
        Q = norm_power_poly(mset.n, half_degree(two_d))
    degree = _check_poly(mset, Q)
    if two_d is not None and two_d != degree:
        raise ValueError(f"Q has degree {degree} but two_d={two_d}")
    S = lifted_sum(mset, degree, lifted=lifted)
    rho = spectral_radius(S, SETTINGS.spectral_tol)
    if beta is None:
        beta = rho * (1.0 + BETA_MARGIN) if rho > 0 else 1.0
    if not beta > rho:
        raise ValueError(
            f"beta={beta!r} must exceed the spectral radius {rho!r} of the summed lifted matrices"
        )
    system = np.eye(S.shape[0]) - S.T / beta
    v = solve_linear(system, Q.coeffs)
    LOGGER.debug("Fixed point at beta=%.10g (rho=%.10g): max |v| = %.3e", beta, rho, float(np.max(np.abs(v))))
    return PolyCoeffs(Q.basis, v)
