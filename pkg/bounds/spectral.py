import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from config.settings import SETTINGS
from linalg import spectral_radius
from symalg import induced_matrix, lift_dimension
from utils.errors import DimensionCapError
from .models import MatrixSet


LOGGER = logging.getLogger(__name__)


def half_degree(two_d: int) -> int:
    """d for an even degree 2d >= 2."""
    if int(two_d) != two_d or two_d < 2 or two_d % 2:
        raise ValueError(f"degree must be an even integer >= 2, got {two_d!r}")
    return int(two_d) // 2


def check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma <= 0:
        raise ValueError(f"gamma must be a positive finite number, got {gamma!r}")
    return gamma


def check_lift_cap(n: int, degree: int, cap: Optional[int] = None, what: str = "lifted dimension") -> int:
    cap = SETTINGS.lift_cap if cap is None else cap
    size = lift_dimension(n, degree)
    if size > cap:
        raise DimensionCapError(what, size, cap)
    return size


def lifted_matrices(mset: MatrixSet, degree: int, cap: Optional[int] = None) -> List[np.ndarray]:
    check_lift_cap(mset.n, degree, cap)
    return [induced_matrix(A, degree) for A in mset]


def lifted_sum(mset: MatrixSet, degree: int, cap: Optional[int] = None,
               lifted: Optional[Sequence[np.ndarray]] = None) -> np.ndarray:
    """A_1^[degree] + ... + A_m^[degree]."""
    mats = lifted if lifted is not None else lifted_matrices(mset, degree, cap)
    return np.sum(np.array(mats), axis=0)


def rho_sr(mset: MatrixSet, two_d: int, cap: Optional[int] = None, rel_tol: Optional[float] = None,
           lifted: Optional[Sequence[np.ndarray]] = None) -> float:
    """rho(A_1^[2d] + ... + A_m^[2d])^(1/2d)."""
    half_degree(two_d)
    tol = SETTINGS.spectral_tol if rel_tol is None else rel_tol
    total = lifted_sum(mset, two_d, cap, lifted)
    value = spectral_radius(total, tol) ** (1.0 / two_d)
    LOGGER.debug("rho_SR,%s = %.12g (lifted size %s)", two_d, value, total.shape[0])
    return value


def quality_factor(n: int, m: int, d: int) -> float:
    """eta^(-1/2d) with eta = min(m, binom(n+d-1, d)); rho >= factor * rho_SOS,2d."""
    if n < 1 or m < 1 or d < 1:
        raise ValueError(f"quality_factor needs n, m, d >= 1, got n={n}, m={m}, d={d}")
    eta = min(m, lift_dimension(n, d))
    return float(eta) ** (-1.0 / (2 * d))


@dataclass(frozen=True)
class LiftingSizes:
    step: int
    two_d: int
    kron: int
    semidef: int
    symalg: int


def lifting_size_table(n: int, steps: int) -> List[LiftingSizes]:
    """Matrix sizes of the Kronecker, recursive semidefinite and symmetric-algebra liftings.

    Row k has 2d = 2^k: n^(2d), s_(2^k) with s_1 = n and s_2j = binom(s_j + 1, 2),
    and binom(n + 2d - 1, 2d). Python integers keep every entry exact.
    """
    if n < 1 or steps < 1:
        raise ValueError(f"lifting_size_table needs n >= 1 and steps >= 1, got n={n}, steps={steps}")
    rows: List[LiftingSizes] = []
    semidef = n
    for step in range(1, steps + 1):
        two_d = 2 ** step
        semidef = math.comb(semidef + 1, 2)
        rows.append(LiftingSizes(step, two_d, n ** two_d, semidef, math.comb(n + two_d - 1, two_d)))
    return rows
