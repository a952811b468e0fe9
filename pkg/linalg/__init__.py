"""Dense real linear algebra kernel (products, solves, eigenvalue bounds)."""

from .dense import (
    as_matrix,
    as_vector,
    min_eig_symmetric,
    solve_linear,
    spectral_radius,
    symmetrize,
)

__all__ = [
    "as_matrix",
    "as_vector",
    "min_eig_symmetric",
    "solve_linear",
    "spectral_radius",
    "symmetrize",
]
