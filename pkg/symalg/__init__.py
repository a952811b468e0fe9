"""Symmetric-algebra machinery: monomial bases, lifts, permanents, induced matrices, polynomials."""

from .basis import LiftBasis, enumerate_basis, lift_dimension, lift_vector
from .induced import induced_matrix
from .permanent import permanent
from .polynomials import (
    PolyCoeffs,
    coefficient_functionals,
    compose_coeffs,
    eval_poly,
    from_monomial_coeffs,
    gram_to_coeffs,
    gram_to_monomials,
    monomial_key,
    norm_power_poly,
    to_monomial_coeffs,
    zero_poly,
)

__all__ = [
    "LiftBasis",
    "PolyCoeffs",
    "coefficient_functionals",
    "compose_coeffs",
    "enumerate_basis",
    "eval_poly",
    "from_monomial_coeffs",
    "gram_to_coeffs",
    "gram_to_monomials",
    "induced_matrix",
    "lift_dimension",
    "lift_vector",
    "monomial_key",
    "norm_power_poly",
    "permanent",
    "to_monomial_coeffs",
    "zero_poly",
]
