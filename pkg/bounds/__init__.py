"""Joint spectral radius bounds: products, SOS, common quadratic, lifted spectral radius."""

from .bisection import BisectionResult, CertifiedBisection, initial_bracket
from .cq import build_cq_feasibility, check_cq_certificate, rho_cq
from .models import METHOD_ORDER, BoundReport, MatrixSet, Method
from .products import canonical_rotation, lower_bound_products, necklaces, word_product
from .sos import (
    SosDecomposition,
    build_sos_feasibility,
    decompose_sos,
    decomposition_monomials,
    rho_sos,
    sos_program_for_polynomial,
)
from .spectral import (
    LiftingSizes,
    check_gamma,
    check_lift_cap,
    half_degree,
    lifted_matrices,
    lifted_sum,
    lifting_size_table,
    quality_factor,
    rho_sr,
)
from .suite import DEFAULT_PRODUCT_LENGTH, jsr_bracket, run_bounds

__all__ = [
    "BisectionResult",
    "BoundReport",
    "CertifiedBisection",
    "DEFAULT_PRODUCT_LENGTH",
    "LiftingSizes",
    "METHOD_ORDER",
    "MatrixSet",
    "Method",
    "SosDecomposition",
    "build_cq_feasibility",
    "build_sos_feasibility",
    "canonical_rotation",
    "check_cq_certificate",
    "check_gamma",
    "check_lift_cap",
    "decompose_sos",
    "decomposition_monomials",
    "half_degree",
    "initial_bracket",
    "jsr_bracket",
    "lifted_matrices",
    "lifted_sum",
    "lifting_size_table",
    "lower_bound_products",
    "necklaces",
    "quality_factor",
    "rho_cq",
    "rho_sos",
    "rho_sr",
    "run_bounds",
    "sos_program_for_polynomial",
    "word_product",
]
