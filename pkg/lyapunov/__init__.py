"""Fixed-point Lyapunov constructions and SOS certificates."""

from .certificate import (
    BlockResidual,
    SosCertificate,
    VerificationReport,
    build_certify_program,
    certificate_from_dict,
    certificate_from_gram_blocks,
    certificate_from_json,
    certificate_monomials,
    certificate_to_dict,
    certificate_to_json,
    certify,
    evaluation_violations,
    verify_certificate,
)
from .fixed_point import iterate, solve_fixed_point
from .quadratic import iterate_quadratic, quadratic_fixed_point

__all__ = [
    "BlockResidual",
    "SosCertificate",
    "VerificationReport",
    "build_certify_program",
    "certificate_from_dict",
    "certificate_from_gram_blocks",
    "certificate_from_json",
    "certificate_monomials",
    "certificate_to_dict",
    "certificate_to_json",
    "certify",
    "evaluation_violations",
    "iterate",
    "iterate_quadratic",
    "quadratic_fixed_point",
    "solve_fixed_point",
    "verify_certificate",
]
