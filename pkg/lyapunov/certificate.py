"""SOS Lyapunov certificates: assembly, independent re-verification, JSON I/O."""

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from bounds.models import MatrixSet
from bounds.spectral import check_gamma, half_degree, lifted_matrices
from config.settings import SETTINGS
from linalg import min_eig_symmetric, symmetrize
from sdp import LinearMatrixProgram, SdpStatus, solve_feasibility
from symalg import (
    PolyCoeffs,
    coefficient_functionals,
    enumerate_basis,
    eval_poly,
    from_monomial_coeffs,
    gram_to_coeffs,
    to_monomial_coeffs,
)
from utils.errors import CertificateError, InputFormatError


LOGGER = logging.getLogger(__name__)

EVALUATION_POINTS = 50
EVALUATION_TOL = 1e-7
COEFFICIENT_TOL = 1e-7


@dataclass(frozen=True)
class BlockResidual:
    block: str
    coefficient_residual: float
    min_eigenvalue: float
    coefficient_tol: float
    eigenvalue_tol: float

    @property
    def ok(self) -> bool:
        return self.coefficient_residual <= self.coefficient_tol and self.min_eigenvalue >= -self.eigenvalue_tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "block": self.block,
            "coefficient_residual": self.coefficient_residual,
            "min_eigenvalue": self.min_eigenvalue,
            "coefficient_tol": self.coefficient_tol,
            "eigenvalue_tol": self.eigenvalue_tol,
        }


@dataclass
class VerificationReport:
    residuals: List[BlockResidual] = field(default_factory=list)
    messages: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.messages and all(r.ok for r in self.residuals)


@dataclass(frozen=True, eq=False)
class SosCertificate:
    """p SOS with Gram gram_p, and gamma^2d p - p(A_i x) SOS with Gram gram_constraints[i].

    Gram matrices are expressed in the scaled degree-d basis; p lives in the
    scaled degree-2d basis.
    """

    gamma: float
    p: PolyCoeffs
    gram_p: Optional[np.ndarray] = None
    gram_constraints: Tuple[np.ndarray, ...] = ()
    residuals: Tuple[BlockResidual, ...] = ()

    @property
    def two_d(self) -> int:
        return self.p.degree

    @property
    def n(self) -> int:
        return self.p.n

    @property
    def has_grams(self) -> bool:
        return self.gram_p is not None and len(self.gram_constraints) > 0


def verify_certificate(
    mset: MatrixSet,
    cert: SosCertificate,
    eps_feas: Optional[float] = None,
    lifted: Optional[Sequence[np.ndarray]] = None,
) -> VerificationReport:
    """Re-check every Gram matrix against the coefficients it must reproduce.

    Coefficient residuals are measured against Lambda(G) in the scaled basis
    (plus any asymmetry of G); eigenvalues must stay above -10 eps_feas times
    the block's scale.
    """
    eps = SETTINGS.eps_feas if eps_feas is None else eps_feas
    report = VerificationReport()
    if cert.n != mset.n:
        report.messages.append(f"certificate is for n={cert.n}, the matrices are {mset.n}x{mset.n}")
        return report
    if not cert.has_grams:
        report.messages.append("certificate carries no Gram matrices")
        return report
    if len(cert.gram_constraints) != mset.m:
        report.messages.append(f"certificate has {len(cert.gram_constraints)} constraint Grams for {mset.m} matrices")
        return report

    two_d = cert.two_d
    d = half_degree(two_d)
    half = enumerate_basis(cert.n, d)
    size = len(half)
    mats = lifted if lifted is not None else lifted_matrices(mset, two_d)
    power = cert.gamma ** two_d
    c = cert.p.coeffs
    p_scale = float(np.max(np.abs(c)))

    def _check(label: str, G: np.ndarray, target: np.ndarray, coeff_scale: float, eig_scale: float) -> None:
        G = np.asarray(G, dtype=float)
        if G.shape != (size, size):
            report.messages.append(f"{label}: Gram is {G.shape}, expected {(size, size)}")
            return
        asym = float(np.max(np.abs(G - G.T)))
        S = symmetrize(G)
        residual = float(np.max(np.abs(gram_to_coeffs(S, half).coeffs - target)))
        tol = max(COEFFICIENT_TOL, 10.0 * eps * (1 + size)) * (1.0 + coeff_scale)
        eig_tol = 10.0 * eps * max(1.0, eig_scale, float(np.max(np.abs(S))))
        report.residuals.append(BlockResidual(label, max(residual, asym), min_eig_symmetric(S), tol, eig_tol))

    _check("p", cert.gram_p, c, p_scale, 1.0)
    for i, (T, G) in enumerate(zip(mats, cert.gram_constraints), start=1):
        _check(f"A{i}", G, power * c - T.T @ c, power * p_scale, power)
    for r in report.residuals:
        LOGGER.debug("block %s: residual %.3e (tol %.1e), min eig %.3e (tol %.1e)",
                     r.block, r.coefficient_residual, r.coefficient_tol, r.min_eigenvalue, r.eigenvalue_tol)
    return report


def evaluation_violations(
    mset: MatrixSet,
    cert: SosCertificate,
    points: int = EVALUATION_POINTS,
    seed: int = 0,
) -> List[Tuple[int, float]]:
    """(matrix index, value) pairs where gamma^2d p(x) - p(A_i x) is clearly negative on random unit x."""
    rng = np.random.default_rng(seed)
    power = cert.gamma ** cert.two_d
    bad: List[Tuple[int, float]] = []
    for _ in range(points):
        x = rng.standard_normal(cert.n)
        x /= np.linalg.norm(x)
        px = eval_poly(cert.p, x)
        for i, A in enumerate(mset, start=1):
            pax = eval_poly(cert.p, A @ x)
            value = power * px - pax
            if value < -EVALUATION_TOL * (1.0 + abs(power * px) + abs(pax)):
                bad.append((i, value))
    return bad


def certificate_from_gram_blocks(
    mset: MatrixSet,
    two_d: int,
    gamma: float,
    blocks: Sequence[np.ndarray],
    inflation: float = 0.0,
    lifted: Optional[Sequence[np.ndarray]] = None,
    eps_feas: Optional[float] = None,
) -> SosCertificate:
    """Certificate from a solved SOS feasibility program (blocks Q_0, Q_1..Q_m at this gamma)."""
    d = half_degree(two_d)
    half = enumerate_basis(mset.n, d)
    gram_p = symmetrize(np.asarray(blocks[0], dtype=float)) + inflation * np.eye(len(half))
    p = gram_to_coeffs(gram_p, half)
    power = gamma ** two_d
    constraints = tuple(power * symmetrize(np.asarray(Q, dtype=float)) for Q in blocks[1:])
    cert = SosCertificate(gamma, p, gram_p, constraints)
    report = verify_certificate(mset, cert, eps_feas, lifted)
    if not report.ok:
        LOGGER.warning("certificate at gamma=%.10g does not re-verify: %s", gamma,
                       report.messages or [r.block for r in report.residuals if not r.ok])
    return replace(cert, residuals=tuple(report.residuals))


def build_certify_program(lifted: Sequence[np.ndarray], coeffs: np.ndarray, gamma: float, n: int, d: int) -> LinearMatrixProgram:
    """Gram matrices for a fixed p: Lambda(Q_0) = c and Lambda(Q_i) = (I - T_i^T) c, T_i = A_i^[2d] / gamma^2d."""
    E = coefficient_functionals(n, d)
    n_coeffs, size, _ = E.shape
    m = len(lifted)
    K = (m + 1) * n_coeffs
    stacks = [np.zeros((K, size, size)) for _ in range(m + 1)]
    rhs = np.zeros(K)
    stacks[0][:n_coeffs] = E
    rhs[:n_coeffs] = coeffs
    for i, T in enumerate(lifted, start=1):
        rows = slice(i * n_coeffs, (i + 1) * n_coeffs)
        stacks[i][rows] = E
        rhs[rows] = coeffs - (T / gamma ** (2 * d)).T @ coeffs
    return LinearMatrixProgram(tuple([size] * (m + 1)), tuple(stacks), rhs)


def certify(
    mset: MatrixSet,
    p: PolyCoeffs,
    gamma: float,
    eps_feas: Optional[float] = None,
    lifted: Optional[Sequence[np.ndarray]] = None,
) -> SosCertificate:
    """Find Gram matrices proving that p is an SOS Lyapunov function at gamma.

    p's coefficients are fixed, so failure means p itself does not work.
    Raises CertificateError with status "infeasible" or "numerical_failure".
    """
    gamma = check_gamma(gamma)
    if p.is_zero():
        raise ValueError("p must be a nonzero polynomial")
    if p.n != mset.n:
        raise ValueError(f"p has {p.n} variables but the matrices are {mset.n}x{mset.n}")
    two_d = p.degree
    d = half_degree(two_d)
    eps = SETTINGS.eps_feas if eps_feas is None else eps_feas
    mats = lifted if lifted is not None else lifted_matrices(mset, two_d)

    scale = float(np.max(np.abs(p.coeffs)))
    sol = solve_feasibility(build_certify_program(mats, p.coeffs / scale, gamma, mset.n, d), eps)
    if sol.status is SdpStatus.INFEASIBLE:
        raise CertificateError(f"p is not an SOS Lyapunov function at gamma={gamma!r} (margin {sol.margin:.3e})",
                               status="infeasible")
    if sol.status is SdpStatus.NUMERICAL_FAILURE:
        raise CertificateError(f"solver did not settle at gamma={gamma!r}: {sol.message}", status="numerical_failure")

    power = gamma ** two_d
    gram_p = symmetrize(sol.blocks[0]) * scale
    constraints = tuple(power * scale * symmetrize(Q) for Q in sol.blocks[1:])
    cert = SosCertificate(gamma, p, gram_p, constraints)
    report = verify_certificate(mset, cert, eps, mats)
    cert = replace(cert, residuals=tuple(report.residuals))
    if not report.ok:
        raise CertificateError("Gram matrices found by the solver fail re-verification", residuals=report.residuals)
    bad = evaluation_violations(mset, cert)
    if bad:
        raise CertificateError(f"certificate is negative at {len(bad)} sample points (first: A{bad[0][0]}, {bad[0][1]:.3e})",
                               residuals=report.residuals)
    LOGGER.info("Certified p of degree %s at gamma=%.10g for %s matrices", two_d, gamma, mset.m)
    return cert


def certificate_to_dict(cert: SosCertificate, name: Optional[str] = None) -> Dict[str, Any]:
    d = half_degree(cert.two_d)
    out: Dict[str, Any] = {
        "n": cert.n,
        "two_d": cert.two_d,
        "gamma": float(cert.gamma),
        "gram_basis": [list(alpha) for alpha in enumerate_basis(cert.n, d).indices],
        "coefficient_basis": [list(alpha) for alpha in cert.p.basis.indices],
        "coefficients": [float(c) for c in cert.p.coeffs],
        "residuals": [r.to_dict() for r in cert.residuals],
    }
    if name:
        out["name"] = name
    if cert.gram_p is not None:
        out["gram_p"] = np.asarray(cert.gram_p).tolist()
        out["gram_constraints"] = [np.asarray(G).tolist() for G in cert.gram_constraints]
    return out


def certificate_to_json(cert: SosCertificate, name: Optional[str] = None) -> str:
    return json.dumps(certificate_to_dict(cert, name), indent=2, sort_keys=True) + "\n"


def _exponent_list(data: Any, what: str) -> List[Tuple[int, ...]]:
    try:
        return [tuple(int(a) for a in alpha) for alpha in data]
    except (TypeError, ValueError):
        raise InputFormatError(f"{what} must be a list of integer exponent lists")


def certificate_from_dict(data: Dict[str, Any]) -> SosCertificate:
    """Inverse of certificate_to_dict.

    ``p`` may be given either as "coefficients" in the scaled basis or as
    plain "monomials" ([[exponent, value], ...]); gamma either directly or
    as "gamma_power" = gamma^2d.
    """
    if not isinstance(data, dict):
        raise InputFormatError("certificate must be a JSON object")
    try:
        n = int(data["n"])
        two_d = int(data["two_d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"certificate needs integer 'n' and 'two_d': {exc}")
    try:
        d = half_degree(two_d)
        if "gamma_power" in data:
            gamma = check_gamma(float(data["gamma_power"]) ** (1.0 / two_d))
        else:
            gamma = check_gamma(float(data["gamma"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"invalid certificate header: {exc}")

    half = enumerate_basis(n, d)
    if "gram_basis" in data and _exponent_list(data["gram_basis"], "gram_basis") != list(half.indices):
        raise InputFormatError("gram_basis must list the degree-d monomials in canonical order")
    try:
        if "monomials" in data:
            mapping = {}
            for entry in data["monomials"]:
                alpha, value = entry
                key = tuple(int(a) for a in alpha)
                mapping[key] = mapping.get(key, 0.0) + float(value)
            p = from_monomial_coeffs(n, two_d, mapping)
        else:
            full = enumerate_basis(n, two_d)
            if "coefficient_basis" in data and _exponent_list(data["coefficient_basis"], "coefficient_basis") != list(full.indices):
                raise InputFormatError("coefficient_basis must list the degree-2d monomials in canonical order")
            p = PolyCoeffs(full, np.array(data["coefficients"], dtype=float))
        gram_p = np.array(data["gram_p"], dtype=float) if "gram_p" in data else None
        constraints = tuple(np.array(G, dtype=float) for G in data.get("gram_constraints", []))
    except InputFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed certificate: {exc}")
    return SosCertificate(gamma, p, gram_p, constraints)


def certificate_from_json(text: str) -> SosCertificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"certificate is not valid JSON: {exc}")
    return certificate_from_dict(data)


def certificate_monomials(cert: SosCertificate) -> Dict[Tuple[int, ...], float]:
    return to_monomial_coeffs(cert.p)
