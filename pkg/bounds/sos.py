import logging
import time
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from config.settings import SETTINGS
from sdp import LinearMatrixProgram, ProgramBuilder, SdpSolution, solve_feasibility
from symalg import coefficient_functionals, gram_to_monomials, norm_power_poly
from utils.errors import CertificateError
from .bisection import CertifiedBisection, initial_bracket
from .models import BoundReport, MatrixSet, Method
from .spectral import check_gamma, check_lift_cap, half_degree, lifted_matrices, quality_factor


LOGGER = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


def build_sos_feasibility(
    mset: MatrixSet,
    two_d: int,
    gamma: float,
    inflation: float = 0.0,
    lifted: Optional[Sequence[np.ndarray]] = None,
    cap: Optional[int] = None,
) -> LinearMatrixProgram:
    """Feasibility program for "p SOS and gamma^2d p - p(A_i x) SOS for every i".

    Blocks are Q_0 (Gram of p) and Q_1..Q_m (Grams of the constraint
    polynomials divided by gamma^2d), all of size binom(n+d-1, d). The
    coefficient vector of p is eliminated: row block i reads

        Lambda(Q_i) - (I - T_i^T) Lambda(Q_0) = inflation * (I - T_i^T) Lambda(I)

    with T_i = A_i^[2d] / gamma^2d, i.e. the matrices are pre-scaled by
    1/gamma. A last row fixes trace(Q_0) = size(Q_0). With ``inflation`` > 0
    the certified polynomial is Lambda(Q_0) + inflation * (sum x_i^2)^d.
    """
    gamma = check_gamma(gamma)
    if inflation < 0:
        raise ValueError(f"inflation must be >= 0, got {inflation!r}")
    d = half_degree(two_d)
    size = check_lift_cap(mset.n, d, cap, "Gram dimension")
    check_lift_cap(mset.n, two_d, cap, "coefficient dimension")
    mats = lifted if lifted is not None else lifted_matrices(mset, two_d, cap)

    E = coefficient_functionals(mset.n, d)
    n_coeffs = E.shape[0]
    m = mset.m
    K = m * n_coeffs + 1
    stacks = [np.zeros((K, size, size)) for _ in range(m + 1)]
    rhs = np.zeros(K)
    norm_coeffs = norm_power_poly(mset.n, d).coeffs
    for i, T in enumerate(mats):
        T_hat = T / gamma ** two_d
        rows = slice(i * n_coeffs, (i + 1) * n_coeffs)
        # row g of T^T Lambda(Q) is <sum_h T[h, g] E[h], Q>
        composed = np.einsum("hg,hab->gab", T_hat, E)
        stacks[0][rows] = composed - E
        stacks[i + 1][rows] = E
        rhs[rows] = inflation * (norm_coeffs - T_hat.T @ norm_coeffs)
    stacks[0][K - 1] = np.eye(size)
    rhs[K - 1] = size
    return LinearMatrixProgram(tuple([size] * (m + 1)), tuple(stacks), rhs)


def rho_sos(
    mset: MatrixSet,
    two_d: int,
    tol: Optional[float] = None,
    eps_feas: Optional[float] = None,
    inflation: float = 0.0,
    cap: Optional[int] = None,
) -> BoundReport:
    """rho_SOS,2d by bisection on gamma, with the certificate found at the returned gamma."""
    started = time.perf_counter()
    tol = SETTINGS.tol if tol is None else tol
    eps = SETTINGS.eps_feas if eps_feas is None else eps_feas
    d = half_degree(two_d)
    check_lift_cap(mset.n, d, cap, "Gram dimension")
    lifted = lifted_matrices(mset, two_d, cap)
    lo, hi, sr = initial_bracket(mset, two_d, tol, lifted=lifted, cap=cap)
    LOGGER.info("rho_SOS,%s on %s: bracket [%.10g, %.10g]", two_d, mset.name or "matrix set", lo, hi)

    report = BoundReport(
        method=Method.SOS,
        value=sr,
        two_d=two_d,
        quality_factor=quality_factor(mset.n, mset.m, d),
        tolerances={"tol": tol, "eps_feas": eps, "inflation": inflation},
    )
    if sr <= tol:
        # every product is (numerically) nilpotent; rho_SR itself is the tightest safe value
        LOGGER.warning("rho_SR,%s = %.3e is below the tolerance, reporting it without an SOS certificate", two_d, sr)
        report.bracket = (lo, sr)
    else:
        def probe(gamma: float, eps_probe: float) -> SdpSolution:
            return solve_feasibility(build_sos_feasibility(mset, two_d, gamma, inflation, lifted), eps_probe)

        result = CertifiedBisection(probe, tol, eps, label=f"sos[{two_d}]").run(lo, hi)
        from lyapunov.certificate import certificate_from_gram_blocks

        report.value = result.value
        report.bracket = (result.lo, result.hi)
        report.probes = result.probes
        report.certificate = certificate_from_gram_blocks(
            mset, two_d, result.hi, result.solution.blocks, inflation=inflation, lifted=lifted, eps_feas=eps,
        )
    report.elapsed = time.perf_counter() - started
    LOGGER.info("rho_SOS,%s = %.10g (%.2fs)", two_d, report.value, report.elapsed)
    return report


def _exponent(alpha: Sequence[int]) -> Exponent:
    return tuple(int(a) for a in alpha)


def sos_program_for_polynomial(coeffs: Mapping[Sequence[int], float], monomials: Sequence[Sequence[int]]) -> LinearMatrixProgram:
    """Program "p = m^T Q m with Q PSD" over a plain (unscaled) monomial list m.

    One constraint per monomial that appears in p or in some product m_i m_j;
    monomials of p that no product can reach make the program infeasible.
    """
    basis = [_exponent(alpha) for alpha in monomials]
    if not basis:
        raise ValueError("at least one monomial is needed")
    if len({len(alpha) for alpha in basis}) != 1:
        raise ValueError("all monomials must have the same number of variables")
    target: Dict[Exponent, float] = {}
    for alpha, value in coeffs.items():
        key = _exponent(alpha)
        if len(key) != len(basis[0]):
            raise ValueError(f"monomial {key} has {len(key)} variables, expected {len(basis[0])}")
        target[key] = target.get(key, 0.0) + float(value)

    pairs: Dict[Exponent, List[Tuple[int, int]]] = {}
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            key = tuple(a + b for a, b in zip(basis[i], basis[j]))
            pairs.setdefault(key, []).append((i, j))

    builder = ProgramBuilder([len(basis)])
    for key in sorted(set(pairs) | set(target), reverse=True):
        entries = {(0, i, j): 1.0 for i, j in pairs.get(key, [])}
        builder.add_constraint(entries, target.get(key, 0.0))
    return builder.build()


@dataclass
class SosDecomposition:
    """p = m^T Q m = sum_k (row_k . m)^2 with Q = L^T L."""

    monomials: List[Exponent]
    gram: np.ndarray
    factor: np.ndarray
    # each square's inner polynomial as monomial -> coefficient
    squares: List[Dict[Exponent, float]]
    max_constraint_residual: float
    min_eigenvalue: float


def decompose_sos(
    coeffs: Mapping[Sequence[int], float],
    monomials: Sequence[Sequence[int]],
    eps_feas: Optional[float] = None,
) -> SosDecomposition:
    """Find a Gram matrix for p over ``monomials`` and split it into explicit squares."""
    prog = sos_program_for_polynomial(coeffs, monomials)
    sol = solve_feasibility(prog, eps_feas, stop_when_certified=False)
    if not sol.feasible:
        raise CertificateError(f"polynomial is not SOS over the given monomials ({sol.message or sol.status.value})",
                               status=sol.status.value)
    basis = [_exponent(alpha) for alpha in monomials]
    Q = sol.blocks[0]
    w, V = np.linalg.eigh(Q)
    keep = w > 1e-12 * max(1.0, float(np.max(np.abs(w))))
    factor = (np.sqrt(w[keep])[:, None] * V[:, keep].T)[::-1]
    squares = [{alpha: float(c) for alpha, c in zip(basis, row) if c != 0.0} for row in factor]
    LOGGER.debug("SOS decomposition with %s squares, residual %.3e", len(squares), sol.max_constraint_residual)
    return SosDecomposition(basis, Q, factor, squares, sol.max_constraint_residual, sol.min_block_eigenvalue)


def decomposition_monomials(decomp: SosDecomposition) -> Dict[Exponent, float]:
    """Plain monomial coefficients of m^T Q m, for comparing against the input polynomial."""
    return gram_to_monomials(decomp.gram, decomp.monomials)
