import logging
import time
from typing import Optional, Sequence

import numpy as np

from config.settings import SETTINGS
from linalg import as_matrix, min_eig_symmetric, symmetrize
from sdp import LinearMatrixProgram, SdpSolution, solve_feasibility
from .bisection import CertifiedBisection, initial_bracket
from .models import BoundReport, MatrixSet, Method
from .spectral import check_gamma, check_lift_cap, half_degree, lifted_matrices, quality_factor


LOGGER = logging.getLogger(__name__)


def build_cq_feasibility(
    mset: MatrixSet,
    two_d: int,
    gamma: float,
    lifted: Optional[Sequence[np.ndarray]] = None,
    cap: Optional[int] = None,
) -> LinearMatrixProgram:
    """P PSD with P - B_i^T P B_i PSD for B_i = A_i^[d] / gamma^d, trace(P) = size(P).

    Blocks are P and one slack S_i per matrix; every upper-triangle entry
    (r, c) of S_i = P - B_i^T P B_i is one equality row.
    """
    gamma = check_gamma(gamma)
    d = half_degree(two_d)
    size = check_lift_cap(mset.n, d, cap, "Gram dimension")
    mats = lifted if lifted is not None else lifted_matrices(mset, d, cap)

    rows, cols = np.triu_indices(size)
    n_entries = rows.shape[0]
    unit = np.zeros((n_entries, size, size))
    unit[np.arange(n_entries), rows, cols] += 0.5
    unit[np.arange(n_entries), cols, rows] += 0.5

    m = mset.m
    K = m * n_entries + 1
    stacks = [np.zeros((K, size, size)) for _ in range(m + 1)]
    for i, T in enumerate(mats):
        B = T / gamma ** d
        outer = np.einsum("ak,bk->kab", B[:, rows], B[:, cols])
        outer = 0.5 * (outer + np.swapaxes(outer, 1, 2))
        block = slice(i * n_entries, (i + 1) * n_entries)
        stacks[0][block] = outer - unit
        stacks[i + 1][block] = unit
    stacks[0][K - 1] = np.eye(size)
    rhs = np.zeros(K)
    rhs[K - 1] = size
    return LinearMatrixProgram(tuple([size] * (m + 1)), tuple(stacks), rhs)


def rho_cq(
    mset: MatrixSet,
    two_d: int,
    tol: Optional[float] = None,
    eps_feas: Optional[float] = None,
    cap: Optional[int] = None,
) -> BoundReport:
    """rho_CQ,2d: a common quadratic Lyapunov function for the d-lifted matrices, by bisection."""
    started = time.perf_counter()
    tol = SETTINGS.tol if tol is None else tol
    eps = SETTINGS.eps_feas if eps_feas is None else eps_feas
    d = half_degree(two_d)
    half_lifts = lifted_matrices(mset, d, cap)
    lo, hi, sr = initial_bracket(mset, two_d, tol, cap=cap)
    LOGGER.info("rho_CQ,%s on %s: bracket [%.10g, %.10g]", two_d, mset.name or "matrix set", lo, hi)

    report = BoundReport(
        method=Method.CQ,
        value=sr,
        two_d=two_d,
        quality_factor=quality_factor(mset.n, mset.m, d),
        tolerances={"tol": tol, "eps_feas": eps},
    )
    if sr <= tol:
        LOGGER.warning("rho_SR,%s = %.3e is below the tolerance, reporting it without a CQ certificate", two_d, sr)
        report.bracket = (lo, sr)
    else:
        def probe(gamma: float, eps_probe: float) -> SdpSolution:
            return solve_feasibility(build_cq_feasibility(mset, two_d, gamma, half_lifts), eps_probe)

        result = CertifiedBisection(probe, tol, eps, label=f"cq[{two_d}]").run(lo, hi)
        report.value = result.value
        report.bracket = (result.lo, result.hi)
        report.probes = result.probes
        report.certificate = np.array(result.solution.blocks[0])
    report.elapsed = time.perf_counter() - started
    LOGGER.info("rho_CQ,%s = %.10g (%.2fs)", two_d, report.value, report.elapsed)
    return report


def check_cq_certificate(mset: MatrixSet, two_d: int, gamma: float, P, eps_feas: Optional[float] = None) -> bool:
    """gamma^2d P - (A_i^[d])^T P A_i^[d] PSD for every i and P PSD, up to eps_feas relative to ||P||."""
    eps = SETTINGS.eps_feas if eps_feas is None else eps_feas
    d = half_degree(two_d)
    P = symmetrize(np.array(as_matrix(P, square=True, name="P")))
    scale = max(1.0, float(np.max(np.abs(P)))) * max(1.0, gamma ** two_d)
    if min_eig_symmetric(P) < -eps * scale:
        return False
    for T in lifted_matrices(mset, d):
        if T.shape != P.shape:
            raise ValueError(f"P is {P.shape[0]}x{P.shape[0]} but the lifted matrices are {T.shape[0]}x{T.shape[0]}")
        if min_eig_symmetric(symmetrize(gamma ** two_d * P - T.T @ P @ T)) < -10.0 * eps * scale:
            return False
    return True
