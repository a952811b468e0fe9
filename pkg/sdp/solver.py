import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from config.settings import SETTINGS
from linalg import symmetrize
from .models import LinearMatrixProgram, SdpSolution, SdpStatus, check_solution


LOGGER = logging.getLogger(__name__)

PHASE_ONE_CAP = 1.0
MIN_STEP = 1e-12
DIVERGENCE_LIMIT = 1e12


@dataclass
class IpmState:
    """Snapshot handed to an early-stop hook once per iteration."""

    iteration: int
    X: List[np.ndarray]
    y: np.ndarray
    Z: List[np.ndarray]
    primal_objective: float
    dual_objective: float
    rel_primal: float
    rel_dual: float
    rel_gap: float


@dataclass
class IpmResult:
    X: List[np.ndarray]
    y: np.ndarray
    Z: List[np.ndarray]
    converged: bool
    stopped_early: bool
    iterations: int
    primal_objective: float
    dual_objective: float
    rel_primal: float
    rel_dual: float
    message: str = ""


class InteriorPointSolver:
    """Infeasible primal-dual path-following method for block-diagonal SDPs.

    Solves  min sum <C_b, X_b>  s.t.  A(X) = b, X_b PSD  together with its dual
    max b^T y  s.t.  A*(y) + Z = C, Z_b PSD.  Search directions use the
    HKM scaling (the Nesterov-Todd family member with Z^-1 on the left),
    Mehrotra predictor-corrector steps and a dense Schur complement
    M_kl = <A_k, Z^-1 A_l X>.
    """

    def __init__(
        self,
        max_iter: Optional[int] = None,
        gap_tol: Optional[float] = None,
        feas_tol: float = 1e-10,
        step_fraction: float = 0.98,
        early_stop: Optional[Callable[[IpmState], bool]] = None,
    ):
        self.max_iter = max_iter if max_iter is not None else SETTINGS.max_iter
        self.gap_tol = gap_tol if gap_tol is not None else SETTINGS.gap_tol
        self.feas_tol = feas_tol
        self.step_fraction = step_fraction
        self.early_stop = early_stop

    def solve(self, prog: LinearMatrixProgram) -> IpmResult:
        A = prog.coefficients
        b = prog.rhs
        C = prog.objective
        K = prog.num_constraints
        n_total = sum(prog.block_sizes)
        norm_b = float(np.linalg.norm(b))
        norm_C = math.sqrt(sum(float(np.sum(Cb * Cb)) for Cb in C))
        flat = [stack.reshape(K, -1) for stack in A]

        X, y, Z = self._initial_point(prog)
        rel_p = rel_d = math.inf
        pobj = dobj = 0.0

        def _result(converged: bool, iteration: int, message: str, early: bool = False) -> IpmResult:
            return IpmResult(X, y, Z, converged, early, iteration, pobj, dobj, rel_p, rel_d, message)

        for it in range(1, self.max_iter + 1):
            rp = b - prog.apply(X)
            Aty = prog.adjoint(y)
            Rd = [Cb - Zb - Ab for Cb, Zb, Ab in zip(C, Z, Aty)]
            pobj = prog.objective_value(X)
            dobj = float(b @ y)
            mu = sum(float(np.sum(Xb * Zb)) for Xb, Zb in zip(X, Z)) / n_total
            rel_p = float(np.linalg.norm(rp)) / (1.0 + norm_b)
            rel_d = math.sqrt(sum(float(np.sum(R * R)) for R in Rd)) / (1.0 + norm_C)
            denom = 1.0 + abs(pobj) + abs(dobj)
            rel_gap = max(abs(pobj - dobj), n_total * mu) / denom

            if self.early_stop is not None:
                state = IpmState(it, X, y, Z, pobj, dobj, rel_p, rel_d, rel_gap)
                if self.early_stop(state):
                    LOGGER.debug("IPM stopped early at iteration %s", it)
                    return _result(False, it, "early stop", early=True)

            if rel_p <= self.feas_tol and rel_d <= self.feas_tol and rel_gap <= self.gap_tol:
                LOGGER.debug("IPM converged in %s iterations (pobj=%.12g, dobj=%.12g)", it, pobj, dobj)
                return _result(True, it, "converged")

            try:
                Zinv = [scipy.linalg.cho_solve(scipy.linalg.cho_factor(Zb), np.eye(Zb.shape[0])) for Zb in Z]
            except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
                return _result(False, it, "dual slack lost definiteness")
            Zinv = [symmetrize(W) for W in Zinv]

            M = np.zeros((K, K))
            for stack, fl, W, Xb in zip(A, flat, Zinv, X):
                G = W[None, :, :] @ stack @ Xb[None, :, :]
                M += fl @ G.reshape(K, -1).T
            M = symmetrize(M)
            solve_schur = self._factor(M)

            # predictor
            dX, dy, dZ = self._direction(prog, X, Zinv, Rd, 0.0, None, solve_schur)
            ap = min(1.0, self._max_step(X, dX))
            ad = min(1.0, self._max_step(Z, dZ))
            mu_aff = sum(
                float(np.sum((Xb + ap * dXb) * (Zb + ad * dZb))) for Xb, dXb, Zb, dZb in zip(X, dX, Z, dZ)
            ) / n_total
            sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3 if mu > 0 else 0.0

            # corrector
            H = [dZb @ dXb for dZb, dXb in zip(dZ, dX)]
            dX, dy, dZ = self._direction(prog, X, Zinv, Rd, sigma * mu, H, solve_schur)
            ap = min(1.0, self.step_fraction * self._max_step(X, dX))
            ad = min(1.0, self.step_fraction * self._max_step(Z, dZ))
            if max(ap, ad) < MIN_STEP:
                return _result(False, it, f"step length below {MIN_STEP:g}")

            X = [symmetrize(Xb + ap * dXb) for Xb, dXb in zip(X, dX)]
            y = y + ad * dy
            Z = [symmetrize(Zb + ad * dZb) for Zb, dZb in zip(Z, dZ)]
            LOGGER.debug(
                "IPM it=%s pobj=%.6e dobj=%.6e rel_p=%.2e rel_d=%.2e gap=%.2e ap=%.3f ad=%.3f",
                it, pobj, dobj, rel_p, rel_d, rel_gap, ap, ad,
            )

            if max(float(np.max(np.abs(Xb))) for Xb in X) > DIVERGENCE_LIMIT:
                return _result(False, it, "primal iterates diverge")
            if max(float(np.max(np.abs(Zb))) for Zb in Z) > DIVERGENCE_LIMIT:
                return _result(False, it, "dual iterates diverge")

        return _result(False, self.max_iter, f"iteration cap {self.max_iter} reached")

    @staticmethod
    def _initial_point(prog: LinearMatrixProgram) -> Tuple[List[np.ndarray], np.ndarray, List[np.ndarray]]:
        # Scaled identities, as in the usual infeasible-start heuristics
        K = prog.num_constraints
        X, Z = [], []
        for stack, Cb, n_b in zip(prog.coefficients, prog.objective, prog.block_sizes):
            norms = np.sqrt(np.sum(stack.reshape(K, -1) ** 2, axis=1))
            xi = max(10.0, math.sqrt(n_b), n_b * float(np.max((1.0 + np.abs(prog.rhs)) / (1.0 + norms))))
            eta = max(10.0, math.sqrt(n_b), float(np.max(norms)), float(np.linalg.norm(Cb)))
            X.append(xi * np.eye(n_b))
            Z.append(eta * np.eye(n_b))
        return X, np.zeros(K), Z

    @staticmethod
    def _factor(M: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
        try:
            factor = scipy.linalg.cho_factor(M)
            return lambda rhs: scipy.linalg.cho_solve(factor, rhs)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
            LOGGER.debug("Schur complement not positive definite, falling back to least squares")
            return lambda rhs: scipy.linalg.lstsq(M, rhs)[0]

    @staticmethod
    def _direction(
        prog: LinearMatrixProgram,
        X: Sequence[np.ndarray],
        Zinv: Sequence[np.ndarray],
        Rd: Sequence[np.ndarray],
        target: float,
        H: Optional[Sequence[np.ndarray]],
        solve_schur: Callable[[np.ndarray], np.ndarray],
    ):
        # Linearised complementarity: Z dX + dZ X = target I - Z X - H
        centre = []
        for W, Xb in zip(Zinv, X):
            T = target * W
            centre.append(T)
        if H is not None:
            centre = [T - W @ Hb for T, W, Hb in zip(centre, Zinv, H)]
        Rd_term = [W @ R @ Xb for W, R, Xb in zip(Zinv, Rd, X)]
        rhs = prog.rhs - prog.apply(centre) + prog.apply(Rd_term)
        dy = solve_schur(rhs)
        Aty = prog.adjoint(dy)
        dZ = [symmetrize(R - Ab) for R, Ab in zip(Rd, Aty)]
        dX = [symmetrize(T - W @ dZb @ Xb) - Xb for T, W, dZb, Xb in zip(centre, Zinv, dZ, X)]
        return dX, dy, dZ

    @staticmethod
    def _max_step(X: Sequence[np.ndarray], dX: Sequence[np.ndarray]) -> float:
        """Largest alpha with X + alpha dX still PSD (inf if unbounded)."""
        alpha = math.inf
        for Xb, dXb in zip(X, dX):
            try:
                L = np.linalg.cholesky(Xb)
            except np.linalg.LinAlgError:
                return 0.0
            W = scipy.linalg.solve_triangular(L, dXb, lower=True)
            W = scipy.linalg.solve_triangular(L, W.T, lower=True)
            lam = float(np.min(np.linalg.eigvalsh(symmetrize(W))))
            if lam < 0:
                alpha = min(alpha, -1.0 / lam)
        return alpha


def minimize(prog: LinearMatrixProgram, eps_feas: Optional[float] = None) -> SdpSolution:
    """Solve min sum <C_b, X_b> over the program's feasible set."""
    eps = SETTINGS.eps_feas if eps_feas is None else eps_feas
    result = InteriorPointSolver().solve(prog)
    residual, min_eig = check_solution(prog, result.X)
    ok = result.converged and residual <= eps * (1.0 + float(np.max(np.abs(prog.rhs)))) and min_eig >= -eps
    status = SdpStatus.FEASIBLE if ok else SdpStatus.NUMERICAL_FAILURE
    return SdpSolution(
        blocks=tuple(result.X),
        objective_value=result.primal_objective,
        max_constraint_residual=residual,
        min_block_eigenvalue=min_eig,
        status=status,
        iterations=result.iterations,
        message=result.message,
        dual=result.y,
    )


def _independent_rows(prog: LinearMatrixProgram) -> Tuple[np.ndarray, float]:
    """Indices of a maximal independent constraint subset, plus the affine inconsistency."""
    K = prog.num_constraints
    flat = np.hstack([stack.reshape(K, -1) for stack in prog.coefficients])
    R, perm = scipy.linalg.qr(flat.T, mode="r", pivoting=True)
    diag = np.abs(np.diag(R))
    scale = float(diag[0]) if diag.size else 0.0
    rank = int(np.sum(diag > 1e-10 * max(scale, 1.0)))
    keep = np.sort(perm[:rank])
    if rank == 0:
        return keep, float(np.max(np.abs(prog.rhs)))
    sol = scipy.linalg.lstsq(flat[keep], prog.rhs[keep])[0]
    inconsistency = float(np.max(np.abs(flat @ sol - prog.rhs)))
    return keep, inconsistency


def _restrict(prog: LinearMatrixProgram, rows: np.ndarray) -> LinearMatrixProgram:
    if len(rows) == prog.num_constraints:
        return prog
    return LinearMatrixProgram(
        prog.block_sizes,
        tuple(stack[rows] for stack in prog.coefficients),
        prog.rhs[rows],
        prog.objective,
    )


def phase_one_program(prog: LinearMatrixProgram, cap: float = PHASE_ONE_CAP) -> LinearMatrixProgram:
    """max t s.t. X_b - t I PSD and A(X) = r, written with t = cap - s, s >= 0.

    Variables are Z_b = X_b - t I and the extra 1x1 block s; the objective is min s.
    """
    K = prog.num_constraints
    traces = sum(np.trace(stack, axis1=1, axis2=2) for stack in prog.coefficients)
    coeffs = tuple(prog.coefficients) + (-traces.reshape(K, 1, 1),)
    rhs = prog.rhs - cap * traces
    objective = tuple(np.zeros((s, s)) for s in prog.block_sizes) + (np.ones((1, 1)),)
    return LinearMatrixProgram(prog.block_sizes + (1,), coeffs, rhs, objective)


def solve_feasibility(
    prog: LinearMatrixProgram,
    eps_feas: Optional[float] = None,
    stop_when_certified: bool = True,
) -> SdpSolution:
    """Decide whether the program has a PSD solution via the phase-I margin t*.

    feasible: t* >= -eps_feas and the recovered blocks pass check_solution;
    infeasible: t* < -eps_feas; numerical_failure: the IPM did not settle.
    With ``stop_when_certified`` the IPM stops as soon as an iterate already
    certifies feasibility with a positive margin.
    """
    eps = SETTINGS.eps_feas if eps_feas is None else eps_feas
    if not 1e-10 <= eps <= 1e-4:
        raise ValueError(f"eps_feas must lie in [1e-10, 1e-4], got {eps!r}")
    rhs_scale = 1.0 + float(np.max(np.abs(prog.rhs)))
    res_bound = eps * rhs_scale
    zero_blocks = tuple(np.zeros((s, s)) for s in prog.block_sizes)

    rows, inconsistency = _independent_rows(prog)
    if inconsistency > 1e-9 * rhs_scale:
        LOGGER.debug("Affine constraints are inconsistent (residual %.3e)", inconsistency)
        residual, min_eig = check_solution(prog, zero_blocks)
        return SdpSolution(zero_blocks, 0.0, residual, min_eig, SdpStatus.INFEASIBLE, margin=-math.inf,
                           message="affine constraints are inconsistent")
    reduced = _restrict(prog, rows)
    phase_one = phase_one_program(reduced)
    n_blocks = len(prog.block_sizes)

    def _recover(blocks: Sequence[np.ndarray]) -> Tuple[List[np.ndarray], float]:
        t = PHASE_ONE_CAP - float(blocks[n_blocks][0, 0])
        return [symmetrize(Zb) + t * np.eye(Zb.shape[0]) for Zb in blocks[:n_blocks]], t

    def _certified(state: IpmState) -> bool:
        X, t = _recover(state.X)
        if t < eps:
            return False
        return float(np.max(np.abs(prog.apply(X) - prog.rhs))) <= 0.1 * res_bound

    solver = InteriorPointSolver(early_stop=_certified if stop_when_certified else None)
    result = solver.solve(phase_one)
    X, t = _recover(result.X)
    residual, min_eig = check_solution(prog, X)

    if result.converged or result.stopped_early:
        if t >= -eps and residual <= res_bound and min_eig >= -eps:
            status = SdpStatus.FEASIBLE
        elif t < -eps:
            status = SdpStatus.INFEASIBLE
        else:
            status = SdpStatus.NUMERICAL_FAILURE
    else:
        status = SdpStatus.NUMERICAL_FAILURE
        if result.rel_dual <= 1e-8:
            # dual objective bounds s* from below, hence t* from above
            t = min(t, PHASE_ONE_CAP - result.dual_objective)
    LOGGER.debug(
        "Phase-I finished: status=%s margin=%.3e residual=%.3e min_eig=%.3e iterations=%s (%s)",
        status.value, t, residual, min_eig, result.iterations, result.message,
    )
    return SdpSolution(
        blocks=tuple(X),
        objective_value=prog.objective_value(X),
        max_constraint_residual=residual,
        min_block_eigenvalue=min_eig,
        status=status,
        margin=t,
        iterations=result.iterations,
        message=result.message,
    )
