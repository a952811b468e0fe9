import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from config.settings import SETTINGS
from sdp import SdpSolution, SdpStatus
from utils.errors import BracketError, NumericalFailure
from .models import MatrixSet
from .products import lower_bound_products
from .spectral import rho_sr


LOGGER = logging.getLogger(__name__)

# probe(gamma, eps_feas) -> phase-I solution of the feasibility program at gamma
Probe = Callable[[float, float], SdpSolution]

MAX_EPS_FEAS = 1e-4
DECISIVE_MARGIN = 100.0
MAX_EXPANSIONS = 30


@dataclass
class BisectionResult:
    lo: float
    hi: float
    solution: SdpSolution
    probes: int

    @property
    def value(self) -> float:
        return self.hi


class CertifiedBisection:
    """Bisection on gamma over a monotone feasibility family.

    ``hi`` is always a gamma whose program was solved as feasible, so the
    returned value is a certified upper bound; ``lo`` is either the caller's
    proven lower bound or a gamma found infeasible.
    """

    def __init__(self, probe: Probe, tol: Optional[float] = None, eps_feas: Optional[float] = None, label: str = ""):
        self.probe = probe
        self.tol = SETTINGS.tol if tol is None else tol
        self.eps_feas = SETTINGS.eps_feas if eps_feas is None else eps_feas
        self.label = label
        self.probes = 0

    def _decide(self, gamma: float) -> SdpSolution:
        sol = self._run(gamma, self.eps_feas)
        if sol.status is not SdpStatus.NUMERICAL_FAILURE:
            return sol
        if self._decisively_infeasible(sol, self.eps_feas):
            LOGGER.warning("%s probe at gamma=%.10g unresolved but margin %.3e is decisively negative",
                           self.label, gamma, sol.margin)
            return sol
        relaxed = min(self.eps_feas * 10.0, MAX_EPS_FEAS)
        LOGGER.warning("%s probe at gamma=%.10g failed (%s); retrying with eps_feas=%.1e",
                       self.label, gamma, sol.message, relaxed)
        retry = self._run(gamma, relaxed)
        if retry.status is not SdpStatus.NUMERICAL_FAILURE or self._decisively_infeasible(retry, relaxed):
            return retry
        raise NumericalFailure(f"{self.label} feasibility probe did not converge: {retry.message}", gamma=gamma)

    def _run(self, gamma: float, eps: float) -> SdpSolution:
        self.probes += 1
        sol = self.probe(gamma, eps)
        LOGGER.debug("%s probe #%s gamma=%.12g -> %s (margin %s)", self.label, self.probes, gamma,
                     sol.status.value, sol.margin)
        return sol

    @staticmethod
    def _decisively_infeasible(sol: SdpSolution, eps: float) -> bool:
        return sol.margin is not None and sol.margin < -DECISIVE_MARGIN * eps

    def run(self, lo: float, hi: float) -> BisectionResult:
        if lo > hi * (1.0 + 1e-9):
            raise BracketError(lo, hi)
        lo = min(lo, hi)

        # make sure the upper edge is certified before shrinking
        sol = self._decide(hi)
        expansions = 0
        while sol.status is not SdpStatus.FEASIBLE:
            expansions += 1
            if expansions > MAX_EXPANSIONS:
                raise NumericalFailure(f"{self.label}: no feasible upper bracket found", gamma=hi)
            lo = max(lo, hi)
            hi *= 1.0 + max(10.0 * self.tol, 1e-3)
            LOGGER.warning("%s: upper bracket not certified, expanding to %.10g", self.label, hi)
            sol = self._decide(hi)
        best = sol

        while hi - lo > self.tol * (1.0 + lo):
            mid = 0.5 * (lo + hi)
            sol = self._decide(mid)
            if sol.status is SdpStatus.FEASIBLE:
                hi, best = mid, sol
            else:
                lo = mid
        LOGGER.info("%s bisection finished: [%.10g, %.10g] after %s probes", self.label, lo, hi, self.probes)
        return BisectionResult(lo, hi, best, self.probes)


def initial_bracket(mset: MatrixSet, two_d: int, tol: float, lifted: Optional[Sequence[np.ndarray]] = None,
                    cap: Optional[int] = None) -> Tuple[float, float, float]:
    """(lo0, hi0, rho_sr): lo0 from length <= 2 products, hi0 just above rho_SR,2d.

    Raises BracketError when the product bound exceeds rho_SR,2d, which only
    happens when one of the two computations is numerically wrong.
    """
    sr = rho_sr(mset, two_d, cap=cap, lifted=lifted)
    lo, _ = lower_bound_products(mset, 2)
    if lo > sr * (1.0 + 1e-9):
        raise BracketError(lo, sr)
    return min(lo, sr), sr * (1.0 + 10.0 * tol), sr
