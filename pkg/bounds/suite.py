import logging
import time
from typing import Iterable, List, Optional, Sequence, Tuple

from config.settings import SETTINGS
from .cq import rho_cq
from .models import METHOD_ORDER, BoundReport, MatrixSet, Method
from .products import lower_bound_products
from .sos import rho_sos
from .spectral import half_degree, rho_sr


LOGGER = logging.getLogger(__name__)

DEFAULT_PRODUCT_LENGTH = 4


def _lower_report(mset: MatrixSet, k_max: int, cap: Optional[int]) -> BoundReport:
    started = time.perf_counter()
    value, witness = lower_bound_products(mset, k_max, cap=cap)
    return BoundReport(
        method=Method.LOWER,
        value=value,
        witness=witness,
        tolerances={"k_max": k_max, "spectral_tol": SETTINGS.spectral_tol},
        elapsed=time.perf_counter() - started,
    )


def _sr_report(mset: MatrixSet, two_d: int, cap: Optional[int]) -> BoundReport:
    started = time.perf_counter()
    value = rho_sr(mset, two_d, cap=cap)
    return BoundReport(
        method=Method.SR,
        value=value,
        two_d=two_d,
        tolerances={"spectral_tol": SETTINGS.spectral_tol},
        elapsed=time.perf_counter() - started,
    )


def run_bounds(
    mset: MatrixSet,
    two_d: int,
    methods: Optional[Iterable[Method]] = None,
    tol: Optional[float] = None,
    eps_feas: Optional[float] = None,
    k_max: int = DEFAULT_PRODUCT_LENGTH,
    inflation: float = 0.0,
    lift_cap: Optional[int] = None,
    product_cap: Optional[int] = None,
) -> List[BoundReport]:
    """Compute the requested bounds; reports come back in the fixed order lower, sos, cq, sr."""
    half_degree(two_d)
    wanted = set(METHOD_ORDER if methods is None else (Method(m) for m in methods))
    reports: List[BoundReport] = []
    for method in METHOD_ORDER:
        if method not in wanted:
            continue
        LOGGER.info("Computing %s bound (2d=%s) for %s", method.value, two_d, mset.name or "matrix set")
        if method is Method.LOWER:
            reports.append(_lower_report(mset, k_max, product_cap))
        elif method is Method.SOS:
            reports.append(rho_sos(mset, two_d, tol, eps_feas, inflation=inflation, cap=lift_cap))
        elif method is Method.CQ:
            reports.append(rho_cq(mset, two_d, tol, eps_feas, cap=lift_cap))
        else:
            reports.append(_sr_report(mset, two_d, lift_cap))
    return reports


def jsr_bracket(reports: Sequence[BoundReport]) -> Tuple[Optional[float], Optional[float]]:
    """Best (lower, upper) bracket on the joint spectral radius implied by a set of reports.

    Lower candidates are product bounds and quality_factor * value of the
    SOS and CQ bounds; upper candidates are every upper bound.
    """
    lowers = [r.value for r in reports if r.method is Method.LOWER]
    lowers += [r.quality_factor * r.value for r in reports if r.quality_factor is not None]
    uppers = [r.value for r in reports if r.is_upper]
    return (max(lowers) if lowers else None, min(uppers) if uppers else None)
