"""Semidefinite feasibility/optimisation: block-diagonal programs, interior-point solver, SDPA I/O."""

from .models import LinearMatrixProgram, ProgramBuilder, SdpSolution, SdpStatus, check_solution
from .sdpa import export_sdpa, parse_sdpa
from .solver import InteriorPointSolver, minimize, phase_one_program, solve_feasibility

__all__ = [
    "InteriorPointSolver",
    "LinearMatrixProgram",
    "ProgramBuilder",
    "SdpSolution",
    "SdpStatus",
    "check_solution",
    "export_sdpa",
    "minimize",
    "parse_sdpa",
    "phase_one_program",
    "solve_feasibility",
]
