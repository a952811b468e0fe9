import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from linalg import min_eig_symmetric


LOGGER = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12

# (block, row, col) -> value; row/col are 0-based inside the block
Entries = Mapping[Tuple[int, int, int], float]


class SdpStatus(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LinearMatrixProgram:
    """Block-diagonal program: sum_b <C_kb, X_b> = r_k for every k, every X_b PSD.

    ``coefficients[b]`` stacks the symmetric coefficient matrices of all
    constraints for block b, shape (K, n_b, n_b).
    """

    block_sizes: Tuple[int, ...]
    coefficients: Tuple[np.ndarray, ...]
    rhs: np.ndarray
    objective: Tuple[np.ndarray, ...] = ()

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.block_sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"block sizes must be positive, got {sizes}")
        rhs = _frozen(self.rhs).reshape(-1)
        K = rhs.shape[0]
        if K < 1:
            raise ValueError("a program needs at least one constraint")
        if not np.all(np.isfinite(rhs)):
            raise ValueError("right-hand sides must be finite")
        if len(self.coefficients) != len(sizes):
            raise ValueError(f"{len(self.coefficients)} coefficient stacks for {len(sizes)} blocks")
        coeffs = []
        for b, (stack, n_b) in enumerate(zip(self.coefficients, sizes)):
            arr = _frozen(stack)
            if arr.shape != (K, n_b, n_b):
                raise ValueError(f"block {b}: coefficient stack has shape {arr.shape}, expected {(K, n_b, n_b)}")
            _check_symmetric(arr, f"block {b} coefficients")
            coeffs.append(arr)
        if self.objective:
            if len(self.objective) != len(sizes):
                raise ValueError(f"{len(self.objective)} objective blocks for {len(sizes)} blocks")
            objective = []
            for b, (C, n_b) in enumerate(zip(self.objective, sizes)):
                arr = _frozen(C)
                if arr.shape != (n_b, n_b):
                    raise ValueError(f"block {b}: objective has shape {arr.shape}, expected {(n_b, n_b)}")
                _check_symmetric(arr[None], f"block {b} objective")
                objective.append(arr)
        else:
            objective = [_frozen(np.zeros((n_b, n_b))) for n_b in sizes]
        object.__setattr__(self, "block_sizes", sizes)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "coefficients", tuple(coeffs))
        object.__setattr__(self, "objective", tuple(objective))

    @property
    def num_constraints(self) -> int:
        return int(self.rhs.shape[0])

    def apply(self, blocks: Sequence[np.ndarray]) -> np.ndarray:
        """A(X): the vector of constraint left-hand sides."""
        out = np.zeros(self.num_constraints)
        for stack, X in zip(self.coefficients, blocks):
            out += np.einsum("kij,ij->k", stack, X)
        return out

    def adjoint(self, y: np.ndarray) -> List[np.ndarray]:
        """A*(y) = sum_k y_k C_k, block by block."""
        return [np.einsum("k,kij->ij", y, stack) for stack in self.coefficients]

    def objective_value(self, blocks: Sequence[np.ndarray]) -> float:
        return float(sum(np.sum(C * X) for C, X in zip(self.objective, blocks)))

    def has_objective(self) -> bool:
        return any(np.any(C) for C in self.objective)

    def with_constraint(self, blocks: Sequence[np.ndarray], rhs: float) -> "LinearMatrixProgram":
        coeffs = tuple(np.concatenate([stack, np.asarray(B, dtype=float)[None]]) for stack, B in zip(self.coefficients, blocks))
        return LinearMatrixProgram(self.block_sizes, coeffs, np.append(self.rhs, rhs), self.objective)


def _check_symmetric(stack: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(stack)):
        raise ValueError(f"{what} must be finite")
    scale = max(float(np.max(np.abs(stack))) if stack.size else 0.0, 1.0)
    if float(np.max(np.abs(stack - np.swapaxes(stack, -1, -2)))) > SYMMETRY_TOL * scale:
        raise ValueError(f"{what} must be symmetric")


class ProgramBuilder:
    """Accumulates constraints entry by entry.

    An entry (b, i, j) with value v sets C[i, j] = C[j, i] = v inside block b,
    so an off-diagonal entry contributes 2 v X_ij to <C, X>.
    """

    def __init__(self, block_sizes: Sequence[int]):
        self.block_sizes = tuple(int(s) for s in block_sizes)
        self._rows: List[List[np.ndarray]] = []
        self._rhs: List[float] = []
        self._objective = [np.zeros((s, s)) for s in self.block_sizes]

    def _empty(self) -> List[np.ndarray]:
        return [np.zeros((s, s)) for s in self.block_sizes]

    @staticmethod
    def _put(mats: List[np.ndarray], entries: Iterable[Tuple[Tuple[int, int, int], float]]) -> None:
        for (b, i, j), v in entries:
            if i > j:
                i, j = j, i
            mats[b][i, j] += v
            if i != j:
                mats[b][j, i] += v

    def add_constraint(self, entries: Entries, rhs: float) -> int:
        mats = self._empty()
        self._put(mats, entries.items())
        self._rows.append(mats)
        self._rhs.append(float(rhs))
        return len(self._rhs) - 1

    def add_dense_constraint(self, blocks: Mapping[int, np.ndarray], rhs: float) -> int:
        mats = self._empty()
        for b, M in blocks.items():
            mats[b] += np.asarray(M, dtype=float)
        self._rows.append(mats)
        self._rhs.append(float(rhs))
        return len(self._rhs) - 1

    def set_objective(self, entries: Entries) -> None:
        self._objective = [np.zeros((s, s)) for s in self.block_sizes]
        self._put(self._objective, entries.items())

    def build(self) -> LinearMatrixProgram:
        coeffs = tuple(
            np.array([row[b] for row in self._rows]).reshape(len(self._rows), s, s)
            for b, s in enumerate(self.block_sizes)
        )
        return LinearMatrixProgram(self.block_sizes, coeffs, np.array(self._rhs), tuple(self._objective))


@dataclass(frozen=True, eq=False)
class SdpSolution:
    blocks: Tuple[np.ndarray, ...]
    objective_value: float
    max_constraint_residual: float
    min_block_eigenvalue: float
    status: SdpStatus
    # phase-I readout t*: feasible iff t* >= -eps_feas
    margin: Optional[float] = None
    iterations: int = 0
    message: str = ""
    dual: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def feasible(self) -> bool:
        return self.status is SdpStatus.FEASIBLE


def check_solution(prog: LinearMatrixProgram, sol) -> Tuple[float, float]:
    """Recompute (max |A(X) - r|, min block eigenvalue) from the blocks alone."""
    blocks = sol.blocks if isinstance(sol, SdpSolution) else sol
    if len(blocks) != len(prog.block_sizes):
        raise ValueError(f"{len(blocks)} blocks given, program has {len(prog.block_sizes)}")
    mats = []
    for b, (X, n_b) in enumerate(zip(blocks, prog.block_sizes)):
        arr = np.asarray(X, dtype=float)
        if arr.shape != (n_b, n_b):
            raise ValueError(f"block {b} has shape {arr.shape}, expected {(n_b, n_b)}")
        mats.append(arr)
    residual = float(np.max(np.abs(prog.apply(mats) - prog.rhs)))
    min_eig = min(min_eig_symmetric(X) for X in mats)
    return residual, min_eig
