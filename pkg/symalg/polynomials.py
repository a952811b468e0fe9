import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from linalg import as_matrix, as_vector
from .basis import Exponent, LiftBasis, enumerate_basis, lift_vector
from .induced import induced_matrix


LOGGER = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PolyCoeffs:
    """Homogeneous polynomial p(x) = <coeffs, x^[degree]> in the scaled basis."""

    basis: LiftBasis
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        vec = np.array(self.coeffs, dtype=float)
        if vec.shape != (len(self.basis),):
            raise ValueError(f"expected {len(self.basis)} coefficients, got shape {vec.shape}")
        if not np.all(np.isfinite(vec)):
            raise ValueError("polynomial coefficients must be finite")
        vec.setflags(write=False)
        object.__setattr__(self, "coeffs", vec)

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def degree(self) -> int:
        return self.basis.d

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def scaled(self, factor: float) -> "PolyCoeffs":
        return PolyCoeffs(self.basis, factor * self.coeffs)

    def __add__(self, other: "PolyCoeffs") -> "PolyCoeffs":
        _check_same_space(self, other)
        return PolyCoeffs(self.basis, self.coeffs + other.coeffs)

    def __sub__(self, other: "PolyCoeffs") -> "PolyCoeffs":
        _check_same_space(self, other)
        return PolyCoeffs(self.basis, self.coeffs - other.coeffs)


def _check_same_space(p: PolyCoeffs, q: PolyCoeffs) -> None:
    if p.basis != q.basis:
        raise ValueError(
            f"polynomials live in different spaces: n={p.n}, degree={p.degree} vs n={q.n}, degree={q.degree}"
        )


def zero_poly(n: int, degree: int) -> PolyCoeffs:
    basis = enumerate_basis(n, degree)
    return PolyCoeffs(basis, np.zeros(len(basis)))


@lru_cache(maxsize=None)
def coefficient_functionals(n: int, d: int) -> np.ndarray:
    """E[g] with <E[g], Q> = g-th scaled coefficient of (x^[d])^T Q x^[d].

    Shape (N_2d, N_d, N_d); each E[g] is symmetric.
    """
    half = enumerate_basis(n, d)
    full = enumerate_basis(n, 2 * d)
    size = len(half)
    out = np.zeros((len(full), size, size))
    for a, alpha in enumerate(half.indices):
        for b, beta in enumerate(half.indices):
            g = full.position(tuple(x + y for x, y in zip(alpha, beta)))
            out[g, a, b] = half.scalings[a] * half.scalings[b] / full.scalings[g]
    out.setflags(write=False)
    return out


def gram_to_coeffs(Q, basis: LiftBasis) -> PolyCoeffs:
    """Coefficients of (x^[d])^T Q x^[d] in the canonical scaled degree-2d basis."""
    G = as_matrix(Q, square=True, name="Q")
    size = len(basis)
    if G.shape[0] != size:
        raise ValueError(f"Gram matrix is {G.shape[0]}x{G.shape[0]} but the basis has {size} monomials")
    scale = max(float(np.max(np.abs(G))), 1.0)
    if float(np.max(np.abs(G - G.T))) > SYMMETRY_TOL * scale:
        raise ValueError("Gram matrix must be symmetric")
    E = coefficient_functionals(basis.n, basis.d)
    coeffs = np.einsum("gab,ab->g", E, G)
    return PolyCoeffs(enumerate_basis(basis.n, 2 * basis.d), coeffs)


def gram_to_monomials(Q, exponents: Sequence[Sequence[int]]) -> Dict[Exponent, float]:
    """Plain monomial coefficients of m^T Q m for an arbitrary unscaled monomial list m."""
    G = as_matrix(Q, square=True, name="Q")
    if G.shape[0] != len(exponents):
        raise ValueError(f"Gram matrix is {G.shape[0]}x{G.shape[0]} but {len(exponents)} monomials were given")
    out: Dict[Exponent, float] = {}
    for i, alpha in enumerate(exponents):
        for j, beta in enumerate(exponents):
            key = tuple(int(a) + int(b) for a, b in zip(alpha, beta))
            out[key] = out.get(key, 0.0) + float(G[i, j])
    return out


def to_monomial_coeffs(p: PolyCoeffs) -> Dict[Exponent, float]:
    return {alpha: float(c * s) for alpha, c, s in zip(p.basis.indices, p.coeffs, p.basis.scalings)}


def from_monomial_coeffs(n: int, degree: int, mapping: Mapping[Sequence[int], float]) -> PolyCoeffs:
    """Build scaled coefficients from plain monomial coefficients; missing monomials are zero."""
    basis = enumerate_basis(n, degree)
    coeffs = np.zeros(len(basis))
    for alpha, value in mapping.items():
        if len(alpha) != n or sum(alpha) != degree:
            raise ValueError(f"monomial {tuple(alpha)} is not of degree {degree} in {n} variables")
        k = basis.position(alpha)
        coeffs[k] += float(value) / basis.scalings[k]
    return PolyCoeffs(basis, coeffs)


def norm_power_poly(n: int, d: int) -> PolyCoeffs:
    """(x_1^2 + ... + x_n^2)^d, whose Gram matrix in the scaled basis is the identity."""
    return gram_to_coeffs(np.eye(len(enumerate_basis(n, d))), enumerate_basis(n, d))


def compose_coeffs(p: PolyCoeffs, A, lifted: Optional[np.ndarray] = None) -> PolyCoeffs:
    """Coefficients of x -> p(A x), i.e. transpose(A^[2d]) applied to p's coefficients.

    ``lifted`` lets callers pass a precomputed A^[2d].
    """
    M = as_matrix(A, square=True, name="A")
    if M.shape[0] != p.n:
        raise ValueError(f"A is {M.shape[0]}x{M.shape[0]} but the polynomial has {p.n} variables")
    T = induced_matrix(M, p.degree) if lifted is None else lifted
    if T.shape != (len(p.basis), len(p.basis)):
        raise ValueError(f"lifted matrix has shape {T.shape}, expected {(len(p.basis), len(p.basis))}")
    return PolyCoeffs(p.basis, T.T @ p.coeffs)


def eval_poly(p: PolyCoeffs, x: Sequence[float]) -> float:
    vec = as_vector(x, name="x")
    if vec.shape[0] != p.n:
        raise ValueError(f"point has {vec.shape[0]} coordinates, polynomial has {p.n} variables")
    return float(np.dot(p.coeffs, lift_vector(vec, p.degree)))


def monomial_key(exponent: Tuple[int, ...]) -> str:
    """'x1^2*x2' style rendering used in tables and decompositions."""
    parts = []
    for i, a in enumerate(exponent, start=1):
        if a == 1:
            parts.append(f"x{i}")
        elif a > 1:
            parts.append(f"x{i}^{a}")
    return "*".join(parts) or "1"
