import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from linalg import as_vector


Exponent = Tuple[int, ...]


def lift_dimension(n: int, d: int) -> int:
    """N = binom(n+d-1, d), the number of degree-d monomials in n variables."""
    return math.comb(n + d - 1, d)


def multinomial(exponent: Sequence[int]) -> int:
    d = sum(exponent)
    value = math.factorial(d)
    for a in exponent:
        value //= math.factorial(a)
    return value


def multiplicity_factor(exponent: Sequence[int]) -> int:
    """mu(alpha): product of the factorials of the multiplicities."""
    value = 1
    for a in exponent:
        value *= math.factorial(a)
    return value


def as_multiset(exponent: Sequence[int]) -> List[int]:
    """(2, 1) -> [0, 0, 1]: variable positions listed with multiplicity."""
    return [i for i, a in enumerate(exponent) for _ in range(a)]


def _compositions(n: int, d: int) -> List[Exponent]:
    # lexicographically descending: the first variable takes the largest power first
    if n == 1:
        return [(d,)]
    out: List[Exponent] = []
    for first in range(d, -1, -1):
        for rest in _compositions(n - 1, d - first):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True, eq=False)
class LiftBasis:
    """Ordered degree-d monomial basis in n variables with sqrt-multinomial scalings."""

    n: int
    d: int
    indices: Tuple[Exponent, ...]
    scalings: np.ndarray
    _position: Dict[Exponent, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.indices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LiftBasis):
            return NotImplemented
        return self.n == other.n and self.d == other.d

    def __hash__(self) -> int:
        return hash((self.n, self.d))

    def position(self, exponent: Sequence[int]) -> int:
        key = tuple(int(a) for a in exponent)
        try:
            return self._position[key]
        except KeyError:
            raise ValueError(f"exponent {key} is not a degree-{self.d} monomial in {self.n} variables")

    @property
    def exponent_array(self) -> np.ndarray:
        return np.array(self.indices, dtype=int)

    def labels(self) -> List[str]:
        return ["(" + ",".join(str(a) for a in alpha) + ")" for alpha in self.indices]


@lru_cache(maxsize=None)
def enumerate_basis(n: int, d: int) -> LiftBasis:
    """Canonical basis: exponent tuples in lexicographically descending order."""
    if n < 1 or d < 1:
        raise ValueError(f"enumerate_basis needs n >= 1 and d >= 1, got n={n}, d={d}")
    indices = tuple(_compositions(n, d))
    scalings = np.sqrt(np.array([float(multinomial(alpha)) for alpha in indices]))
    scalings.setflags(write=False)
    position = {alpha: k for k, alpha in enumerate(indices)}
    return LiftBasis(n=n, d=d, indices=indices, scalings=scalings, _position=position)


def lift_vector(x: Sequence[float], d: int) -> np.ndarray:
    """x^[d]: every degree-d monomial of x times sqrt of its multinomial coefficient."""
    vec = as_vector(x, name="x")
    basis = enumerate_basis(vec.shape[0], d)
    powers = np.prod(vec[None, :] ** basis.exponent_array, axis=1)
    return basis.scalings * powers
