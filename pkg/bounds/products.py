import itertools
import logging
from functools import reduce
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from config.settings import SETTINGS
from linalg import spectral_radius
from utils.errors import DimensionCapError
from .models import MatrixSet


LOGGER = logging.getLogger(__name__)

Word = Tuple[int, ...]


def canonical_rotation(word: Sequence[int]) -> Word:
    """Lexicographically smallest rotation of ``word``."""
    w = tuple(word)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def necklaces(m: int, k: int) -> Iterator[Word]:
    """One representative (the minimal rotation) per cyclic class of length-k words over m letters."""
    for word in itertools.product(range(m), repeat=k):
        if word == canonical_rotation(word):
            yield word


def word_product(mset: MatrixSet, word: Sequence[int]) -> np.ndarray:
    """A_{w_1} A_{w_2} ... A_{w_k} for a 0-based word."""
    return reduce(np.matmul, (mset.matrices[i] for i in word))


def lower_bound_products(
    mset: MatrixSet,
    k_max: int,
    cap: Optional[int] = None,
    rel_tol: Optional[float] = None,
) -> Tuple[float, Word]:
    """max over words w with |w| <= k_max of rho(A_w)^(1/|w|), with its 1-based argmax word.

    Every such value is a lower bound on the joint spectral radius; words in
    one cyclic class share a spectral radius, so one representative each is
    evaluated.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    cap = SETTINGS.product_cap if cap is None else cap
    tol = SETTINGS.spectral_tol if rel_tol is None else rel_tol
    m = mset.m
    total = sum(m ** k for k in range(1, k_max + 1))
    if total > cap:
        raise DimensionCapError("product word enumeration", total, cap)

    best = -1.0
    witness: Word = (0,)
    evaluated = 0
    for k in range(1, k_max + 1):
        for word in necklaces(m, k):
            value = spectral_radius(word_product(mset, word), tol) ** (1.0 / k)
            evaluated += 1
            if value > best:
                best, witness = value, word
    LOGGER.debug("Evaluated %s necklaces up to length %s, best %.12g", evaluated, k_max, best)
    return best, tuple(i + 1 for i in witness)
