import itertools
import logging

import numpy as np

from linalg import as_matrix
from utils.errors import DimensionCapError


LOGGER = logging.getLogger(__name__)

RYSER_MAX_SIZE = 20
NAIVE_MAX_SIZE = 8


def permanent(M, method: str = "ryser") -> float:
    """per(M) = sum over permutations of prod_i m[i, sigma(i)]."""
    A = as_matrix(M, square=True)
    n = A.shape[0]
    if method == "ryser":
        if n > RYSER_MAX_SIZE:
            raise DimensionCapError("permanent (ryser)", n, RYSER_MAX_SIZE)
        return _ryser(A)
    if method == "naive":
        if n > NAIVE_MAX_SIZE:
            raise DimensionCapError("permanent (naive)", n, NAIVE_MAX_SIZE)
        return _naive(A)
    raise ValueError(f"unknown permanent method {method!r}, expected 'ryser' or 'naive'")


def _ryser(A: np.ndarray) -> float:
    # Inclusion-exclusion over column subsets, visited in Gray-code order so
    # each step adds or removes a single column from the running row sums.
    n = A.shape[0]
    if n == 1:
        return float(A[0, 0])
    row_sums = np.zeros(n)
    total = 0.0
    previous = 0
    size = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        changed = gray ^ previous
        j = changed.bit_length() - 1
        if gray & changed:
            row_sums += A[:, j]
            size += 1
        else:
            row_sums -= A[:, j]
            size -= 1
        previous = gray
        term = float(np.prod(row_sums))
        total += -term if size % 2 else term
    return -total if n % 2 else total


def _naive(A: np.ndarray) -> float:
    n = A.shape[0]
    rows = range(n)
    total = 0.0
    for sigma in itertools.permutations(range(n)):
        term = 1.0
        for i in rows:
            term *= A[i, sigma[i]]
        total += term
    return total
