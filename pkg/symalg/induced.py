import logging
import math

import numpy as np

from linalg import as_matrix
from .basis import as_multiset, enumerate_basis, multiplicity_factor
from .permanent import permanent


LOGGER = logging.getLogger(__name__)


def induced_matrix(A, d: int) -> np.ndarray:
    """d-th induced matrix A^[d], the unique matrix with A^[d] x^[d] = (A x)^[d].

    Entry (alpha, beta) is per A(alpha, beta) / sqrt(mu(alpha) mu(beta)), where
    A(alpha, beta) picks rows alpha and columns beta of A with multiplicity.
    Entries are independent of each other and computed one by one.
    """
    M = as_matrix(A, square=True, name="A")
    if d < 1:
        raise ValueError(f"induced_matrix needs d >= 1, got {d}")
    n = M.shape[0]
    basis = enumerate_basis(n, d)
    size = len(basis)
    if d == 1:
        out = M.copy()
        out.setflags(write=False)
        return out

    multisets = [as_multiset(alpha) for alpha in basis.indices]
    norms = [math.sqrt(multiplicity_factor(alpha)) for alpha in basis.indices]
    out = np.empty((size, size))
    for r, rows in enumerate(multisets):
        sub_rows = M[rows, :]
        for c, cols in enumerate(multisets):
            out[r, c] = permanent(sub_rows[:, cols]) / (norms[r] * norms[c])
    LOGGER.debug("Induced matrix of degree %s for n=%s has size %s", d, n, size)
    out.setflags(write=False)
    return out
