import logging
import re
from typing import List

import numpy as np

from utils.errors import InputFormatError
from .models import LinearMatrixProgram


LOGGER = logging.getLogger(__name__)

_SEPARATORS = re.compile(r"[\s,{}()]+")


def _fmt(value: float) -> str:
    # shortest repr that round-trips exactly
    return repr(float(value))


def export_sdpa(prog: LinearMatrixProgram) -> str:
    """Serialise a program in SDPA sparse format (.dat-s).

    Lines: constraint count, block count, block sizes, right-hand sides,
    then ``k b i j v`` for every nonzero upper-triangle entry (1-based,
    k = 0 for the objective), ordered by (k, b, i, j).
    """
    lines: List[str] = [
        str(prog.num_constraints),
        str(len(prog.block_sizes)),
        " ".join(str(s) for s in prog.block_sizes),
        " ".join(_fmt(r) for r in prog.rhs),
    ]
    matrices = [list(prog.objective)] + [
        [stack[k] for stack in prog.coefficients] for k in range(prog.num_constraints)
    ]
    for k, blocks in enumerate(matrices):
        for b, M in enumerate(blocks, start=1):
            rows, cols = np.nonzero(np.triu(M))
            for i, j in zip(rows, cols):
                lines.append(f"{k} {b} {i + 1} {j + 1} {_fmt(M[i, j])}")
    return "\n".join(lines) + "\n"


def parse_sdpa(text: str) -> LinearMatrixProgram:
    """Read the format written by export_sdpa (comment lines starting with '"' or '*' are skipped)."""
    rows = [line.strip() for line in text.splitlines()]
    rows = [line for line in rows if line and not line.startswith(('"', "*"))]
    if len(rows) < 4:
        raise InputFormatError("SDPA data needs at least four header lines")
    try:
        m = int(_tokens(rows[0])[0])
        n_blocks = int(_tokens(rows[1])[0])
        sizes = [int(tok) for tok in _tokens(rows[2])][:n_blocks]
        rhs = np.array([float(tok) for tok in _tokens(rows[3])][:m])
    except (ValueError, IndexError) as exc:
        raise InputFormatError(f"malformed SDPA header: {exc}")
    if len(sizes) != n_blocks or rhs.shape[0] != m:
        raise InputFormatError("SDPA header does not match the declared counts")
    if any(s < 1 for s in sizes):
        raise InputFormatError("diagonal (negative-size) SDPA blocks are not supported")

    coeffs = [np.zeros((m, s, s)) for s in sizes]
    objective = [np.zeros((s, s)) for s in sizes]
    for lineno, line in enumerate(rows[4:], start=5):
        toks = _tokens(line)
        if len(toks) != 5:
            raise InputFormatError(f"line {lineno}: expected 'k b i j v', got {line!r}")
        try:
            k, b, i, j = (int(t) for t in toks[:4])
            v = float(toks[4])
        except ValueError:
            raise InputFormatError(f"line {lineno}: cannot parse {line!r}")
        if not (0 <= k <= m and 1 <= b <= n_blocks and 1 <= i <= sizes[b - 1] and 1 <= j <= sizes[b - 1]):
            raise InputFormatError(f"line {lineno}: index out of range in {line!r}")
        target = objective[b - 1] if k == 0 else coeffs[b - 1][k - 1]
        target[i - 1, j - 1] = v
        target[j - 1, i - 1] = v
    LOGGER.debug("Parsed SDPA program: %s constraints, blocks %s", m, sizes)
    return LinearMatrixProgram(tuple(sizes), tuple(coeffs), rhs, tuple(objective))


def _tokens(line: str) -> List[str]:
    return [tok for tok in _SEPARATORS.split(line) if tok]
