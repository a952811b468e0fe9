import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from bounds import MatrixSet
from utils.errors import InputFormatError


LOGGER = logging.getLogger(__name__)

Grid = List[List[float]]


@dataclass(frozen=True)
class InputDocument:
    matrices: List[Grid]
    name: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)
    digest: str = ""

    def matrix_set(self) -> MatrixSet:
        return MatrixSet.of(*self.matrices, name=self.name)


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputFormatError(f"{where}: expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise InputFormatError(f"{where}: number is not finite")
    return x


def _check_grids(raw: Any) -> List[Grid]:
    if not isinstance(raw, list) or not raw:
        raise InputFormatError("'matrices' must be a nonempty list")
    grids: List[Grid] = []
    n: Optional[int] = None
    for k, matrix in enumerate(raw, start=1):
        if not isinstance(matrix, list) or not matrix:
            raise InputFormatError(f"matrix {k}: expected a nonempty list of rows")
        rows: Grid = []
        for i, row in enumerate(matrix, start=1):
            if not isinstance(row, list):
                raise InputFormatError(f"matrix {k}, row {i}: expected a list of numbers")
            rows.append([_number(v, f"matrix {k}, row {i}") for v in row])
        size = len(rows)
        if any(len(r) != size for r in rows):
            raise InputFormatError(f"matrix {k} is not square")
        if n is None:
            n = size
        elif size != n:
            raise InputFormatError(f"matrix {k} is {size}x{size}, expected {n}x{n}")
        grids.append(rows)
    return grids


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse_json_input(text: str) -> InputDocument:
    """{"name": str?, "matrices": [[[row], ...], ...], "metadata": {...}?}"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"input is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise InputFormatError("input must be a JSON object")
    if "matrices" not in data:
        raise InputFormatError("input has no 'matrices' field")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise InputFormatError("'name' must be a string")
    metadata = data.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise InputFormatError("'metadata' must be an object")
    return InputDocument(_check_grids(data["matrices"]), name, dict(metadata), _digest(text))


def parse_text_input(text: str, name: Optional[str] = None) -> InputDocument:
    """One matrix per blank-line separated block, whitespace separated rows; '#' starts a comment line."""
    blocks: List[List[List[Any]]] = []
    current: List[List[Any]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            continue
        if not stripped:
            if current:
                blocks.append(current)
                current = []
            continue
        try:
            current.append([float(tok) for tok in stripped.split()])
        except ValueError:
            raise InputFormatError(f"line {lineno}: cannot parse numbers in {stripped!r}")
    if current:
        blocks.append(current)
    return InputDocument(_check_grids(blocks), name, {}, _digest(text))


def load_input(path: str, fmt: str = "auto") -> InputDocument:
    """Read a matrix set from ``path``; ``fmt`` is json, txt or auto (by file suffix)."""
    file = Path(path)
    try:
        text = file.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}")
    if fmt == "auto":
        fmt = "txt" if file.suffix.lower() == ".txt" else "json"
    if fmt == "json":
        doc = parse_json_input(text)
    elif fmt == "txt":
        doc = parse_text_input(text, name=file.stem)
    else:
        raise InputFormatError(f"unknown input format {fmt!r}")
    LOGGER.info("Loaded %s matrices of size %s from %s", len(doc.matrices), len(doc.matrices[0]), path)
    return doc
