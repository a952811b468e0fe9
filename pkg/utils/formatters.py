import math
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np


SIGNIFICANT_DIGITS = 6


def format_value(value: Optional[float], digits: int = SIGNIFICANT_DIGITS) -> str:
    if value is None:
        return "-"
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return f"{value:.{digits}g}"


def _table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    rows = [list(r) for r in rows]
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(row, widths))))
    return "\n".join(lines)


def format_bounds_table(reports: Sequence[dict], title: Optional[str] = None) -> str:
    """Method / degree / value / quality factor / time, one row per bound report dict."""
    if not reports:
        return "(нет результатов)"
    rows = []
    for r in reports:
        elapsed = r.get("elapsed")
        rows.append([
            r.get("method", "?"),
            str(r["two_d"]) if r.get("two_d") is not None else "-",
            format_value(r.get("value")),
            format_value(r.get("quality_factor"), 3),
            f"{elapsed:.2f}s" if elapsed is not None else "-",
        ])
    text = _table(["method", "2d", "value", "quality", "time"], rows)
    return f"{title}\n{text}" if title else text


def format_bracket(lower: Optional[float], upper: Optional[float]) -> str:
    return f"JSR in [{format_value(lower)}, {format_value(upper)}]"


def format_matrix(M: Any, labels: Optional[Sequence[str]] = None, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Matrix with row labels and a column header when ``labels`` are given (basis legend)."""
    arr = np.asarray(M, dtype=float)
    cells = [[format_value(float(v), digits) for v in row] for row in arr]
    width = max((len(c) for row in cells for c in row), default=1)
    if labels is None:
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)
    lab_width = max(len(s) for s in labels)
    width = max(width, lab_width)
    lines = [" " * lab_width + " " + " ".join(s.rjust(width) for s in labels)]
    for label, row in zip(labels, cells):
        lines.append(label.ljust(lab_width) + " " + " ".join(c.rjust(width) for c in row))
    return "\n".join(lines)


def format_sizes_table(rows: Sequence[Any], m: int) -> str:
    """Lifting sizes per step with the accuracy m^(-1/2d); sizes are printed as exact integers."""
    body = [
        [str(r.step), str(r.two_d), str(r.kron), str(r.semidef), str(r.symalg), f"{m ** (-1.0 / r.two_d):.3f}"]
        for r in rows
    ]
    return _table(["k", "2d", "kron", "semidef", "symalg", "accuracy"], body)


def format_residuals(residuals: Sequence[dict]) -> str:
    if not residuals:
        return "(нет остатков)"
    rows = [
        [
            r["block"],
            f"{r['coefficient_residual']:.3e}",
            f"{r['coefficient_tol']:.1e}",
            f"{r['min_eigenvalue']:.3e}",
            "ok" if r["coefficient_residual"] <= r["coefficient_tol"]
            and r["min_eigenvalue"] >= -r["eigenvalue_tol"] else "FAIL",
        ]
        for r in residuals
    ]
    return _table(["block", "residual", "tol", "min eig", "status"], rows)


def format_polynomial(terms: Sequence[Any], digits: int = SIGNIFICANT_DIGITS) -> str:
    """'c1*m1 + c2*m2' from (coefficient, monomial label) pairs; zero terms are skipped."""
    parts: List[str] = []
    for coeff, label in terms:
        if coeff == 0:
            continue
        text = format_value(abs(coeff), digits)
        sign = "-" if coeff < 0 else "+"
        body = text if label == "1" else f"{text}*{label}"
        parts.append(f"{sign} {body}")
    if not parts:
        return "0"
    joined = " ".join(parts)
    return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]
