"""Aligned plain-text tables."""

from typing import Iterable, List, Optional, Sequence


def format_cell(value: object, precision: int) -> str:
    """Format one table cell; None renders as ``-``."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{precision}f}"
    return str(value)


def aligned_table(
    headers: Sequence[str],
    rows: Iterable[Sequence[object]],
    precision: int = 6,
    left: Optional[Sequence[str]] = None,
) -> str:
    """Right-aligned columns except those named in ``left``; two-space gutters."""
    left_set = set(left or ())
    cells: List[List[str]] = [[format_cell(v, precision) for v in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]

    def line(values: Sequence[str]) -> str:
        return "  ".join(
            v.ljust(w) if h in left_set else v.rjust(w) for h, v, w in zip(headers, values, widths)
        ).rstrip()

    return "\n".join([line(list(headers)), *(line(row) for row in cells)]) + "\n"
