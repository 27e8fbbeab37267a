"""Input parsing and validation for samples and command options.

CSV rules: comma-separated, optional header row, one target column chosen
by name or zero-based index, decimal point only, blank lines skipped. Any
other malformation raises ParseError with the 1-based line number.
"""

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

from src.core.exceptions import ParseError

ColumnSelector = Union[int, str]

DECIMAL_PATTERN = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass
class ParsedColumn:
    """Values of one CSV column with the header name when present."""

    values: List[float]
    name: Optional[str]
    lines: List[int]


class DecimalValidator:
    """Validator for plain decimal numbers."""

    @classmethod
    def is_valid_format(cls, text: str) -> bool:
        return bool(DECIMAL_PATTERN.match(text.strip()))

    @classmethod
    def parse(cls, text: str, line: Optional[int] = None) -> float:
        if not cls.is_valid_format(text):
            raise ParseError(f"not a decimal number: {text.strip()!r}", line)
        return float(text)


def parse_column_selector(text: Optional[str]) -> Optional[ColumnSelector]:
    """Digits select by zero-based index; anything else selects by header name."""
    if text is None:
        return None
    text = text.strip()
    return int(text) if text.isdigit() else text


def _is_blank(row: List[str]) -> bool:
    return all(not cell.strip() for cell in row)


def _resolve_index(
    first: List[str], column: Optional[ColumnSelector], line: int
) -> Tuple[int, bool]:
    """Target column index and whether the first row is a header."""
    if isinstance(column, str):
        names = [cell.strip() for cell in first]
        if column not in names:
            raise ParseError(f"column {column!r} not found in header {names}", line)
        return names.index(column), True

    if column is None:
        if len(first) != 1:
            raise ParseError(
                f"{len(first)} columns found; select one by name or index", line
            )
        index = 0
    else:
        index = column
    if index >= len(first):
        raise ParseError(f"column index {index} out of range ({len(first)} columns)", line)
    return index, not DecimalValidator.is_valid_format(first[index])


def parse_csv_column(
    text: str, column: Optional[ColumnSelector] = None, max_rows: Optional[int] = None
) -> ParsedColumn:
    """Parse one numeric column from CSV text."""
    index: Optional[int] = None
    name: Optional[str] = None
    values: List[float] = []
    lines: List[int] = []

    for line_no, row in enumerate(csv.reader(text.splitlines()), start=1):
        if _is_blank(row):
            continue
        if index is None:
            index, has_header = _resolve_index(row, column, line_no)
            if has_header:
                name = row[index].strip()
                continue
        if index >= len(row):
            raise ParseError(f"expected at least {index + 1} fields, got {len(row)}", line_no)
        values.append(DecimalValidator.parse(row[index], line_no))
        lines.append(line_no)
        if max_rows is not None and len(values) > max_rows:
            raise ParseError(f"more than {max_rows} data rows", line_no)

    return ParsedColumn(values=values, name=name, lines=lines)


def read_csv_column(
    path: Union[str, Path], column: Optional[ColumnSelector] = None, max_rows: Optional[int] = None
) -> ParsedColumn:
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror or e}") from e
    return parse_csv_column(text, column, max_rows)


def parse_inline_values(text: str) -> List[float]:
    """Comma- or whitespace-separated inline values such as ``"1,2,3"``."""
    tokens = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    values = []
    for position, token in enumerate(tokens):
        if not DecimalValidator.is_valid_format(token):
            raise ParseError(f"inline value {position} is not a decimal number: {token!r}")
        values.append(float(token))
    return values


def parse_contamination(text: str) -> Tuple[float, int]:
    """Parse ``value:count`` (count defaults to 1)."""
    value_text, _, count_text = text.partition(":")
    value = DecimalValidator.parse(value_text)
    if not count_text:
        return value, 1
    if not count_text.strip().isdigit() or int(count_text) < 1:
        raise ParseError(f"contamination count must be a positive integer: {text!r}")
    return value, int(count_text)
