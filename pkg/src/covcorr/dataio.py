"""CSV ingestion for the command-line tools.

Accepts comma- or tab-delimited numeric matrices with an optional header
row.  Missing or non-numeric entries are hard errors reported with their
row/column location; the statistics have no missing-data semantics.
"""

import csv
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

__all__ = ["DataMatrix", "ParseError", "load_matrix"]


class ParseError(Exception):
    """Malformed numeric input; carries 1-based row/column location."""

    def __init__(self, message: str, row: Optional[int] = None,
                 col: Optional[int] = None):
        loc = ""
        if row is not None:
            loc = f" at row {row}" + (f", column {col}" if col is not None else "")
        super().__init__(message + loc)
        self.row = row
        self.col = col


@dataclass(frozen=True)
class DataMatrix:
    """A rectangular numeric table with optional column names."""

    values: np.ndarray
    names: Optional[List[str]] = None

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def column_name(self, j: int) -> str:
        if self.names is not None:
            return self.names[j]
        return f"col{j + 1}"


def _detect_delimiter(line: str) -> str:
    return "\t" if line.count("\t") > line.count(",") else ","


def _is_header(cells: List[str]) -> bool:
    for cell in cells:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def load_matrix(path) -> DataMatrix:
    """Parse a CSV/TSV file into a DataMatrix; raise ParseError on any defect."""
    try:
        with open(path, "r", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise ParseError(f"{path}: file contains no data")
    delim = _detect_delimiter(lines[0])
    reader = list(csv.reader(lines, delimiter=delim))
    names = None
    start = 0
    if _is_header(reader[0]):
        names = [c.strip() for c in reader[0]]
        start = 1
    if start >= len(reader):
        raise ParseError(f"{path}: header but no data rows")
    width = len(reader[start])
    rows = []
    for i in range(start, len(reader)):
        cells = reader[i]
        if len(cells) != width:
            raise ParseError(f"{path}: ragged row ({len(cells)} cells, expected {width})",
                             row=i + 1)
        row = np.empty(width)
        for j, cell in enumerate(cells):
            s = cell.strip()
            if s == "":
                raise ParseError(f"{path}: blank entry", row=i + 1, col=j + 1)
            try:
                v = float(s)
            except ValueError:
                raise ParseError(f"{path}: non-numeric entry {s!r}",
                                 row=i + 1, col=j + 1) from None
            if not np.isfinite(v):
                raise ParseError(f"{path}: non-finite entry {s!r}",
                                 row=i + 1, col=j + 1)
            row[j] = v
        rows.append(row)
    values = np.vstack(rows)
    if names is not None and len(names) != values.shape[1]:
        raise ParseError(f"{path}: header has {len(names)} names for "
                         f"{values.shape[1]} columns", row=1)
    return DataMatrix(values=values, names=names)
