"""Delimited-text ingestion and round-trippable CSV output."""
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MixedType, ParseError
from .mca import IndicatorMatrix, indicator_from_categories


def _is_number(text):
    try:
        value = float(text)
    except ValueError:
        return False
    return math.isfinite(value)


def read_rows(path, delimiter=","):
    """Raw cells of a UTF-8 delimited file (RFC 4180 quoting, LF or CRLF)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh, delimiter=delimiter)]
    while rows and not any(cell.strip() for cell in rows[-1]):
        rows.pop()
    if not rows:
        raise ParseError(f"{path}: no data")
    return rows


@dataclass
class Table:
    """Parsed table.

    ``matrix`` holds the numeric columns (``None`` if there are none) and
    ``blocks`` one indicator matrix per declared categorical column.
    """
    matrix: np.ndarray
    numeric_names: list
    blocks: list = field(default_factory=list)
    categorical_names: list = field(default_factory=list)
    row_ids: list = field(default_factory=list)


def _detect_header(first_row, row_labels):
    cells = first_row[1:] if row_labels else first_row
    return any(not _is_number(c) for c in cells)


def ingest_table(path, delimiter=",", header="auto", row_labels=False,
                 categorical=()):
    """Read a delimited table.

    Parameters
    ----------
    path : str or Path
    delimiter : str
    header : {"auto", True, False}
        ``"auto"`` treats the first row as a header when any of its cells
        is not a number.
    row_labels : bool
        Take the first column as item identifiers.
    categorical : iterable of str or int, or "all"
        Columns (by header name or 0-based index among data columns) to turn
        into indicator blocks.

    Raises
    ------
    ParseError
        On ragged rows or a malformed numeric cell (line and column named).
    MixedType
        When an undeclared column is mostly non-numeric.
    """
    rows = read_rows(path, delimiter)
    if header == "auto":
        header = _detect_header(rows[0], row_labels)
    offset = 1 if row_labels else 0
    width = len(rows[0]) - offset
    if width < 1:
        raise ParseError("no data columns", line=1)
    if header:
        names = [c.strip() for c in rows[0][offset:]]
        body, first_line = rows[1:], 2
    else:
        names = [f"V{j + 1}" for j in range(width)]
        body, first_line = rows, 1
    if not body:
        raise ParseError(f"{path}: header but no data rows")

    row_ids, cells = [], []
    for lineno, row in enumerate(body, start=first_line):
        if len(row) - offset != width:
            raise ParseError(f"expected {width} data cells, found {len(row) - offset}",
                             line=lineno)
        row_ids.append(row[0].strip() if row_labels else str(lineno - first_line + 1))
        cells.append([c.strip() for c in row[offset:]])

    if categorical == "all":
        cat_idx = list(range(width))
    else:
        cat_idx = []
        for c in categorical:
            if isinstance(c, int) or (isinstance(c, str) and c.isdigit() and c not in names):
                j = int(c)
            elif c in names:
                j = names.index(c)
            else:
                raise ParseError(f"unknown categorical column {c!r}")
            if not 0 <= j < width:
                raise ParseError(f"categorical column index {j} out of range")
            cat_idx.append(j)

    numeric_idx = [j for j in range(width) if j not in cat_idx]
    matrix = None
    if numeric_idx:
        matrix = np.empty((len(cells), len(numeric_idx)))
        for jj, j in enumerate(numeric_idx):
            column = [row[j] for row in cells]
            bad = [i for i, v in enumerate(column) if not _is_number(v)]
            if bad:
                i = bad[0]
                if len(bad) * 2 > len(column):
                    raise MixedType(f"non-numeric column (value {column[i]!r}); "
                                    "declare it categorical", line=first_line + i,
                                    column=names[j])
                raise ParseError(f"malformed number {column[i]!r}",
                                 line=first_line + i, column=names[j])
            matrix[:, jj] = [float(v) for v in column]
    blocks = [indicator_from_categories([row[j] for row in cells]) for j in cat_idx]
    return Table(matrix, [names[j] for j in numeric_idx], blocks,
                 [names[j] for j in cat_idx], row_ids)


def read_matrix(path, delimiter=","):
    """Numeric matrix without identifiers (header auto-detected and ignored)."""
    table = ingest_table(path, delimiter=delimiter)
    return table.matrix


def read_vector(path, delimiter=","):
    """Vector stored one value per line, or as a single row."""
    M = read_matrix(path, delimiter)
    if M.shape[0] == 1 or M.shape[1] == 1:
        return M.ravel()
    raise ParseError(f"{path}: expected a vector, got a {M.shape[0]}x{M.shape[1]} table")


def read_metric(path, delimiter=","):
    """Metric file: weights (vector) or a square SPD table."""
    M = read_matrix(path, delimiter)
    if M.shape[0] == M.shape[1] and M.shape[0] > 1:
        return M
    if M.shape[0] == 1 or M.shape[1] == 1:
        return M.ravel()
    raise ParseError(f"{path}: metric must be a vector or a square table")


def format_float(x):
    """17 significant digits: enough to round-trip any double."""
    return "%.17g" % x


def format_matrix(M, row_ids=None, col_names=None, id_name="id"):
    """CSV text for ``M``; deterministic so identical arrays give identical bytes."""
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    n, k = M.shape
    if col_names is None:
        col_names = [f"dim{j + 1}" for j in range(k)]
    if row_ids is None:
        row_ids = [str(i + 1) for i in range(n)]
    lines = [",".join([id_name] + [_quote(c) for c in col_names])]
    for rid, row in zip(row_ids, M):
        lines.append(",".join([_quote(str(rid))] + [format_float(v) for v in row]))
    return "\n".join(lines) + "\n"


def format_vector(v, name="value", id_name="index"):
    v = np.asarray(v, dtype=np.float64).ravel()
    return format_matrix(v[:, None], [str(i + 1) for i in range(v.size)], [name], id_name)


def _quote(text):
    if any(ch in text for ch in ',"\n\r'):
        return '"' + text.replace('"', '""') + '"'
    return text


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
