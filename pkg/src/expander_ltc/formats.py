"""Text serializations for parity-check matrices.

Two formats: the alist sparse format common in coding tools, and a plain
dense 0/1 grid with a "rows cols" header.  Both round-trip exactly.
"""

from __future__ import annotations

from .errors import InvalidParameterError
from .f2 import BitMatrix


def matrix_to_alist(m: BitMatrix) -> str:
    """Serialize in alist order: cols rows, max degrees, degree lists, supports.

    Columns are treated as variable nodes and rows as check nodes; indices in
    the neighbor lists are 1-based per the format's convention.
    """
    col_supports = [
        [i + 1 for i in range(m.rows) if m.get(i, j)] for j in range(m.cols)
    ]
    row_supports = [
        [j + 1 for j in range(m.cols) if m.get(i, j)] for i in range(m.rows)
    ]
    max_col = max((len(s) for s in col_supports), default=0)
    max_row = max((len(s) for s in row_supports), default=0)
    lines = [
        f"{m.cols} {m.rows}",
        f"{max_col} {max_row}",
        " ".join(str(len(s)) for s in col_supports),
        " ".join(str(len(s)) for s in row_supports),
    ]
    # pad with zeros to the max degree, as consumers of the format expect
    for s in col_supports:
        lines.append(" ".join(str(v) for v in s + [0] * (max_col - len(s))))
    for s in row_supports:
        lines.append(" ".join(str(v) for v in s + [0] * (max_row - len(s))))
    return "\n".join(lines) + "\n"


def matrix_from_alist(text: str) -> BitMatrix:
    tokens = text.split()
    if len(tokens) < 4:
        raise InvalidParameterError("alist input too short")
    it = iter(tokens)
    cols, rows = int(next(it)), int(next(it))
    max_col, _max_row = int(next(it)), int(next(it))
    col_degs = [int(next(it)) for _ in range(cols)]
    [int(next(it)) for _ in range(rows)]  # row degrees, implied by the supports
    m = BitMatrix(rows, cols)
    for j in range(cols):
        entries = [int(next(it)) for _ in range(max_col)]
        seen = [e for e in entries if e]
        if len(seen) != col_degs[j]:
            raise InvalidParameterError(f"column {j} degree mismatch in alist")
        for e in seen:
            m.set(e - 1, j, 1)
    return m


def matrix_to_dense_text(m: BitMatrix) -> str:
    """A "rows cols" header followed by one unpadded 0/1 string per row."""
    lines = [f"{m.rows} {m.cols}"]
    for i in range(m.rows):
        lines.append("".join(str(m.get(i, j)) for j in range(m.cols)))
    return "\n".join(lines) + "\n"


def matrix_from_dense_text(text: str) -> BitMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidParameterError("empty dense matrix input")
    rows, cols = (int(t) for t in lines[0].split())
    if len(lines) != rows + 1:
        raise InvalidParameterError(f"expected {rows} rows, got {len(lines) - 1}")
    bits = []
    for ln in lines[1:]:
        if len(ln) != cols or set(ln) - {"0", "1"}:
            raise InvalidParameterError(f"bad dense row: {ln!r}")
        bits.append(int(ln[::-1], 2) if cols else 0)
    return BitMatrix(rows, cols, bits)
