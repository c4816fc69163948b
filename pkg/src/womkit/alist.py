"""Reader/writer for the alist sparse-matrix interchange format.

Layout (MacKay convention), bit-exact on write:

    line 1: n m            (columns, then rows)
    line 2: max_col_weight max_row_weight
    line 3: n column weights
    line 4: m row weights
    then n lines of 1-based row indices, one line per column,
    then m lines of 1-based column indices, one line per row.

Zero padding inside index lines is permitted and ignored on read.
"""

from __future__ import annotations

import numpy as np

from .gf2 import BitMatrix


class AlistFormatError(ValueError):
    """Malformed alist input; the message names the offending line."""


def _ints(line: str, lineno: int):
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise AlistFormatError(f"line {lineno}: expected integers, got {line!r}") from None


def write_alist(path, mat: BitMatrix) -> None:
    n, m = mat.cols, mat.rows
    dense = mat.toarray()
    col_wt = dense.sum(axis=0, dtype=np.int64)
    row_wt = dense.sum(axis=1, dtype=np.int64)
    lines = [
        f"{n} {m}",
        f"{int(col_wt.max(initial=0))} {int(row_wt.max(initial=0))}",
        " ".join(str(int(w)) for w in col_wt),
        " ".join(str(int(w)) for w in row_wt),
    ]
    # Zero-weight lines carry a single padding zero so no data line is
    # empty (the reader drops trailing blank lines).
    for j in range(n):
        lines.append(" ".join(str(int(i) + 1) for i in np.nonzero(dense[:, j])[0]) or "0")
    for i in range(m):
        lines.append(" ".join(str(int(j) + 1) for j in np.nonzero(dense[i])[0]) or "0")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alist(path) -> BitMatrix:
    with open(path) as fh:
        raw = fh.read().splitlines()
    # Trailing blank lines are tolerated; internal structure is not.
    while raw and not raw[-1].strip():
        raw.pop()

    def need(lineno: int) -> str:
        if lineno > len(raw):
            raise AlistFormatError(f"line {lineno}: file truncated")
        return raw[lineno - 1]

    head = _ints(need(1), 1)
    if len(head) != 2:
        raise AlistFormatError("line 1: expected 'n m'")
    n, m = head
    if n <= 0 or m <= 0:
        raise AlistFormatError("line 1: dimensions must be positive")
    _ints(need(2), 2)  # max weights: informational, re-derived below
    col_wt = _ints(need(3), 3)
    if len(col_wt) != n:
        raise AlistFormatError(f"line 3: expected {n} column weights, got {len(col_wt)}")
    row_wt = _ints(need(4), 4)
    if len(row_wt) != m:
        raise AlistFormatError(f"line 4: expected {m} row weights, got {len(row_wt)}")

    dense = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        lineno = 5 + j
        entries = [e for e in _ints(need(lineno), lineno) if e != 0]
        if len(entries) != col_wt[j]:
            raise AlistFormatError(
                f"line {lineno}: column {j} lists {len(entries)} entries, weight says {col_wt[j]}"
            )
        for e in entries:
            if not 1 <= e <= m:
                raise AlistFormatError(f"line {lineno}: row index {e} out of range")
            dense[e - 1, j] = 1
    for i in range(m):
        lineno = 5 + n + i
        entries = [e for e in _ints(need(lineno), lineno) if e != 0]
        if sorted(entries) != [int(j) + 1 for j in np.nonzero(dense[i])[0]]:
            raise AlistFormatError(f"line {lineno}: row {i} disagrees with column lists")
    return BitMatrix(dense)
