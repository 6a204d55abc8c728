"""Ordered binary matrices: text ingestion, transposition, and constant-time
rectangle counting through 2-D prefix sums.

Rows and columns are addressed 1-based and inclusive everywhere, matching
the tile coordinates; the prefix array carries a zero sentinel row and
column so rectangle lookups need no branching.
"""

from __future__ import annotations

import numpy as np

from .errors import BoundsError, FormatError
from .tiletree import Tile


class BinaryMatrix:
    """Immutable N x M 0/1 matrix plus cumulative counts of its 1s.

    `values[i, j]` is the 0-based cell array; `prefix[i, j]` counts the 1s
    in the submatrix (1..i) x (1..j), with row/column 0 all zeros.
    """

    __slots__ = ("values", "prefix")

    def __init__(self, values) -> None:
        arr = np.ascontiguousarray(values)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got {arr.ndim} dimensions")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("matrix must have at least one row and one column")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("matrix entries must be 0 or 1")
        vals = arr.astype(np.uint8)
        prefix = np.zeros((vals.shape[0] + 1, vals.shape[1] + 1), dtype=np.int64)
        prefix[1:, 1:] = vals.cumsum(axis=0, dtype=np.int64).cumsum(axis=1)
        vals.setflags(write=False)
        prefix.setflags(write=False)
        self.values = vals
        self.prefix = prefix

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def total_ones(self) -> int:
        return int(self.prefix[-1, -1])

    @property
    def full_tile(self) -> Tile:
        return Tile(1, self.n_rows, 1, self.n_cols)

    def cell(self, i: int, j: int) -> int:
        """Value at 1-based position (i, j)."""
        if not (1 <= i <= self.n_rows and 1 <= j <= self.n_cols):
            raise BoundsError(f"cell ({i}, {j}) outside {self.n_rows}x{self.n_cols}")
        return int(self.values[i - 1, j - 1])

    def rect_ones(self, tile: Tile) -> int:
        """Number of 1s inside `tile`, by four prefix lookups."""
        if tile.row_hi > self.n_rows or tile.col_hi > self.n_cols:
            raise BoundsError(
                f"{tile} outside {self.n_rows}x{self.n_cols} matrix"
            )
        p = self.prefix
        return int(
            p[tile.row_hi, tile.col_hi]
            - p[tile.row_lo - 1, tile.col_hi]
            - p[tile.row_hi, tile.col_lo - 1]
            + p[tile.row_lo - 1, tile.col_lo - 1]
        )

    def transpose(self) -> BinaryMatrix:
        return BinaryMatrix(self.values.T)

    def to_dense_text(self) -> str:
        """Serialise to the dense '0'/'1'-lines format."""
        digits = self.values + ord("0")
        return "\n".join(row.tobytes().decode("ascii") for row in digits.astype(np.uint8)) + "\n"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and bool((self.values == other.values).all())

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.n_rows}x{self.n_cols}, {self.total_ones} ones)"


def parse_dense(text: str) -> BinaryMatrix:
    """Parse the dense format: one '0'/'1' string per row.

    Empty lines are ignored; every non-empty line must have the same length
    and contain only '0' and '1'.
    """
    rows: list[np.ndarray] = []
    width: int | None = None
    first_line = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line:
            continue
        stripped = set(line) - {"0", "1"}
        if stripped:
            raise FormatError(
                f"illegal character {min(stripped)!r} in dense matrix", line=lineno
            )
        if width is None:
            width = len(line)
            first_line = lineno
        elif len(line) != width:
            raise FormatError(
                f"ragged line: expected {width} characters as on line "
                f"{first_line}, got {len(line)}",
                line=lineno,
            )
        rows.append(np.frombuffer(line.encode("ascii"), dtype=np.uint8) - ord("0"))
    if not rows:
        raise FormatError("empty input: no matrix rows found")
    return BinaryMatrix(np.vstack(rows))


def parse_sparse(text: str, n_cols: int | None = None) -> BinaryMatrix:
    """Parse the sparse format: row r lists the 1-based column indices of its
    1s, whitespace-separated; an empty line is an empty row.

    Duplicate indices collapse to a single 1. When `n_cols` is absent the
    column count is the maximum index seen.
    """
    if n_cols is not None and n_cols < 1:
        raise ValueError(f"n_cols must be positive, got {n_cols}")
    raw = text.split("\n")
    if raw and raw[-1] == "":
        raw.pop()  # trailing newline, not an empty row
    if not raw:
        raise FormatError("empty input: no rows found")
    rows: list[list[int]] = []
    max_col = 0
    for lineno, line in enumerate(raw, start=1):
        indices = []
        for tok in line.split():
            try:
                j = int(tok)
            except ValueError:
                raise FormatError(
                    f"non-integer column index {tok!r}", line=lineno
                ) from None
            if j < 1:
                raise FormatError(f"column index {j} is below 1", line=lineno)
            if n_cols is not None and j > n_cols:
                raise FormatError(
                    f"column index {j} exceeds declared column count {n_cols}",
                    line=lineno,
                )
            indices.append(j)
            if j > max_col:
                max_col = j
        rows.append(indices)
    width = n_cols if n_cols is not None else max_col
    if width == 0:
        raise FormatError("cannot infer a column count from input with no indices")
    vals = np.zeros((len(rows), width), dtype=np.uint8)
    for i, indices in enumerate(rows):
        for j in indices:
            vals[i, j - 1] = 1
    return BinaryMatrix(vals)
