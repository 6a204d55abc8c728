"""Tile trees: ordered children, first-come-first-serve cell claiming,
cached per-node counts, and a line-based file format.

Cells are assigned to tiles by post-order position: an entry of a tile
belongs to it unless some tile with a smaller post-order id already covers
that entry. Children may overlap earlier siblings; the claiming rule keeps
the assignment unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Sequence

import numpy as np

from .encoding import CountPair
from .errors import ContainmentError, DimensionMismatchError, FormatError

if TYPE_CHECKING:
    from .matrix import BinaryMatrix

TREE_FORMAT_NAME = "stijl-tree"
TREE_FORMAT_VERSION = "v1"


@dataclass(frozen=True)
class Tile:
    """Inclusive rectangle (row_lo..row_hi) x (col_lo..col_hi), 1-based."""

    row_lo: int
    row_hi: int
    col_lo: int
    col_hi: int

    def __post_init__(self):
        if not 1 <= self.row_lo <= self.row_hi:
            raise ValueError(f"invalid row span {self.row_lo}..{self.row_hi}")
        if not 1 <= self.col_lo <= self.col_hi:
            raise ValueError(f"invalid column span {self.col_lo}..{self.col_hi}")

    @property
    def n_rows(self) -> int:
        return self.row_hi - self.row_lo + 1

    @property
    def n_cols(self) -> int:
        return self.col_hi - self.col_lo + 1

    @property
    def area(self) -> int:
        return self.n_rows * self.n_cols

    @property
    def row_slice(self) -> slice:
        """0-based numpy slice over this tile's rows."""
        return slice(self.row_lo - 1, self.row_hi)

    @property
    def col_slice(self) -> slice:
        return slice(self.col_lo - 1, self.col_hi)

    def contains(self, other: Tile) -> bool:
        return (
            self.row_lo <= other.row_lo
            and other.row_hi <= self.row_hi
            and self.col_lo <= other.col_lo
            and other.col_hi <= self.col_hi
        )

    def contains_cell(self, i: int, j: int) -> bool:
        return self.row_lo <= i <= self.row_hi and self.col_lo <= j <= self.col_hi

    def intersects(self, other: Tile) -> bool:
        return (
            self.row_lo <= other.row_hi
            and other.row_lo <= self.row_hi
            and self.col_lo <= other.col_hi
            and other.col_lo <= self.col_hi
        )

    def intersection(self, other: Tile) -> Tile | None:
        if not self.intersects(other):
            return None
        return Tile(
            max(self.row_lo, other.row_lo),
            min(self.row_hi, other.row_hi),
            max(self.col_lo, other.col_lo),
            min(self.col_hi, other.col_hi),
        )

    def transposed(self) -> Tile:
        return Tile(self.col_lo, self.col_hi, self.row_lo, self.row_hi)


class TileTree:
    """Ordered tree of tiles rooted at the full-data tile.

    Node handles are stable integers assigned at insertion (the root is
    handle 0). Post-order ids shift on every insertion, so they are
    recomputed on demand and never stored.
    """

    ROOT = 0

    def __init__(self, n_rows: int, n_cols: int, root_counts: CountPair):
        if n_rows < 1 or n_cols < 1:
            raise ValueError(f"invalid tree dimensions {n_rows}x{n_cols}")
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self._tiles: list[Tile] = [Tile(1, self.n_rows, 1, self.n_cols)]
        self._parents: list[int | None] = [None]
        self._children: list[list[int]] = [[]]
        self._ones: list[int] = [int(root_counts.ones)]
        self._zeroes: list[int] = [int(root_counts.zeroes)]

    @classmethod
    def from_matrix(cls, matrix: BinaryMatrix) -> TileTree:
        """Root-only tree whose root claims every cell of `matrix`."""
        ones = matrix.total_ones
        zeroes = matrix.n_rows * matrix.n_cols - ones
        return cls(matrix.n_rows, matrix.n_cols, CountPair(ones, zeroes))

    def __len__(self) -> int:
        return len(self._tiles)

    def nodes(self) -> Iterator[int]:
        return iter(range(len(self._tiles)))

    def tile(self, node: int) -> Tile:
        return self._tiles[node]

    def parent(self, node: int) -> int | None:
        return self._parents[node]

    def children(self, node: int) -> tuple[int, ...]:
        return tuple(self._children[node])

    def counts(self, node: int) -> CountPair:
        return CountPair(self._ones[node], self._zeroes[node])

    def post_order(self) -> list[int]:
        """Node handles with children before parents, siblings in insertion
        order, and each sibling's whole subtree before the next sibling."""
        out: list[int] = []
        stack: list[tuple[int, int]] = [(self.ROOT, 0)]
        while stack:
            node, idx = stack[-1]
            kids = self._children[node]
            if idx < len(kids):
                stack[-1] = (node, idx + 1)
                stack.append((kids[idx], 0))
            else:
                stack.pop()
                out.append(node)
        return out

    def post_order_ids(self) -> dict[int, int]:
        """Map node handle -> 1-based post-order position."""
        return {h: k for k, h in enumerate(self.post_order(), start=1)}

    def claim_mask(self, node: int) -> np.ndarray:
        """Boolean mask over `node`'s rectangle, True on cells it claims.

        A cell is claimed unless some tile with a smaller post-order id
        (a descendant, or an earlier-ordered tile elsewhere in the tree)
        covers it. Pure geometry; no matrix required.
        """
        target = self._tiles[node]
        mask = np.ones((target.n_rows, target.n_cols), dtype=bool)
        for h in self.post_order():
            if h == node:
                break
            inter = target.intersection(self._tiles[h])
            if inter is not None:
                mask[
                    inter.row_lo - target.row_lo : inter.row_hi - target.row_lo + 1,
                    inter.col_lo - target.col_lo : inter.col_hi - target.col_lo + 1,
                ] = False
        return mask

    def cells_counts(self, matrix: BinaryMatrix, node: int) -> CountPair:
        """From-scratch 1/0 counts over the cells `node` claims."""
        self._check_matrix(matrix)
        t = self._tiles[node]
        mask = self.claim_mask(node)
        ones = int(matrix.values[t.row_slice, t.col_slice][mask].sum())
        return CountPair(ones, int(mask.sum()) - ones)

    def add_child(self, matrix: BinaryMatrix, parent: int, tile: Tile) -> tuple[int, CountPair]:
        """Append `tile` as the last child of `parent`.

        The new child claims exactly the parent's unclaimed cells inside its
        rectangle, so only the parent's cached counts change; every other
        node keeps its claims. Returns the new handle and claimed counts.
        """
        self._check_matrix(matrix)
        ptile = self._tiles[parent]
        if not ptile.contains(tile):
            raise ContainmentError(f"{tile} is not contained in parent {ptile}")
        sub = self.claim_mask(parent)[
            tile.row_lo - ptile.row_lo : tile.row_hi - ptile.row_lo + 1,
            tile.col_lo - ptile.col_lo : tile.col_hi - ptile.col_lo + 1,
        ]
        ones = int(matrix.values[tile.row_slice, tile.col_slice][sub].sum())
        zeroes = int(sub.sum()) - ones
        node = len(self._tiles)
        self._tiles.append(tile)
        self._parents.append(parent)
        self._children.append([])
        self._children[parent].append(node)
        self._ones.append(ones)
        self._zeroes.append(zeroes)
        self._ones[parent] -= ones
        self._zeroes[parent] -= zeroes
        return node, CountPair(ones, zeroes)

    def transposed(self) -> TileTree:
        """The same tree over the transposed data; handles are preserved
        (a parent's handle always precedes its children's)."""
        out = TileTree(self.n_cols, self.n_rows, self.counts(self.ROOT))
        for node in range(1, len(self._tiles)):
            parent = self._parents[node]
            out._tiles.append(self._tiles[node].transposed())
            out._parents.append(parent)
            out._children.append([])
            out._children[parent].append(node)
            out._ones.append(self._ones[node])
            out._zeroes.append(self._zeroes[node])
        return out

    def serialize(self) -> str:
        """One line per tile in post-order; see `deserialize` for the format."""
        order = self.post_order()
        ids = {h: k for k, h in enumerate(order, start=1)}
        lines = [
            f"{TREE_FORMAT_NAME} {TREE_FORMAT_VERSION} {self.n_rows} {self.n_cols}"
        ]
        for h in order:
            t = self._tiles[h]
            parent = self._parents[h]
            pid = 0 if parent is None else ids[parent]
            lines.append(
                f"{ids[h]} {pid} {t.row_lo} {t.row_hi} {t.col_lo} {t.col_hi} "
                f"{self._ones[h]} {self._zeroes[h]}"
            )
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TileTree):
            return NotImplemented
        return self.serialize() == other.serialize()

    def __repr__(self) -> str:
        return f"TileTree({self.n_rows}x{self.n_cols}, {len(self)} tiles)"

    def _check_matrix(self, matrix) -> None:
        if (matrix.n_rows, matrix.n_cols) != (self.n_rows, self.n_cols):
            raise DimensionMismatchError(
                f"tree is {self.n_rows}x{self.n_cols} but matrix is "
                f"{matrix.n_rows}x{matrix.n_cols}"
            )


def deserialize(text: str) -> TileTree:
    """Parse the tree file format and validate every structural invariant.

    Format: a header line `stijl-tree v1 <n_rows> <n_cols>`, then one line
    per tile in post-order, `id parent_id row_lo row_hi col_lo col_hi ones
    zeroes` with 1-based inclusive coordinates. Ids are the post-order
    positions 1..K; the root has parent_id 0 and, being last in post-order,
    must be the final line.
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise FormatError("empty input: missing header line")
    header = lines[0].split()
    if len(header) != 4 or header[0] != TREE_FORMAT_NAME or header[1] != TREE_FORMAT_VERSION:
        raise FormatError(
            f"bad header {lines[0]!r}; expected "
            f"'{TREE_FORMAT_NAME} {TREE_FORMAT_VERSION} <n_rows> <n_cols>'",
            line=1,
        )
    try:
        n_rows, n_cols = int(header[2]), int(header[3])
    except ValueError:
        raise FormatError(f"non-integer dimensions in header {lines[0]!r}", line=1) from None
    if n_rows < 1 or n_cols < 1:
        raise FormatError(f"invalid dimensions {n_rows}x{n_cols}", line=1)

    records: list[tuple[int, ...]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            raise FormatError("blank line inside tree file", line=lineno)
        toks = line.split()
        if len(toks) != 8:
            raise FormatError(f"expected 8 fields, got {len(toks)}", line=lineno)
        try:
            rec = tuple(int(tok) for tok in toks)
        except ValueError:
            raise FormatError(f"non-integer field in {line!r}", line=lineno) from None
        records.append(rec)
    if not records:
        raise FormatError("no tiles in tree file")

    k = len(records)
    for pos, rec in enumerate(records, start=1):
        if rec[0] != pos:
            raise FormatError(
                f"tile ids must be the post-order positions 1..{k}; "
                f"got id {rec[0]} on the {pos}th tile line"
            )
    for pos, rec in enumerate(records, start=1):
        pid = rec[1]
        if pid == 0:
            if pos != k:
                raise FormatError(
                    f"tile {pos} has parent_id 0 but only the last line may be the root"
                )
        elif not pos < pid <= k:
            raise FormatError(
                f"tile {pos} has parent_id {pid}; parents follow their "
                f"children in post-order, so need {pos} < parent_id <= {k}"
            )
    root = records[-1]
    if (root[2], root[3], root[4], root[5]) != (1, n_rows, 1, n_cols):
        raise FormatError(
            f"root tile ({root[2]},{root[3]})x({root[4]},{root[5]}) does not "
            f"cover the whole {n_rows}x{n_cols} data"
        )

    tiles: dict[int, Tile] = {}
    for rec in records:
        try:
            tiles[rec[0]] = Tile(rec[2], rec[3], rec[4], rec[5])
        except ValueError as exc:
            raise FormatError(f"tile {rec[0]}: {exc}") from None
        if rec[6] < 0 or rec[7] < 0:
            raise FormatError(f"tile {rec[0]}: negative counts ({rec[6]}, {rec[7]})")
    for rec in records[:-1]:
        if not tiles[rec[1]].contains(tiles[rec[0]]):
            raise FormatError(
                f"tile {rec[0]} is not contained in its parent {rec[1]}"
            )

    if sum(rec[6] + rec[7] for rec in records) != n_rows * n_cols:
        raise FormatError(
            "claimed counts do not add up to the matrix area "
            f"{n_rows * n_cols}"
        )
    # Per-node claimed-cell totals are pure geometry: replay the claims.
    claimed = np.zeros((n_rows, n_cols), dtype=bool)
    for rec in records:
        t = tiles[rec[0]]
        region = (t.row_slice, t.col_slice)
        fresh = int((~claimed[region]).sum())
        if rec[6] + rec[7] != fresh:
            raise FormatError(
                f"tile {rec[0]} reports {rec[6] + rec[7]} claimed cells but "
                f"the claim replay gives {fresh}"
            )
        claimed[region] = True

    tree = TileTree(n_rows, n_cols, CountPair(root[6], root[7]))
    handle_of = {k: TileTree.ROOT}
    # Parents follow their children in post-order, so walking ids downward
    # meets every parent before its children; children lists are reversed
    # afterwards to restore sibling (insertion) order.
    for rec in reversed(records[:-1]):
        node = len(tree._tiles)
        tree._tiles.append(tiles[rec[0]])
        tree._parents.append(handle_of[rec[1]])
        tree._children.append([])
        tree._children[handle_of[rec[1]]].append(node)
        tree._ones.append(rec[6])
        tree._zeroes.append(rec[7])
        handle_of[rec[0]] = node
    for kids in tree._children:
        kids.reverse()
    return tree
