"""Two-part description-length cost model for tile trees.

Everything is measured in bits (logarithms base 2). The data inside each
tile is coded with an optimal prefix code, whose length is the scaled
entropy of the tile's claimed 1/0 counts; each non-root tile additionally
pays two tree-structure bits plus five coordinates bounded by its parent's
extent. The root is free: the data dimensions are constant over all models
and cancel when comparing them.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from .errors import CountConsistencyError, DimensionMismatchError

if TYPE_CHECKING:
    from .matrix import BinaryMatrix
    from .tiletree import Tile, TileTree


class CountPair(NamedTuple):
    """How many 1s and 0s a tile owns among the cells it claims."""

    ones: int
    zeroes: int


def scaled_entropy(ones: float, zeroes: float) -> float:
    """Optimal prefix-code length, in bits, for `ones` 1s and `zeroes` 0s.

    This is (ones + zeroes) times the binary entropy of the 1-frequency,
    with the conventions 0*log2(0) = 0 and H(0, 0) = 0.
    """
    if ones < 0 or zeroes < 0:
        raise ValueError(f"counts must be nonnegative, got ({ones}, {zeroes})")
    total = ones + zeroes
    if total == 0:
        return 0.0
    bits = 0.0
    if ones:
        bits -= ones * math.log2(ones / total)
    if zeroes:
        bits -= zeroes * math.log2(zeroes / total)
    return bits


def tile_description_length(child: Tile, parent: Tile) -> float:
    """Bits needed to store `child` as one more child of `parent`.

    Two tree-structure bits plus five coordinates (four end points and the
    1-count), each bounded by the parent's extent. Depends only on the
    parent's extent, never on the child's own.
    """
    from .errors import ContainmentError

    if not parent.contains(child):
        raise ContainmentError(f"{child} is not contained in parent {parent}")
    return 2.0 + 5.0 * math.log2(parent.n_rows) + 5.0 * math.log2(parent.n_cols)


def root_length() -> float:
    """Description length of the root tile: always 0 bits."""
    return 0.0


def gain(
    child_counts: CountPair,
    parent_counts: CountPair,
    child: Tile,
    parent: Tile,
) -> float:
    """Exact change in total encoded length from appending one subtile.

    `child_counts` = (u, v) are the cells the new child would claim,
    `parent_counts` = (o, z) are the parent's claimed cells before the
    insertion. Negative means the tree got cheaper.
    """
    u, v = child_counts
    o, z = parent_counts
    if u > o or v > z:
        raise CountConsistencyError(
            f"child claims ({u}, {v}) but parent only has ({o}, {z})"
        )
    return (
        scaled_entropy(u, v)
        + scaled_entropy(o - u, z - v)
        - scaled_entropy(o, z)
        + tile_description_length(child, parent)
    )


def tree_total_length(matrix: BinaryMatrix, tree: TileTree) -> float:
    """Total encoded size of data plus tree, recomputed from scratch.

    Walks the claim assignment over the full matrix rather than trusting
    cached counts; the miner tracks the same quantity through per-step
    gains.
    """
    if (tree.n_rows, tree.n_cols) != (matrix.n_rows, matrix.n_cols):
        raise DimensionMismatchError(
            f"tree is {tree.n_rows}x{tree.n_cols} but matrix is "
            f"{matrix.n_rows}x{matrix.n_cols}"
        )
    claimed = np.zeros((matrix.n_rows, matrix.n_cols), dtype=bool)
    total = 0.0
    for node in tree.post_order():
        t = tree.tile(node)
        region = (t.row_slice, t.col_slice)
        fresh = ~claimed[region]
        ones = int(matrix.values[region][fresh].sum())
        zeroes = int(fresh.sum()) - ones
        claimed[region] = True
        parent = tree.parent(node)
        if parent is None:
            total += root_length()
        else:
            total += tile_description_length(t, tree.tile(parent))
        total += scaled_entropy(ones, zeroes)
    return total


def relative_compression(matrix: BinaryMatrix, tree: TileTree) -> float:
    """Encoded size of (data, tree) relative to the root-only tree, in percent.

    100 when the root-only baseline is already 0 bits (constant data).
    """
    ones = matrix.total_ones
    baseline = scaled_entropy(ones, matrix.n_rows * matrix.n_cols - ones)
    if baseline == 0.0:
        return 100.0
    return 100.0 * tree_total_length(matrix, tree) / baseline
