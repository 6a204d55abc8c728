"""Shared builders for randomised tests."""

from __future__ import annotations

import numpy as np
import pytest

from stijl.matrix import BinaryMatrix
from stijl.tiletree import Tile, TileTree


def random_matrix(rng: np.random.Generator, n_rows: int, n_cols: int, density: float | None = None) -> BinaryMatrix:
    if density is None:
        density = float(rng.uniform(0.05, 0.95))
    return BinaryMatrix((rng.random((n_rows, n_cols)) < density).astype(np.uint8))


def random_subtile(rng: np.random.Generator, tile: Tile) -> Tile:
    row_lo = int(rng.integers(tile.row_lo, tile.row_hi + 1))
    row_hi = int(rng.integers(row_lo, tile.row_hi + 1))
    col_lo = int(rng.integers(tile.col_lo, tile.col_hi + 1))
    col_hi = int(rng.integers(col_lo, tile.col_hi + 1))
    return Tile(row_lo, row_hi, col_lo, col_hi)


def random_tree(rng: np.random.Generator, matrix: BinaryMatrix, max_extra: int = 4) -> TileTree:
    """Tree grown by inserting random subtiles under random nodes, so sibling
    overlap and nesting both occur."""
    tree = TileTree.from_matrix(matrix)
    for _ in range(int(rng.integers(0, max_extra + 1))):
        node = int(rng.integers(0, len(tree)))
        tree.add_child(matrix, node, random_subtile(rng, tree.tile(node)))
    return tree


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
