"""Scikit-learn style front door for the miner."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array

from .matrix import BinaryMatrix
from .miner import MinerConfig, mine
from .ordering import apply_permutation, spectral_order


class TileTreeMiner(BaseEstimator):
    """Unsupervised hierarchical tiling of an ordered binary matrix.

    Fits a tree of rectangles over a 0/1 array by greedily inserting, one
    at a time, the subtile that shrinks the two-part description length the
    most, and stopping when nothing helps. The fitted tree is a readable
    summary: each tile is a contiguous block whose claimed cells share one
    1-frequency, and children refine their parents.

    Parameters
    ----------
    mode : "overlap" or "disjoint"
        Whether a new child may geometrically intersect earlier siblings.
    strategy : "greedy" or "topk"
        Depth-first refinement, or globally best insertion per round.
    max_tiles : int or None
        Budget of added tiles (root excluded); None mines to convergence.
    min_gain : float
        Bits a single insertion must save to be accepted.
    order : "none" or "spectral"
        Optionally permute rows/columns by the dominant singular vectors
        before mining (for data without a meaningful order).
    threads : int
        Worker threads for the per-parent subtile search.

    Attributes
    ----------
    tree_ : TileTree
    total_bits_, baseline_bits_, l_percent_ : float
    n_tiles_ : int
    row_order_, col_order_ : ndarray or None
        Permutations applied when order="spectral" (old index -> new
        position), else None.

    Examples
    --------
    >>> import numpy as np
    >>> rng = np.random.default_rng(0)
    >>> data = (rng.random((40, 30)) < 0.05).astype(int)
    >>> data[5:20, 4:14] = (rng.random((15, 10)) < 0.9).astype(int)
    >>> model = TileTreeMiner().fit(data)
    >>> model.n_tiles_ >= 2
    True
    """

    def __init__(
        self,
        mode: str = "overlap",
        strategy: str = "greedy",
        max_tiles: int | None = None,
        min_gain: float = 1e-9,
        order: str = "none",
        threads: int = 1,
    ):
        self.mode = mode
        self.strategy = strategy
        self.max_tiles = max_tiles
        self.min_gain = min_gain
        self.order = order
        self.threads = threads

    def fit(self, X, y=None):
        """Mine a tile tree for the binary matrix X."""
        if self.order not in ("none", "spectral"):
            raise ValueError(f"order must be 'none' or 'spectral', got {self.order!r}")
        X = check_array(X, dtype=None, ensure_2d=True)
        matrix = BinaryMatrix(X)
        self.row_order_ = None
        self.col_order_ = None
        if self.order == "spectral":
            ordering = spectral_order(matrix)
            matrix = apply_permutation(matrix, ordering)
            self.row_order_ = ordering.row_perm
            self.col_order_ = ordering.col_perm
        cfg = MinerConfig(
            mode=self.mode,
            strategy=self.strategy,
            max_tiles=self.max_tiles,
            min_gain=self.min_gain,
            threads=self.threads,
        )
        result = mine(matrix, cfg)
        self.result_ = result
        self.tree_ = result.tree
        self.total_bits_ = result.total_bits
        self.baseline_bits_ = result.baseline_bits
        self.l_percent_ = result.l_percent
        self.n_tiles_ = len(result.tree)
        return self

    def density_map(self) -> np.ndarray:
        """Per-cell 1-frequency of the owning tile: the model's view of the
        data (in the mined row/column order)."""
        tree = self.tree_
        out = np.zeros((tree.n_rows, tree.n_cols))
        claimed = np.zeros_like(out, dtype=bool)
        for node in tree.post_order():
            tile = tree.tile(node)
            ones, zeroes = tree.counts(node)
            freq = ones / (ones + zeroes) if ones + zeroes else 0.0
            region = (tile.row_slice, tile.col_slice)
            fresh = ~claimed[region]
            block = out[region]
            block[fresh] = freq
            out[region] = block
            claimed[region] = True
        return out
