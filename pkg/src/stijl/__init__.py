"""Hierarchical tile-tree mining for ordered binary matrices.

Models a 0/1 matrix as a tree of nested, possibly overlapping rectangles
whose claimed cells share one 1-frequency, selects the tree by two-part
description length, and finds each locally optimal rectangle with a
linear-time border-list scan per column window.
"""

from .encoding import (
    CountPair,
    gain,
    relative_compression,
    root_length,
    scaled_entropy,
    tile_description_length,
    tree_total_length,
)
from .errors import (
    BoundsError,
    ContainmentError,
    CountConsistencyError,
    DimensionMismatchError,
    FormatError,
    StijlError,
)
from .estimator import TileTreeMiner
from .findtile import (
    SubtileSearchResult,
    column_window_counts,
    disjoint_row_segments,
    find_tile,
)
from .matrix import BinaryMatrix, parse_dense, parse_sparse
from .miner import MinerConfig, MiningResult, StepRecord, mine, stijl_greedy, stijl_topk
from .ordering import OrderingResult, apply_permutation, spectral_order
from .render import RenderOptions, render_svg
from .scan import CountVectors, ScanResult, interval_cost, scan, tail_frequencies
from .tiletree import Tile, TileTree, deserialize

__version__ = "0.1.0"

__all__ = [
    "BinaryMatrix",
    "BoundsError",
    "ContainmentError",
    "CountConsistencyError",
    "CountPair",
    "CountVectors",
    "DimensionMismatchError",
    "FormatError",
    "MinerConfig",
    "MiningResult",
    "OrderingResult",
    "RenderOptions",
    "ScanResult",
    "StepRecord",
    "StijlError",
    "SubtileSearchResult",
    "Tile",
    "TileTree",
    "TileTreeMiner",
    "apply_permutation",
    "column_window_counts",
    "deserialize",
    "disjoint_row_segments",
    "find_tile",
    "gain",
    "interval_cost",
    "mine",
    "parse_dense",
    "parse_sparse",
    "relative_compression",
    "render_svg",
    "root_length",
    "scaled_entropy",
    "scan",
    "spectral_order",
    "stijl_greedy",
    "stijl_topk",
    "tail_frequencies",
    "tile_description_length",
    "tree_total_length",
]
