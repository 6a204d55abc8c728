"""Optimal-subtile search for one parent node of a tile tree.

Enumerates column windows (c, d), keeps the per-row count vectors up to
date incrementally, and scans each window twice: once as-is for a subtile
denser than the parent, once with 1s and 0s exchanged for a sparser one.
The better of the two, over all windows, is the optimal subtile; the
description-length penalty is constant per parent, so minimising the
window cost minimises the whole tree length.

The window enumeration runs over the shorter side of the parent (the
rectangle is transposed first when it has more columns than rows), which
bounds one call by rows x cols x min(rows, cols).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .encoding import scaled_entropy, tile_description_length
from .errors import BoundsError
from .matrix import BinaryMatrix
from .scan import CountVectors, scan
from .tiletree import Tile, TileTree

MIN_IMPROVEMENT = 1e-9  # bits; "strictly better" must clear this margin

MODES = ("overlap", "disjoint")


@dataclass(frozen=True)
class SubtileSearchResult:
    """Best admissible subtile with its total-length change, or absence."""

    tile: Tile | None
    delta: float | None
    polarity: str | None  # "dense" | "sparse"

    @property
    def found(self) -> bool:
        return self.tile is not None


NO_TILE = SubtileSearchResult(None, None, None)


def column_window_counts(
    mask: np.ndarray,
    matrix: BinaryMatrix,
    parent: Tile,
    col_lo: int,
    col_hi: int,
) -> CountVectors:
    """Per-row 1/0 counts over the window [col_lo, col_hi], mask-restricted.

    `mask` is the parent's claim mask; cells claimed by earlier tiles
    contribute to neither count. Columns are absolute 1-based indices.
    Extending a window by one column therefore costs one single-column call.
    """
    if not parent.col_lo <= col_lo <= col_hi <= parent.col_hi:
        raise BoundsError(
            f"window ({col_lo}, {col_hi}) outside parent columns "
            f"{parent.col_lo}..{parent.col_hi}"
        )
    vals = matrix.values[parent.row_slice, col_lo - 1 : col_hi]
    sub = mask[:, col_lo - parent.col_lo : col_hi - parent.col_lo + 1]
    pos = ((vals != 0) & sub).sum(axis=1)
    neg = ((vals == 0) & sub).sum(axis=1)
    return CountVectors(pos, neg)


def disjoint_row_segments(
    parent: Tile,
    siblings: Sequence[Tile],
    col_lo: int,
    col_hi: int,
) -> list[tuple[int, int]]:
    """Maximal row intervals of `parent` whose rows avoid every sibling
    whose column span intersects [col_lo, col_hi].

    A candidate confined to one returned segment can never geometrically
    intersect an existing sibling, which is exactly the disjoint-mode rule.
    Rows are absolute 1-based; the list may be empty.
    """
    blocked = np.zeros(parent.n_rows, dtype=bool)
    for sib in siblings:
        if sib.col_lo <= col_hi and sib.col_hi >= col_lo:
            blocked[sib.row_lo - parent.row_lo : sib.row_hi - parent.row_lo + 1] = True
    segments = []
    i = 0
    n = parent.n_rows
    while i < n:
        if blocked[i]:
            i += 1
            continue
        start = i
        while i < n and not blocked[i]:
            i += 1
        segments.append((parent.row_lo + start, parent.row_lo + i - 1))
    return segments


def find_tile(
    matrix: BinaryMatrix,
    tree: TileTree,
    node: int,
    mode: str = "overlap",
    *,
    threads: int = 1,
    engine: str = "auto",
) -> SubtileSearchResult:
    """Globally optimal subtile of `node`, if it strictly improves the tree.

    Scores every admissible subtile under `mode` and returns one minimising
    the total encoded length after insertion, provided the change clears
    the strict-improvement margin; otherwise absence. Ties break by the
    lexicographic order (delta, c, d, a, b, polarity), so the result is
    identical for any `threads`.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    if engine not in ("auto", "kernel", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    use_kernel = engine == "kernel" or (engine == "auto" and _kernels.NUMBA_AVAILABLE)

    parent = tree.tile(node)
    o, z = tree.counts(node)
    if o + z == 0:
        return NO_TILE  # fully claimed parent: nothing left to explain

    mask = tree.claim_mask(node)
    vals = matrix.values[parent.row_slice, parent.col_slice]
    ones_cells = ((vals != 0) & mask).astype(np.uint8)
    zero_cells = ((vals == 0) & mask).astype(np.uint8)
    sib_tiles = [tree.tile(child) for child in tree.children(node)]
    siblings = np.array(
        [
            [
                t.row_lo - parent.row_lo,
                t.row_hi - parent.row_lo,
                t.col_lo - parent.col_lo,
                t.col_hi - parent.col_lo,
            ]
            for t in sib_tiles
        ],
        dtype=np.int64,
    ).reshape(-1, 4)

    transposed = parent.n_cols > parent.n_rows
    if transposed:
        ones_cells = np.ascontiguousarray(ones_cells.T)
        zero_cells = np.ascontiguousarray(zero_cells.T)
        siblings = siblings[:, (2, 3, 0, 1)].copy()

    n_cols = ones_cells.shape[1]
    disjoint = mode == "disjoint"
    search = _search_chunk_kernel if use_kernel else _search_chunk_python
    chunks = _chunk_ranges(n_cols, threads)
    if len(chunks) == 1:
        results = [search(ones_cells, zero_cells, o, z, siblings, disjoint, *chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(
                pool.map(
                    lambda span: search(
                        ones_cells, zero_cells, o, z, siblings, disjoint, *span
                    ),
                    chunks,
                )
            )

    best = None
    for cand in results:
        if cand is None:
            continue
        if best is None or cand < best:
            best = cand
    if best is None:
        return NO_TILE

    cost, c, d, a, b, pol = best[0], best[1], best[2], best[3], best[4], best[5]
    if transposed:
        a, b, c, d = c, d, a, b
    tile = Tile(
        parent.row_lo + a,
        parent.row_lo + b,
        parent.col_lo + c,
        parent.col_lo + d,
    )
    delta = cost - scaled_entropy(o, z) + tile_description_length(tile, parent)
    if delta < -MIN_IMPROVEMENT:
        return SubtileSearchResult(tile, delta, "dense" if pol == 0 else "sparse")
    return NO_TILE


def _chunk_ranges(n_cols: int, threads: int) -> list[tuple[int, int]]:
    """Contiguous [c_lo, c_hi] spans covering 0..n_cols-1."""
    parts = min(threads, n_cols)
    bounds = np.linspace(0, n_cols, parts + 1, dtype=np.int64)
    return [
        (int(bounds[i]), int(bounds[i + 1] - 1))
        for i in range(parts)
        if bounds[i + 1] > bounds[i]
    ]


def _search_chunk_kernel(ones_cells, zero_cells, o, z, siblings, disjoint, c_lo, c_hi):
    found, cost, a, b, c, d, pol = _kernels.find_best_subtile(
        ones_cells, zero_cells, o, z, siblings, disjoint, c_lo, c_hi
    )
    if not found:
        return None
    # reduction key mirrors the kernel's lexicographic tie-breaking
    return (float(cost), int(c), int(d), int(a), int(b), int(pol))


def _search_chunk_python(ones_cells, zero_cells, o, z, siblings, disjoint, c_lo, c_hi):
    """Window loop on top of the public scan; the kernel's slow twin."""
    n_rows, n_cols = ones_cells.shape
    sib_tiles = [
        Tile(int(r0) + 1, int(r1) + 1, int(c0) + 1, int(c1) + 1)
        for r0, r1, c0, c1 in siblings
    ]
    local_parent = Tile(1, n_rows, 1, n_cols)
    best = None
    for c in range(c_lo, c_hi + 1):
        pos = np.zeros(n_rows, dtype=np.int64)
        neg = np.zeros(n_rows, dtype=np.int64)
        for d in range(c, n_cols):
            pos += ones_cells[:, d]
            neg += zero_cells[:, d]
            if disjoint and sib_tiles:
                segments = disjoint_row_segments(local_parent, sib_tiles, c + 1, d + 1)
            else:
                segments = [(1, n_rows)]
            for lo, hi in segments:
                vectors = CountVectors(pos[lo - 1 : hi], neg[lo - 1 : hi])
                for swap, pol in ((False, 0), (True, 1)):
                    if swap:
                        result = scan(vectors.swapped(), z, o)
                    else:
                        result = scan(vectors, o, z)
                    if not result.found:
                        continue
                    a, b = result.interval
                    key = (
                        float(result.cost),
                        c,
                        d,
                        lo - 1 + a - 1,
                        lo - 1 + b - 1,
                        pol,
                    )
                    if best is None or key < best:
                        best = key
    return best
