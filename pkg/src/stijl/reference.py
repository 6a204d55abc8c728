"""Independent brute-force oracles and the planted-rectangle generator.

Everything here deliberately re-implements its counterpart from first
principles: quadratic interval minimisation instead of border lists,
per-cell first-owner lookup instead of replayed claim masks, exhaustive
subtile enumeration instead of the windowed scan. These are the anchors
for the derived expected values in the test suite and the baseline for
the speedup benchmark; they share no code with the fast paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, CountConsistencyError, FormatError
from .findtile import MIN_IMPROVEMENT, NO_TILE, SubtileSearchResult
from .matrix import BinaryMatrix
from .scan import ABSENT, CountVectors, ScanResult
from .tiletree import Tile, TileTree


def _entropy(ones: float, zeroes: float) -> float:
    total = ones + zeroes
    if total == 0:
        return 0.0
    bits = 0.0
    if ones:
        bits -= ones * math.log2(ones / total)
    if zeroes:
        bits -= zeroes * math.log2(zeroes / total)
    return bits


def _entropy_arrays(ones: np.ndarray, zeroes: np.ndarray) -> np.ndarray:
    total = ones + zeroes
    safe = np.where(total > 0, total, 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(ones > 0, ones * np.log2(ones / safe), 0.0) - np.where(
            zeroes > 0, zeroes * np.log2(zeroes / safe), 0.0
        )
    return h


def naive_scan(v: CountVectors, parent_ones: int, parent_zeroes: int) -> ScanResult:
    """Exhaustive quadratic minimisation over all intervals.

    Same strict density constraint and tie-breaking discipline as the
    linear scan: right endpoint ascending, left endpoint descending from
    it, keeping only strictly smaller costs.
    """
    m = v.length
    o, z = int(parent_ones), int(parent_zeroes)
    pos = [int(x) for x in v.pos]
    neg = [int(x) for x in v.neg]
    if sum(pos) > o or sum(neg) > z:
        raise CountConsistencyError(
            f"vector totals ({sum(pos)}, {sum(neg)}) exceed parent totals ({o}, {z})"
        )
    best = None
    best_cost = math.inf
    oz = o + z
    for b in range(1, m + 1):
        u = 0
        w = 0
        for a in range(b, 0, -1):
            u += pos[a - 1]
            w += neg[a - 1]
            if u * oz > o * (u + w):
                cost = _entropy(u, w) + _entropy(o - u, z - w)
                if cost < best_cost:
                    best_cost = cost
                    best = (a, b)
    if best is None:
        return ABSENT
    return ScanResult(best, best_cost)


def naive_claim_owner(tree: TileTree) -> np.ndarray:
    """Owner of every cell, as 0-based post-order positions.

    Per-cell first-come-first-serve lookup: walk the post-order until the
    first tile covering the cell. Quadratic-ish and proud of it.
    """
    order = tree.post_order()
    tiles = [tree.tile(node) for node in order]
    owner = np.empty((tree.n_rows, tree.n_cols), dtype=np.int64)
    for i in range(1, tree.n_rows + 1):
        for j in range(1, tree.n_cols + 1):
            for pos, tile in enumerate(tiles):
                if tile.contains_cell(i, j):
                    owner[i - 1, j - 1] = pos
                    break
    return owner


def naive_tree_length(matrix: BinaryMatrix, tree: TileTree) -> float:
    """Total encoded length recomputed from the per-cell owner map."""
    order = tree.post_order()
    owner = naive_claim_owner(tree)
    total = 0.0
    for pos, node in enumerate(order):
        cells = owner == pos
        ones = int(matrix.values[cells].sum())
        zeroes = int(cells.sum()) - ones
        parent = tree.parent(node)
        if parent is not None:
            ptile = tree.tile(parent)
            total += 2.0 + 5.0 * math.log2(ptile.n_rows) + 5.0 * math.log2(ptile.n_cols)
        total += _entropy(ones, zeroes)
    return total


def naive_find_tile(
    matrix: BinaryMatrix,
    tree: TileTree,
    node: int,
    mode: str = "overlap",
) -> SubtileSearchResult:
    """Score every admissible subtile of `node`, in quadratic-squared time.

    The oracle for the windowed search, and the `--naive` benchmark
    baseline. Uses its own owner map, prefix sums, and entropy.
    """
    if mode not in ("overlap", "disjoint"):
        raise ValueError(f"mode must be 'overlap' or 'disjoint', got {mode!r}")
    parent = tree.tile(node)
    order = tree.post_order()
    position = order.index(node)
    owner = naive_claim_owner(tree)

    region = (parent.row_slice, parent.col_slice)
    mine = owner[region] == position
    ones_cells = mine & (matrix.values[region] != 0)
    zero_cells = mine & (matrix.values[region] == 0)
    o = int(ones_cells.sum())
    z = int(zero_cells.sum())
    n_rows, n_cols = parent.n_rows, parent.n_cols

    pref_ones = np.zeros((n_rows + 1, n_cols + 1), dtype=np.int64)
    pref_ones[1:, 1:] = ones_cells.cumsum(axis=0).cumsum(axis=1)
    pref_zero = np.zeros((n_rows + 1, n_cols + 1), dtype=np.int64)
    pref_zero[1:, 1:] = zero_cells.cumsum(axis=0).cumsum(axis=1)

    siblings = [tree.tile(child) for child in tree.children(node)]
    desc_bits = 2.0 + 5.0 * math.log2(n_rows) + 5.0 * math.log2(n_cols)
    base_bits = _entropy(o, z)

    highs, lows = np.tril_indices(n_rows)  # all (b-1, a-1) pairs with a <= b
    best_delta = math.inf
    best_tile = None
    for c in range(1, n_cols + 1):
        for d in range(c, n_cols + 1):
            col_ones = pref_ones[:, d] - pref_ones[:, c - 1]
            col_zero = pref_zero[:, d] - pref_zero[:, c - 1]
            u = col_ones[highs + 1] - col_ones[lows]
            w = col_zero[highs + 1] - col_zero[lows]
            cost = _entropy_arrays(u, w) + _entropy_arrays(o - u, z - w)
            delta = cost - base_bits + desc_bits
            if mode == "disjoint":
                ok = np.ones(lows.shape[0], dtype=bool)
                for sib in siblings:
                    if sib.col_lo <= parent.col_lo + d - 1 and sib.col_hi >= parent.col_lo + c - 1:
                        sib_lo = sib.row_lo - parent.row_lo
                        sib_hi = sib.row_hi - parent.row_lo
                        ok &= (highs < sib_lo) | (lows > sib_hi)
                delta = np.where(ok, delta, math.inf)
            k = int(delta.argmin())
            if delta[k] < best_delta:
                best_delta = float(delta[k])
                best_tile = Tile(
                    parent.row_lo + int(lows[k]),
                    parent.row_lo + int(highs[k]),
                    parent.col_lo + c - 1,
                    parent.col_lo + d - 1,
                )
    if best_tile is None or best_delta >= -MIN_IMPROVEMENT:
        return NO_TILE
    u = int(
        pref_ones[best_tile.row_hi - parent.row_lo + 1, best_tile.col_hi - parent.col_lo + 1]
        - pref_ones[best_tile.row_lo - parent.row_lo, best_tile.col_hi - parent.col_lo + 1]
        - pref_ones[best_tile.row_hi - parent.row_lo + 1, best_tile.col_lo - parent.col_lo]
        + pref_ones[best_tile.row_lo - parent.row_lo, best_tile.col_lo - parent.col_lo]
    )
    w = int(
        pref_zero[best_tile.row_hi - parent.row_lo + 1, best_tile.col_hi - parent.col_lo + 1]
        - pref_zero[best_tile.row_lo - parent.row_lo, best_tile.col_hi - parent.col_lo + 1]
        - pref_zero[best_tile.row_hi - parent.row_lo + 1, best_tile.col_lo - parent.col_lo]
        + pref_zero[best_tile.row_lo - parent.row_lo, best_tile.col_lo - parent.col_lo]
    )
    total = u + w
    polarity = "dense"
    if total > 0 and o + z > 0 and u * (o + z) < o * total:
        polarity = "sparse"
    return SubtileSearchResult(best_tile, best_delta, polarity)


@dataclass(frozen=True)
class PlantedLayer:
    tile: Tile
    density: float


@dataclass(frozen=True)
class PlantedSpec:
    """Layered rectangle layout; later layers overwrite earlier ones."""

    n_rows: int
    n_cols: int
    seed: int
    layers: tuple[PlantedLayer, ...]

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError(f"invalid dimensions {self.n_rows}x{self.n_cols}")
        for layer in self.layers:
            t = layer.tile
            if t.row_hi > self.n_rows or t.col_hi > self.n_cols:
                raise BoundsError(f"{t} outside {self.n_rows}x{self.n_cols} layout")
            if not 0.0 <= layer.density <= 1.0:
                raise ValueError(f"density {layer.density} outside [0, 1]")

    def density_map(self) -> np.ndarray:
        """Per-cell 1-probability after painting the layers in order."""
        dm = np.zeros((self.n_rows, self.n_cols))
        for layer in self.layers:
            t = layer.tile
            dm[t.row_slice, t.col_slice] = layer.density
        return dm


def generate_planted(spec: PlantedSpec) -> tuple[BinaryMatrix, np.ndarray]:
    """Sample each cell independently with its layered probability.

    Returns the matrix and the ground-truth density map; identical spec and
    seed give identical output.
    """
    rng = np.random.default_rng(spec.seed)
    dm = spec.density_map()
    values = (rng.random(dm.shape) < dm).astype(np.uint8)
    return BinaryMatrix(values), dm


def parse_planted_spec(text: str) -> PlantedSpec:
    """Layout file: header `dims N M seed S`, then `rect a b c d density f`."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty layout spec")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "dims" or header[3] != "seed":
        raise FormatError(
            f"bad header {lines[0]!r}; expected 'dims N M seed S'", line=1
        )
    try:
        n_rows, n_cols, seed = int(header[1]), int(header[2]), int(header[4])
    except ValueError:
        raise FormatError(f"non-integer field in header {lines[0]!r}", line=1) from None
    layers = []
    for lineno, line in enumerate(lines[1:], start=2):
        toks = line.split()
        if len(toks) != 7 or toks[0] != "rect" or toks[5] != "density":
            raise FormatError(
                f"bad layer {line!r}; expected 'rect a b c d density f'", line=lineno
            )
        try:
            a, b, c, d = (int(t) for t in toks[1:5])
            density = float(toks[6])
        except ValueError:
            raise FormatError(f"non-numeric field in {line!r}", line=lineno) from None
        try:
            layers.append(PlantedLayer(Tile(a, b, c, d), density))
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno) from None
    return PlantedSpec(n_rows, n_cols, seed, tuple(layers))


def serialize_planted_spec(spec: PlantedSpec) -> str:
    lines = [f"dims {spec.n_rows} {spec.n_cols} seed {spec.seed}"]
    for layer in spec.layers:
        t = layer.tile
        lines.append(
            f"rect {t.row_lo} {t.row_hi} {t.col_lo} {t.col_hi} density {layer.density:g}"
        )
    return "\n".join(lines) + "\n"
