"""SVG rendering of a tiling over its matrix.

Tiles are drawn in reverse post-order so parents sit beneath the children
that claim cells from them; fill darkness grows linearly with the tile's
empirical 1-frequency over its own claimed cells. Output is a small SVG
1.1 subset: rect and circle elements only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatchError
from .matrix import BinaryMatrix
from .tiletree import TileTree

# (red, green, blue) bases the frequency shade scales towards
_FILL_PALETTE = ((0, 0, 0), (24, 48, 120), (120, 32, 32), (24, 96, 48))
_STROKE_PALETTE = ("#000000", "#20305a", "#5a2020", "#205a30")

_SHADE_FLOOR = 0.1  # frequency 0 -> 10% towards the base colour
_SHADE_CEIL = 0.9  # frequency 1 -> 90%


@dataclass(frozen=True)
class RenderOptions:
    cell_size: int = 4
    show_ones: bool = False
    shade_by_frequency: bool = True
    stroke_index: int = 0
    fill_index: int = 0

    def __post_init__(self):
        if self.cell_size < 1:
            raise ValueError(f"cell_size must be >= 1, got {self.cell_size}")


def _fill_color(frequency: float, base: tuple[int, int, int]) -> str:
    shade = _SHADE_FLOOR + (_SHADE_CEIL - _SHADE_FLOOR) * frequency
    channels = (round(255 * (1 - shade) + c * shade) for c in base)
    return "#{:02x}{:02x}{:02x}".format(*channels)


def render_svg(
    matrix: BinaryMatrix,
    tree: TileTree,
    options: RenderOptions = RenderOptions(),
) -> str:
    """One rectangle per tile plus optional dots for the 1s."""
    if (tree.n_rows, tree.n_cols) != (matrix.n_rows, matrix.n_cols):
        raise DimensionMismatchError(
            f"tree is {tree.n_rows}x{tree.n_cols} but matrix is "
            f"{matrix.n_rows}x{matrix.n_cols}"
        )
    cs = options.cell_size
    width = matrix.n_cols * cs
    height = matrix.n_rows * cs
    stroke = _STROKE_PALETTE[options.stroke_index % len(_STROKE_PALETTE)]
    base = _FILL_PALETTE[options.fill_index % len(_FILL_PALETTE)]
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    ]
    for node in reversed(tree.post_order()):
        tile = tree.tile(node)
        ones, zeroes = tree.counts(node)
        if options.shade_by_frequency:
            freq = ones / (ones + zeroes) if ones + zeroes else 0.0
        else:
            freq = 0.0
        parts.append(
            f'<rect x="{(tile.col_lo - 1) * cs}" y="{(tile.row_lo - 1) * cs}" '
            f'width="{tile.n_cols * cs}" height="{tile.n_rows * cs}" '
            f'fill="{_fill_color(freq, base)}" stroke="{stroke}" stroke-width="1"/>'
        )
    if options.show_ones:
        radius = max(cs * 0.15, 0.5)
        rows, cols = matrix.values.nonzero()
        for i, j in zip(rows.tolist(), cols.tolist()):
            parts.append(
                f'<circle cx="{(j + 0.5) * cs:g}" cy="{(i + 0.5) * cs:g}" '
                f'r="{radius:g}" fill="{stroke}"/>'
            )
    parts.append("</svg>\n")
    return "\n".join(parts)
