"""Linear-time optimal-interval search over per-row count vectors.

Given 1-counts p and 0-counts n per row, plus the parent's totals (o, z),
find the interval a..b that minimises

    cost(a, b) = H(u, v) + H(o - u, z - v),   u = sum p[a..b], v = sum n[a..b]

subject to the interval being strictly denser than the parent,
u / (u + v) > o / (o + z). The search keeps a border list B of left
endpoints that can still win and a candidate sublist C pruned further by
precomputed tail frequencies; every index enters and leaves each list at
most once, so the whole scan is linear in the vector length.

All frequency comparisons are exact integer cross-multiplications, and a
zero-mass segment compares as frequency 0; the strict density constraint is
therefore a hard integer boundary, never a floating-point one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .encoding import scaled_entropy
from .errors import BoundsError, CountConsistencyError

Observer = Callable[[int, tuple[int, ...], tuple[int, ...]], None]


class CountVectors:
    """Per-row 1-counts and 0-counts with prefix sums; windows are 1-based."""

    __slots__ = ("pos", "neg", "prefix_pos", "prefix_neg")

    def __init__(self, pos, neg) -> None:
        p = np.asarray(pos, dtype=np.int64)
        n = np.asarray(neg, dtype=np.int64)
        if p.ndim != 1 or n.ndim != 1:
            raise ValueError("count vectors must be 1-D")
        if p.shape != n.shape:
            raise ValueError(f"length mismatch: {p.shape[0]} vs {n.shape[0]}")
        if p.shape[0] < 1:
            raise ValueError("count vectors must have at least one row")
        if (p < 0).any() or (n < 0).any():
            raise ValueError("counts must be nonnegative")
        self.pos = p
        self.neg = n
        self.prefix_pos = np.concatenate(([0], np.cumsum(p)))
        self.prefix_neg = np.concatenate(([0], np.cumsum(n)))

    @property
    def length(self) -> int:
        return self.pos.shape[0]

    def count_pos(self, a: int, b: int) -> int:
        """Sum of the 1-counts over rows a..b (1-based inclusive)."""
        return int(self.prefix_pos[b] - self.prefix_pos[a - 1])

    def count_neg(self, a: int, b: int) -> int:
        return int(self.prefix_neg[b] - self.prefix_neg[a - 1])

    def swapped(self) -> CountVectors:
        """The 0-1 inverse view: 1-counts and 0-counts exchanged."""
        return CountVectors(self.neg, self.pos)


@dataclass(frozen=True)
class ScanResult:
    """Winning interval (1-based, inclusive) and its cost, or absence."""

    interval: tuple[int, int] | None
    cost: float | None

    @property
    def found(self) -> bool:
        return self.interval is not None


ABSENT = ScanResult(None, None)


def _freq_le(u1: int, v1: int, u2: int, v2: int) -> bool:
    """u1/(u1+v1) <= u2/(u2+v2), exactly; zero-mass means frequency 0."""
    if u1 + v1 == 0:
        return True
    if u2 + v2 == 0:
        return u1 == 0
    return u1 * (u2 + v2) <= u2 * (u1 + v1)


def _freq_ge(u1: int, v1: int, u2: int, v2: int) -> bool:
    return _freq_le(u2, v2, u1, v1)


def interval_cost(v: CountVectors, a: int, b: int, parent_ones: int, parent_zeroes: int) -> float:
    """cost(a, b) for the window, in O(1) via the prefix sums."""
    if not 1 <= a <= b <= v.length:
        raise BoundsError(f"interval ({a}, {b}) outside 1..{v.length}")
    u = v.count_pos(a, b)
    w = v.count_neg(a, b)
    if u > parent_ones or w > parent_zeroes:
        raise CountConsistencyError(
            f"interval counts ({u}, {w}) exceed parent totals "
            f"({parent_ones}, {parent_zeroes})"
        )
    return scaled_entropy(u, w) + scaled_entropy(parent_ones - u, parent_zeroes - w)


def _tail_frequency_counts(v: CountVectors) -> tuple[list[int], list[int]]:
    """Count pairs realising tfreq(a) = max over b >= a of freq(a, b).

    A right-to-left sweep maintains the tail-border list (the mirror image
    of the scan's border list); the front border realises the maximum.
    Index m+1 holds the empty-suffix sentinel (zero mass, frequency 0).
    """
    m = v.length
    cp, cn = v.count_pos, v.count_neg
    tu = [0] * (m + 2)
    tv = [0] * (m + 2)
    stack: list[int] = []  # tail borders of the current a; front (top) = smallest
    for a in range(m, 0, -1):
        stack.append(a)
        while len(stack) > 1 and _freq_le(
            cp(a, stack[-1]),
            cn(a, stack[-1]),
            cp(stack[-1] + 1, stack[-2]),
            cn(stack[-1] + 1, stack[-2]),
        ):
            stack.pop()
        front = stack[-1]
        tu[a] = cp(a, front)
        tv[a] = cn(a, front)
    return tu, tv


def tail_frequencies(v: CountVectors) -> list[Fraction]:
    """tfreq(a) for every index a, as exact fractions, in linear time."""
    tu, tv = _tail_frequency_counts(v)
    out = []
    for a in range(1, v.length + 1):
        mass = tu[a] + tv[a]
        out.append(Fraction(tu[a], mass) if mass else Fraction(0))
    return out


def scan(
    v: CountVectors,
    parent_ones: int,
    parent_zeroes: int,
    observer: Observer | None = None,
) -> ScanResult:
    """Best strictly-denser-than-parent interval, or absence.

    Returns the first interval (in scan order) attaining the minimal cost
    among all windows whose 1-frequency strictly exceeds
    parent_ones / (parent_ones + parent_zeroes). Total inner-loop work is
    linear: each index is pushed once onto each list and removed at most
    once from each.

    `observer`, when given, is called after every step b with
    (b, borders, candidates), both as ascending tuples.
    """
    m = v.length
    o = int(parent_ones)
    z = int(parent_zeroes)
    if v.count_pos(1, m) > o or v.count_neg(1, m) > z:
        raise CountConsistencyError(
            f"vector totals ({v.count_pos(1, m)}, {v.count_neg(1, m)}) exceed "
            f"parent totals ({o}, {z})"
        )
    cp, cn = v.count_pos, v.count_neg
    tu, tv = _tail_frequency_counts(v)

    borders: list[int] = []  # front (top of stack) = largest index
    cands: list[int] = []
    best_cost = float("inf")
    best: tuple[int, int] | None = None
    oz = o + z

    def consider(a: int, b: int) -> None:
        nonlocal best, best_cost
        u = cp(a, b)
        w = cn(a, b)
        if u * oz > o * (u + w):  # strict density constraint, exact
            cost = scaled_entropy(u, w) + scaled_entropy(o - u, z - w)
            if cost < best_cost:
                best_cost = cost
                best = (a, b)

    for b in range(1, m + 1):
        borders.append(b)
        cands.append(b)
        while len(borders) > 1 and _freq_le(
            cp(borders[-1], b),
            cn(borders[-1], b),
            cp(borders[-2], borders[-1] - 1),
            cn(borders[-2], borders[-1] - 1),
        ):
            if cands and cands[-1] == borders[-1]:
                cands.pop()
            borders.pop()
        while len(cands) > 1 and _freq_ge(
            cp(cands[-2], cands[-1] - 1),
            cn(cands[-2], cands[-1] - 1),
            tu[b + 1],
            tv[b + 1],
        ):
            consider(cands[-1], b)
            cands.pop()
        consider(cands[-1], b)
        if observer is not None:
            observer(b, tuple(borders), tuple(cands))

    if best is None:
        return ABSENT
    return ScanResult(best, best_cost)
