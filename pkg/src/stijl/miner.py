"""Greedy tile-tree mining with MDL stopping.

The depth-first strategy repeatedly finds the best subtile of the current
parent, recurses into each accepted child before retrying the parent, and
stops when no insertion clears the improvement threshold. The top-k
strategy instead evaluates every node in the tree each round and inserts
the single globally best tile. Both emit a valid, strictly improving model
after every accepted tile, so a run interrupted at any point still leaves
a usable tree behind.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from .encoding import scaled_entropy
from .findtile import MIN_IMPROVEMENT, SubtileSearchResult, find_tile
from .matrix import BinaryMatrix
from .tiletree import Tile, TileTree

STRATEGIES = ("greedy", "topk")


@dataclass
class MinerConfig:
    mode: str = "overlap"  # overlap | disjoint
    strategy: str = "greedy"  # greedy | topk
    max_tiles: int | None = None  # added tiles, root excluded; None = unbounded
    min_gain: float = MIN_IMPROVEMENT  # bits a step must save to be accepted
    emit_steps: bool = False
    emit_base: str | Path | None = None  # step files: <emit_base>.step-<k>
    threads: int = 1

    def __post_init__(self):
        if self.mode not in ("overlap", "disjoint"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.max_tiles is not None and self.max_tiles < 1:
            raise ValueError(f"max_tiles must be >= 1 when bounded, got {self.max_tiles}")
        if self.min_gain < 0:
            raise ValueError(f"min_gain must be nonnegative, got {self.min_gain}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if self.emit_steps and self.emit_base is None:
            raise ValueError("emit_steps requires emit_base")


@dataclass(frozen=True)
class StepRecord:
    """One search iteration: either an accepted tile or a terminal miss."""

    index: int  # 1-based over accepted steps; 0 for a no-improvement record
    parent: Tile
    tile: Tile | None
    delta: float | None
    total_bits: float
    elapsed_s: float
    note: str  # "accepted" | "no improvement"


@dataclass
class MiningResult:
    tree: TileTree
    total_bits: float
    baseline_bits: float
    l_percent: float
    steps: list[StepRecord] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def n_tiles(self) -> int:
        return len(self.tree)


class _Run:
    """Shared bookkeeping for one mining run."""

    def __init__(self, matrix: BinaryMatrix, cfg: MinerConfig):
        self.matrix = matrix
        self.cfg = cfg
        self.tree = TileTree.from_matrix(matrix)
        ones = matrix.total_ones
        self.baseline = scaled_entropy(ones, matrix.n_rows * matrix.n_cols - ones)
        self.total = self.baseline
        self.steps: list[StepRecord] = []
        self.accepted = 0
        self.started = time.perf_counter()

    def improves(self, res: SubtileSearchResult) -> bool:
        return res.found and res.delta < -self.cfg.min_gain

    def accept(self, parent: int, res: SubtileSearchResult) -> int:
        node, _ = self.tree.add_child(self.matrix, parent, res.tile)
        self.total += res.delta
        self.accepted += 1
        self.steps.append(
            StepRecord(
                index=self.accepted,
                parent=self.tree.tile(parent),
                tile=res.tile,
                delta=res.delta,
                total_bits=self.total,
                elapsed_s=time.perf_counter() - self.started,
                note="accepted",
            )
        )
        if self.cfg.emit_steps:
            self._emit_step()
        return node

    def log_miss(self, parent: int) -> None:
        self.steps.append(
            StepRecord(
                index=0,
                parent=self.tree.tile(parent),
                tile=None,
                delta=None,
                total_bits=self.total,
                elapsed_s=time.perf_counter() - self.started,
                note="no improvement",
            )
        )

    def budget_left(self) -> bool:
        return self.cfg.max_tiles is None or self.accepted < self.cfg.max_tiles

    def finish(self) -> MiningResult:
        l_percent = 100.0 if self.baseline == 0 else 100.0 * self.total / self.baseline
        return MiningResult(
            tree=self.tree,
            total_bits=self.total,
            baseline_bits=self.baseline,
            l_percent=l_percent,
            steps=self.steps,
            wall_time_s=time.perf_counter() - self.started,
        )

    def _emit_step(self) -> None:
        path = Path(f"{self.cfg.emit_base}.step-{self.accepted}")
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(self.tree.serialize(), encoding="ascii")
        os.replace(tmp, path)  # a killed run never leaves a truncated step file


def stijl_greedy(matrix: BinaryMatrix, cfg: MinerConfig) -> MiningResult:
    """Depth-first mining: refine each accepted child before retrying its
    parent; a parent is abandoned once no subtile of it improves the tree."""
    if cfg.strategy != "greedy":
        raise ValueError(f"greedy miner called with strategy {cfg.strategy!r}")
    run = _Run(matrix, cfg)
    stack = [run.tree.ROOT]
    while stack and run.budget_left():
        node = stack[-1]
        res = find_tile(matrix, run.tree, node, cfg.mode, threads=cfg.threads)
        if run.improves(res):
            stack.append(run.accept(node, res))
        else:
            run.log_miss(node)
            stack.pop()
    return run.finish()


def stijl_topk(matrix: BinaryMatrix, cfg: MinerConfig) -> MiningResult:
    """Globally greedy mining: every round inserts the single best tile over
    all parents in the tree; with unbounded budget it stops exactly where
    the depth-first strategy does."""
    if cfg.strategy != "topk":
        raise ValueError(f"top-k miner called with strategy {cfg.strategy!r}")
    run = _Run(matrix, cfg)
    # Inserting under X changes claims nowhere else, so cached search
    # results stay valid for every node except X and the new child.
    cache: dict[int, SubtileSearchResult] = {}
    stale = [run.tree.ROOT]
    while run.budget_left():
        for node in stale:
            cache[node] = find_tile(matrix, run.tree, node, cfg.mode, threads=cfg.threads)
        stale = []
        ids = run.tree.post_order_ids()
        best_node = None
        best_key = None
        for node, res in cache.items():
            if not run.improves(res):
                continue
            key = (res.delta, ids[node])
            if best_key is None or key < best_key:
                best_key = key
                best_node = node
        if best_node is None:
            run.log_miss(run.tree.ROOT)
            break
        child = run.accept(best_node, cache[best_node])
        stale = [best_node, child]
    return run.finish()


def mine(matrix: BinaryMatrix, cfg: MinerConfig) -> MiningResult:
    """Dispatch on the configured strategy."""
    if cfg.strategy == "greedy":
        return stijl_greedy(matrix, cfg)
    return stijl_topk(matrix, cfg)
