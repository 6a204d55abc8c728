"""Command-line front end: ingest, order, mine, report, render, benchmark.

Exit codes: 0 success, 1 bad arguments, 2 input format error, 3 output I/O
failure. Stats go to standard output as `key: value` lines; diagnostics go
to the error stream.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .encoding import scaled_entropy
from .errors import FormatError, StijlError
from .findtile import find_tile
from .matrix import BinaryMatrix, parse_dense, parse_sparse
from .miner import MinerConfig, MiningResult, mine
from .ordering import apply_permutation, spectral_order
from .reference import generate_planted, naive_find_tile, parse_planted_spec
from .render import RenderOptions, render_svg
from .tiletree import TileTree

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_IO = 3

BENCH_DEFAULT_ROWS = 200
BENCH_DEFAULT_COLS = 32


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # bad arguments exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stijl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mine_p = sub.add_parser("mine", help="mine a tile tree from a binary matrix")
    mine_p.add_argument("--input", required=True, help="matrix file")
    mine_p.add_argument("--format", choices=("dense", "sparse"), default="dense")
    mine_p.add_argument("--mode", choices=("overlap", "disjoint"), default="overlap")
    mine_p.add_argument("--strategy", choices=("greedy", "topk"), default="greedy")
    mine_p.add_argument("--max-tiles", type=int, default=None, metavar="K")
    mine_p.add_argument("--order", choices=("none", "spectral"), default="none")
    mine_p.add_argument("--min-gain", type=float, default=1e-9, metavar="BITS")
    mine_p.add_argument("--out-tree", default=None, metavar="PATH")
    mine_p.add_argument("--out-svg", default=None, metavar="PATH")
    mine_p.add_argument("--emit-steps", action="store_true")
    mine_p.add_argument("--stats-json", default=None, metavar="PATH")
    mine_p.add_argument("--threads", type=int, default=1, metavar="T")

    bench_p = sub.add_parser(
        "bench", help="time the subtile search on the first iteration"
    )
    bench_p.add_argument("--input", default=None, help="matrix file (default: generated)")
    bench_p.add_argument("--format", choices=("dense", "sparse"), default="dense")
    bench_p.add_argument("--mode", choices=("overlap", "disjoint"), default="overlap")
    bench_p.add_argument("--naive", action="store_true", help="also time the exhaustive baseline")
    bench_p.add_argument("--seed", type=int, default=0, help="seed for the generated instance")
    bench_p.add_argument("--threads", type=int, default=1, metavar="T")

    gen_p = sub.add_parser("generate", help="sample a matrix from a layout spec")
    gen_p.add_argument("--spec", required=True, help="layout spec file")
    gen_p.add_argument("--out", required=True, help="dense matrix output path")
    gen_p.add_argument("--seed", type=int, default=None, help="override the spec's seed")
    return parser


def _read_matrix(path: str, fmt: str) -> BinaryMatrix:
    try:
        text = Path(path).read_text(encoding="ascii")
    except OSError as exc:
        raise FormatError(f"cannot read input {path}: {exc}") from exc
    if fmt == "dense":
        return parse_dense(text)
    return parse_sparse(text)


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="ascii")
    except OSError as exc:
        print(f"stijl: cannot write {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO) from exc


def _stats(matrix: BinaryMatrix, result: MiningResult) -> dict:
    area = matrix.n_rows * matrix.n_cols
    return {
        "n_rows": matrix.n_rows,
        "n_cols": matrix.n_cols,
        "ones_percent": round(100.0 * matrix.total_ones / area, 4),
        "baseline_bits": round(result.baseline_bits, 6),
        "total_bits": round(result.total_bits, 6),
        "l_percent": round(result.l_percent, 4),
        "n_tiles": result.n_tiles,
        "wall_time_s": round(result.wall_time_s, 3),
    }


def _print_stats(stats: dict) -> None:
    for key, value in stats.items():
        print(f"{key}: {value}")


def _cmd_mine(args) -> int:
    matrix = _read_matrix(args.input, args.format)
    if args.order == "spectral":
        ordering = spectral_order(matrix)
        if ordering.warning:
            print(f"stijl: warning: {ordering.warning}", file=sys.stderr)
        matrix = apply_permutation(matrix, ordering)
    cfg = MinerConfig(
        mode=args.mode,
        strategy=args.strategy,
        max_tiles=args.max_tiles,
        min_gain=args.min_gain,
        emit_steps=args.emit_steps,
        emit_base=args.out_tree if args.emit_steps else None,
        threads=args.threads,
    )
    result = mine(matrix, cfg)
    if args.out_tree:
        _write_text(args.out_tree, result.tree.serialize())
    if args.out_svg:
        _write_text(args.out_svg, render_svg(matrix, result.tree))
    stats = _stats(matrix, result)
    _print_stats(stats)
    if args.stats_json:
        payload = dict(stats)
        payload["steps"] = [
            {
                "index": step.index,
                "note": step.note,
                "parent": [step.parent.row_lo, step.parent.row_hi,
                           step.parent.col_lo, step.parent.col_hi],
                "tile": None if step.tile is None else [
                    step.tile.row_lo, step.tile.row_hi,
                    step.tile.col_lo, step.tile.col_hi,
                ],
                "delta_bits": step.delta,
                "total_bits": step.total_bits,
                "elapsed_s": round(step.elapsed_s, 3),
            }
            for step in result.steps
        ]
        _write_text(args.stats_json, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _bench_matrix(args) -> BinaryMatrix:
    if args.input is not None:
        return _read_matrix(args.input, args.format)
    rng = np.random.default_rng(args.seed)
    values = (rng.random((BENCH_DEFAULT_ROWS, BENCH_DEFAULT_COLS)) < 0.1).astype(np.uint8)
    values[40:120, 8:24] = (rng.random((80, 16)) < 0.8).astype(np.uint8)
    return BinaryMatrix(values)


def _cmd_bench(args) -> int:
    matrix = _bench_matrix(args)
    tree = TileTree.from_matrix(matrix)
    # warm-up fixes JIT compilation outside the timed region
    find_tile(matrix, tree, tree.ROOT, args.mode, threads=args.threads)
    start = time.perf_counter()
    fast = find_tile(matrix, tree, tree.ROOT, args.mode, threads=args.threads)
    fast_s = time.perf_counter() - start
    fast_delta = "none" if not fast.found else f"{fast.delta:.6f}"
    print(f"matrix: {matrix.n_rows}x{matrix.n_cols}, {matrix.total_ones} ones")
    print("method  delta_bits  tile  wall_time_s")
    tile_str = "-" if not fast.found else (
        f"({fast.tile.row_lo},{fast.tile.row_hi})x({fast.tile.col_lo},{fast.tile.col_hi})"
    )
    print(f"fast    {fast_delta}  {tile_str}  {fast_s:.4f}")
    if args.naive:
        start = time.perf_counter()
        naive = naive_find_tile(matrix, tree, tree.ROOT, args.mode)
        naive_s = time.perf_counter() - start
        if fast.found != naive.found or (
            fast.found and abs(fast.delta - naive.delta) > 1e-9
        ):
            print(
                "stijl: error: fast and naive searches disagree "
                f"(fast={fast_delta}, naive="
                f"{'none' if not naive.found else f'{naive.delta:.6f}'})",
                file=sys.stderr,
            )
            return EXIT_USAGE
        naive_delta = "none" if not naive.found else f"{naive.delta:.6f}"
        naive_tile = "-" if not naive.found else (
            f"({naive.tile.row_lo},{naive.tile.row_hi})x"
            f"({naive.tile.col_lo},{naive.tile.col_hi})"
        )
        print(f"naive   {naive_delta}  {naive_tile}  {naive_s:.4f}")
        if fast_s > 0:
            print(f"speedup: {naive_s / fast_s:.1f}x")
    return EXIT_OK


def _cmd_generate(args) -> int:
    try:
        text = Path(args.spec).read_text(encoding="ascii")
    except OSError as exc:
        raise FormatError(f"cannot read spec {args.spec}: {exc}") from exc
    spec = parse_planted_spec(text)
    if args.seed is not None:
        spec = type(spec)(spec.n_rows, spec.n_cols, args.seed, spec.layers)
    matrix, _ = generate_planted(spec)
    _write_text(args.out, matrix.to_dense_text())
    print(f"wrote {matrix.n_rows}x{matrix.n_cols} matrix with "
          f"{matrix.total_ones} ones to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "mine":
            return _cmd_mine(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_generate(args)
    except FormatError as exc:
        print(f"stijl: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StijlError as exc:
        print(f"stijl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"stijl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
