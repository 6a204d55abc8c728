import numpy as np
import pytest

import stijl.miner as miner_module
from stijl.encoding import tree_total_length
from stijl.matrix import BinaryMatrix
from stijl.miner import MinerConfig, mine, stijl_greedy, stijl_topk
from stijl.tiletree import Tile, deserialize

from conftest import random_matrix


def planted(seed, n=60, block=(20, 40, 20, 40), bg=0.05, fg=0.9):
    rng = np.random.default_rng(seed)
    values = (rng.random((n, n)) < bg).astype(np.uint8)
    r0, r1, c0, c1 = block
    values[r0:r1, c0:c1] = (rng.random((r1 - r0, c1 - c0)) < fg).astype(np.uint8)
    return BinaryMatrix(values)


def jaccard(a: Tile, b: Tile) -> float:
    inter = a.intersection(b)
    if inter is None:
        return 0.0
    return inter.area / (a.area + b.area - inter.area)


class TestGreedy:
    def test_all_ones_returns_baseline(self):
        m = BinaryMatrix(np.ones((10, 10), dtype=np.uint8))
        result = stijl_greedy(m, MinerConfig())
        assert result.n_tiles == 1
        assert result.total_bits == 0.0
        assert len(result.steps) == 1
        assert result.steps[0].note == "no improvement"

    def test_all_zeros_returns_baseline(self):
        m = BinaryMatrix(np.zeros((10, 10), dtype=np.uint8))
        result = stijl_greedy(m, MinerConfig())
        assert result.n_tiles == 1
        assert result.l_percent == 100.0

    @pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
    def test_planted_block_recovered(self, seed):
        m = planted(seed)
        result = stijl_greedy(m, MinerConfig())
        first = next(s for s in result.steps if s.note == "accepted")
        assert jaccard(first.tile, Tile(21, 40, 21, 40)) >= 0.95

    def test_monotone_strictly_decreasing(self, rng):
        for _ in range(5):
            m = random_matrix(rng, 40, 40, density=float(rng.uniform(0.2, 0.8)))
            cfg = MinerConfig(min_gain=1e-9)
            result = stijl_greedy(m, cfg)
            last = result.baseline_bits
            for step in result.steps:
                if step.note != "accepted":
                    continue
                assert step.delta < -cfg.min_gain
                assert step.total_bits < last - cfg.min_gain
                last = step.total_bits

    def test_total_matches_recompute(self, rng):
        for seed in (11, 12):
            m = planted(seed, n=50, block=(10, 30, 15, 35))
            result = stijl_greedy(m, MinerConfig())
            assert result.total_bits == pytest.approx(
                tree_total_length(m, result.tree), abs=1e-6
            )

    def test_max_tiles_budget(self):
        m = planted(9, n=50, block=(5, 25, 5, 25))
        result = stijl_greedy(m, MinerConfig(max_tiles=1))
        assert result.n_tiles == 2

    def test_disjoint_mode_runs(self):
        m = planted(13)
        result = stijl_greedy(m, MinerConfig(mode="disjoint"))
        assert result.total_bits <= result.baseline_bits


class TestTopK:
    def test_single_block_k1(self):
        m = planted(21)
        result = stijl_topk(m, MinerConfig(strategy="topk", max_tiles=1))
        assert result.n_tiles == 2
        accepted = [s for s in result.steps if s.note == "accepted"]
        assert jaccard(accepted[0].tile, Tile(21, 40, 21, 40)) >= 0.95

    def test_two_blocks_recovered_in_descending_gain(self):
        rng = np.random.default_rng(5)
        values = (rng.random((60, 60)) < 0.05).astype(np.uint8)
        values[5:25, 5:25] = (rng.random((20, 20)) < 0.95).astype(np.uint8)
        values[35:55, 35:55] = (rng.random((20, 20)) < 0.7).astype(np.uint8)
        m = BinaryMatrix(values)
        result = stijl_topk(m, MinerConfig(strategy="topk", max_tiles=2))
        accepted = [s for s in result.steps if s.note == "accepted"]
        assert len(accepted) == 2
        assert accepted[0].delta <= accepted[1].delta
        blocks = [Tile(6, 25, 6, 25), Tile(36, 55, 36, 55)]
        scores = sorted(
            (max(jaccard(s.tile, b) for b in blocks) for s in accepted), reverse=True
        )
        assert all(score >= 0.9 for score in scores)
        covered = {max(range(2), key=lambda i: jaccard(s.tile, blocks[i])) for s in accepted}
        assert covered == {0, 1}

    def test_unbounded_topk_matches_greedy(self, rng):
        for seed in (31, 32, 33):
            m = planted(seed, n=40, block=(8, 28, 10, 30), bg=0.1, fg=0.8)
            greedy = stijl_greedy(m, MinerConfig())
            topk = stijl_topk(m, MinerConfig(strategy="topk"))
            assert topk.total_bits == pytest.approx(greedy.total_bits, abs=1e-6)

    def test_strategy_mismatch_rejected(self, rng):
        m = random_matrix(rng, 5, 5)
        with pytest.raises(ValueError):
            stijl_topk(m, MinerConfig(strategy="greedy"))
        with pytest.raises(ValueError):
            stijl_greedy(m, MinerConfig(strategy="topk"))


class TestMineDispatch:
    def test_greedy_dispatch(self):
        m = planted(41)
        assert mine(m, MinerConfig()).total_bits == pytest.approx(
            stijl_greedy(m, MinerConfig()).total_bits
        )

    def test_emit_steps_writes_valid_trees(self, tmp_path):
        rng = np.random.default_rng(6)
        values = (rng.random((50, 50)) < 0.05).astype(np.uint8)
        values[2:18, 2:18] = (rng.random((16, 16)) < 0.9).astype(np.uint8)
        values[30:46, 30:46] = (rng.random((16, 16)) < 0.85).astype(np.uint8)
        m = BinaryMatrix(values)
        base = tmp_path / "run.tree"
        cfg = MinerConfig(emit_steps=True, emit_base=base)
        result = mine(m, cfg)
        accepted = sum(1 for s in result.steps if s.note == "accepted")
        assert accepted >= 2
        for k in range(1, accepted + 1):
            text = (tmp_path / f"run.tree.step-{k}").read_text()
            emitted = deserialize(text)
            assert len(emitted) == k + 1
        assert deserialize((tmp_path / f"run.tree.step-{accepted}").read_text()) == result.tree

    def test_interrupted_run_leaves_valid_step_file(self, tmp_path, monkeypatch):
        m = planted(43, n=40, block=(5, 25, 5, 25))
        base = tmp_path / "run.tree"
        calls = {"n": 0}
        real = miner_module.find_tile

        def dying(*args, **kwargs):
            if calls["n"] >= 1:
                raise KeyboardInterrupt
            calls["n"] += 1
            return real(*args, **kwargs)

        monkeypatch.setattr(miner_module, "find_tile", dying)
        with pytest.raises(KeyboardInterrupt):
            mine(m, MinerConfig(emit_steps=True, emit_base=base))
        emitted = deserialize((tmp_path / "run.tree.step-1").read_text())
        assert len(emitted) == 2

    def test_config_validation(self):
        with pytest.raises(ValueError):
            MinerConfig(mode="sideways")
        with pytest.raises(ValueError):
            MinerConfig(strategy="exhaustive")
        with pytest.raises(ValueError):
            MinerConfig(max_tiles=0)
        with pytest.raises(ValueError):
            MinerConfig(emit_steps=True)
        with pytest.raises(ValueError):
            MinerConfig(threads=0)
