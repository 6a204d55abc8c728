import copy
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stijl.encoding import (
    CountPair,
    gain,
    relative_compression,
    root_length,
    scaled_entropy,
    tile_description_length,
    tree_total_length,
)
from stijl.errors import ContainmentError, CountConsistencyError, DimensionMismatchError
from stijl.matrix import BinaryMatrix
from stijl.miner import MinerConfig, mine
from stijl.reference import naive_tree_length
from stijl.tiletree import Tile, TileTree

from conftest import random_matrix, random_subtile, random_tree

counts = st.integers(min_value=0, max_value=10_000)


class TestScaledEntropy:
    def test_symmetric_pair(self):
        assert scaled_entropy(1, 1) == pytest.approx(2.0, abs=1e-12)

    def test_pure_is_free(self):
        assert scaled_entropy(0, 5) == 0.0
        assert scaled_entropy(5, 0) == 0.0
        assert scaled_entropy(0, 0) == 0.0

    def test_six_three(self):
        # frozen from a high-precision evaluation of
        # -6*log2(6/9) - 3*log2(3/9)
        assert scaled_entropy(6, 3) == pytest.approx(8.264662506490406, abs=1e-9)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            scaled_entropy(-1, 3)

    @given(p=counts, n=counts)
    @settings(max_examples=200)
    def test_symmetry(self, p, n):
        assert scaled_entropy(p, n) == pytest.approx(scaled_entropy(n, p), abs=1e-9)

    @given(p=st.integers(0, 500), n=st.integers(0, 500), k=st.integers(0, 20))
    @settings(max_examples=200)
    def test_integer_scaling(self, p, n, k):
        assert scaled_entropy(k * p, k * n) == pytest.approx(
            k * scaled_entropy(p, n), rel=1e-12, abs=1e-9
        )

    @given(p=counts, n=counts)
    @settings(max_examples=200)
    def test_bounds(self, p, n):
        h = scaled_entropy(p, n)
        assert 0.0 <= h <= p + n + 1e-9


class TestTileDescriptionLength:
    def test_eight_by_eight_parent(self):
        parent = Tile(1, 8, 1, 8)
        assert tile_description_length(Tile(2, 3, 4, 5), parent) == pytest.approx(32.0)

    def test_unit_parent(self):
        t = Tile(1, 1, 1, 1)
        assert tile_description_length(t, t) == pytest.approx(2.0)

    def test_mixed_extent(self):
        parent = Tile(3, 6, 2, 9)
        assert tile_description_length(Tile(4, 5, 3, 3), parent) == pytest.approx(27.0)

    def test_independent_of_child_extent(self):
        parent = Tile(1, 8, 1, 8)
        assert tile_description_length(Tile(1, 1, 1, 1), parent) == tile_description_length(
            Tile(1, 8, 1, 8), parent
        )

    def test_containment_enforced(self):
        with pytest.raises(ContainmentError):
            tile_description_length(Tile(1, 9, 1, 8), Tile(1, 8, 1, 8))

    def test_symmetric_under_joint_transpose(self, rng):
        for _ in range(20):
            parent = Tile(1, int(rng.integers(1, 12)), 1, int(rng.integers(1, 12)))
            child = random_subtile(rng, parent)
            assert tile_description_length(child, parent) == pytest.approx(
                tile_description_length(child.transposed(), parent.transposed())
            )

    def test_root_is_free(self):
        assert root_length() == 0.0


class TestTreeTotalLength:
    def test_root_only_half_dense(self):
        m = BinaryMatrix([[1, 0], [0, 1]])
        tree = TileTree.from_matrix(m)
        assert tree_total_length(m, tree) == pytest.approx(4.0)

    def test_all_ones_root_only(self):
        m = BinaryMatrix(np.ones((5, 7), dtype=np.uint8))
        tree = TileTree.from_matrix(m)
        assert tree_total_length(m, tree) == 0.0

    def test_matches_independent_recompute(self, rng):
        for _ in range(25):
            m = random_matrix(rng, 15, 10)
            tree = random_tree(rng, m, max_extra=3)
            assert tree_total_length(m, tree) == pytest.approx(
                naive_tree_length(m, tree), abs=1e-9
            )

    def test_dimension_mismatch(self, rng):
        m = random_matrix(rng, 4, 4)
        tree = TileTree.from_matrix(random_matrix(rng, 4, 5))
        with pytest.raises(DimensionMismatchError):
            tree_total_length(m, tree)


class TestGain:
    def test_child_claims_everything(self):
        parent = Tile(1, 6, 1, 6)
        child = Tile(2, 5, 2, 5)
        delta = gain(CountPair(7, 3), CountPair(7, 3), child, parent)
        assert delta == pytest.approx(tile_description_length(child, parent))

    def test_child_claims_nothing(self):
        parent = Tile(1, 6, 1, 6)
        child = Tile(2, 5, 2, 5)
        delta = gain(CountPair(0, 0), CountPair(7, 3), child, parent)
        assert delta == pytest.approx(tile_description_length(child, parent))

    def test_count_consistency(self):
        parent = Tile(1, 4, 1, 4)
        with pytest.raises(CountConsistencyError):
            gain(CountPair(5, 0), CountPair(4, 4), Tile(1, 2, 1, 2), parent)

    def test_matches_full_recomputation(self, rng):
        # the exact-gain identity: inserting one subtile changes the total
        # length by exactly the closed-form delta
        for _ in range(40):
            m = random_matrix(rng, 10, 8)
            tree = random_tree(rng, m, max_extra=3)
            node = int(rng.integers(0, len(tree)))
            parent_tile = tree.tile(node)
            parent_counts = tree.counts(node)
            child = random_subtile(rng, parent_tile)
            before = tree_total_length(m, tree)
            grown = copy.deepcopy(tree)
            _, claimed = grown.add_child(m, node, child)
            predicted = gain(claimed, parent_counts, child, parent_tile)
            after = tree_total_length(m, grown)
            assert after - before == pytest.approx(predicted, abs=1e-9)


class TestRelativeCompression:
    def test_baseline_tree(self, rng):
        m = random_matrix(rng, 6, 6, density=0.4)
        assert relative_compression(m, TileTree.from_matrix(m)) == pytest.approx(100.0)

    def test_constant_data_convention(self):
        m = BinaryMatrix(np.ones((4, 4), dtype=np.uint8))
        tree = TileTree.from_matrix(m)
        tree.add_child(m, tree.ROOT, Tile(1, 2, 1, 2))
        assert relative_compression(m, tree) == 100.0

    def test_planted_block_compresses(self):
        rng = np.random.default_rng(7)
        values = (rng.random((40, 40)) < 0.05).astype(np.uint8)
        values[10:30, 10:30] = (rng.random((20, 20)) < 0.9).astype(np.uint8)
        m = BinaryMatrix(values)
        result = mine(m, MinerConfig())
        assert result.n_tiles > 1
        assert relative_compression(m, result.tree) < 100.0
