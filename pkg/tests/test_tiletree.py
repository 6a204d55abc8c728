import numpy as np
import pytest

from stijl.encoding import CountPair
from stijl.errors import ContainmentError, FormatError
from stijl.matrix import BinaryMatrix
from stijl.reference import naive_claim_owner
from stijl.tiletree import Tile, TileTree, deserialize

from conftest import random_matrix, random_tree


def two_branch_tree(matrix):
    """Root with two children; the first has two children, the second one.

    Post-order ids come out 1..6 with the root last.
    """
    tree = TileTree.from_matrix(matrix)
    first = tree.add_child(matrix, tree.ROOT, Tile(2, 7, 2, 7))[0]
    tree.add_child(matrix, first, Tile(3, 4, 3, 4))
    tree.add_child(matrix, first, Tile(4, 6, 3, 6))
    second = tree.add_child(matrix, tree.ROOT, Tile(4, 9, 4, 9))[0]
    tree.add_child(matrix, second, Tile(5, 6, 5, 8))
    return tree


class TestTile:
    def test_validation(self):
        with pytest.raises(ValueError):
            Tile(2, 1, 1, 1)
        with pytest.raises(ValueError):
            Tile(1, 1, 0, 1)

    def test_geometry(self):
        t = Tile(2, 4, 3, 7)
        assert (t.n_rows, t.n_cols, t.area) == (3, 5, 15)
        assert t.contains(Tile(2, 3, 4, 6))
        assert not t.contains(Tile(1, 3, 4, 6))
        assert t.intersection(Tile(3, 9, 1, 3)) == Tile(3, 4, 3, 3)
        assert t.intersection(Tile(5, 9, 1, 3)) is None
        assert t.transposed() == Tile(3, 7, 2, 4)


class TestPostOrder:
    def test_root_only(self, rng):
        tree = TileTree.from_matrix(random_matrix(rng, 3, 3))
        assert tree.post_order() == [tree.ROOT]

    def test_two_branch_tree(self, rng):
        m = random_matrix(rng, 10, 10)
        tree = two_branch_tree(m)
        order = tree.post_order()
        assert order[-1] == tree.ROOT
        ids = tree.post_order_ids()
        first, second = tree.children(tree.ROOT)
        g1, g2 = tree.children(first)
        (g3,) = tree.children(second)
        # children before parents, sibling subtrees in insertion order
        assert [ids[h] for h in (g1, g2, first, g3, second, tree.ROOT)] == [1, 2, 3, 4, 5, 6]

    def test_nested_chain(self, rng):
        m = random_matrix(rng, 8, 8)
        tree = TileTree.from_matrix(m)
        a = tree.add_child(m, tree.ROOT, Tile(2, 7, 2, 7))[0]
        b = tree.add_child(m, a, Tile(3, 6, 3, 6))[0]
        assert tree.post_order() == [b, a, tree.ROOT]


class TestCellsCounts:
    def test_root_only_totals(self, rng):
        m = random_matrix(rng, 6, 9)
        tree = TileTree.from_matrix(m)
        assert tree.cells_counts(m, tree.ROOT) == CountPair(
            m.total_ones, 54 - m.total_ones
        )

    def test_fully_covered_parent(self, rng):
        m = random_matrix(rng, 5, 5)
        tree = TileTree.from_matrix(m)
        tree.add_child(m, tree.ROOT, Tile(1, 5, 1, 5))
        assert tree.counts(tree.ROOT) == CountPair(0, 0)
        assert tree.cells_counts(m, tree.ROOT) == CountPair(0, 0)

    def test_overlapping_children_claim_first_come_first_serve(self, rng):
        m = random_matrix(rng, 10, 10)
        tree = two_branch_tree(m)
        owner = naive_claim_owner(tree)
        ids = tree.post_order_ids()
        for node in tree.nodes():
            cells = owner == ids[node] - 1
            ones = int(m.values[cells].sum())
            zeroes = int(cells.sum()) - ones
            assert tree.counts(node) == CountPair(ones, zeroes)
            assert tree.cells_counts(m, node) == CountPair(ones, zeroes)


class TestAddChild:
    def test_child_equal_to_parent_claims_all(self, rng):
        m = random_matrix(rng, 4, 6)
        tree = TileTree.from_matrix(m)
        total = CountPair(m.total_ones, 24 - m.total_ones)
        _, claimed = tree.add_child(m, tree.ROOT, Tile(1, 4, 1, 6))
        assert claimed == total
        assert tree.counts(tree.ROOT) == CountPair(0, 0)

    def test_containment_enforced(self, rng):
        m = random_matrix(rng, 4, 4)
        tree = TileTree.from_matrix(m)
        child = tree.add_child(m, tree.ROOT, Tile(2, 3, 2, 3))[0]
        with pytest.raises(ContainmentError):
            tree.add_child(m, child, Tile(2, 4, 2, 3))

    def test_second_sibling_excludes_overlap(self, rng):
        m = random_matrix(rng, 8, 8)
        tree = TileTree.from_matrix(m)
        tree.add_child(m, tree.ROOT, Tile(1, 4, 1, 4))
        _, claimed = tree.add_child(m, tree.ROOT, Tile(3, 6, 3, 6))
        # the 2x2 overlap with the first sibling is already claimed
        assert claimed.ones + claimed.zeroes == 16 - 4

    def test_counts_match_recomputation_after_random_growth(self, rng):
        for _ in range(20):
            m = random_matrix(rng, 9, 7)
            tree = random_tree(rng, m, max_extra=5)
            for node in tree.nodes():
                assert tree.counts(node) == tree.cells_counts(m, node)

    def test_only_parent_and_child_change(self, rng):
        m = random_matrix(rng, 10, 10)
        tree = two_branch_tree(m)
        before = {node: tree.counts(node) for node in tree.nodes()}
        parent = tree.children(tree.ROOT)[0]
        new, claimed = tree.add_child(m, parent, Tile(3, 5, 3, 5))
        for node, counts in before.items():
            if node == parent:
                assert tree.counts(node) == CountPair(
                    counts.ones - claimed.ones, counts.zeroes - claimed.zeroes
                )
            else:
                assert tree.counts(node) == counts

    def test_partition_invariant(self, rng):
        for _ in range(10):
            m = random_matrix(rng, 12, 12)
            tree = random_tree(rng, m, max_extra=6)
            total = sum(
                tree.counts(node).ones + tree.counts(node).zeroes
                for node in tree.nodes()
            )
            assert total == 144
            owner = naive_claim_owner(tree)
            sizes = np.bincount(owner.ravel(), minlength=len(tree))
            ids = tree.post_order_ids()
            for node in tree.nodes():
                pair = tree.counts(node)
                assert pair.ones + pair.zeroes == sizes[ids[node] - 1]


class TestSerialization:
    def test_root_only_roundtrip(self, rng):
        tree = TileTree.from_matrix(random_matrix(rng, 3, 5))
        text = tree.serialize()
        assert len(text.strip().splitlines()) == 2
        assert deserialize(text) == tree

    def test_two_branch_roundtrip(self, rng):
        tree = two_branch_tree(random_matrix(rng, 10, 10))
        text = tree.serialize()
        assert len(text.strip().splitlines()) == 7
        assert deserialize(text) == tree

    def test_random_roundtrips(self, rng):
        for _ in range(100):
            m = random_matrix(rng, int(rng.integers(2, 14)), int(rng.integers(2, 14)))
            tree = random_tree(rng, m, max_extra=5)
            assert deserialize(tree.serialize()) == tree

    def test_header_required(self):
        with pytest.raises(FormatError, match="header"):
            deserialize("1 0 1 2 1 2 2 2\n")

    def test_malformed_line(self, rng):
        tree = TileTree.from_matrix(random_matrix(rng, 2, 2))
        text = tree.serialize().replace("1 0 1 2 1 2", "1 0 1 2 1")
        with pytest.raises(FormatError):
            deserialize(text)

    def test_containment_violation_rejected(self):
        text = (
            "stijl-tree v1 4 4\n"
            "1 2 1 3 1 3 9 0\n"
            "2 0 2 4 2 4 0 7\n"
        )
        with pytest.raises(FormatError):
            deserialize(text)

    def test_misplaced_root_rejected(self):
        text = (
            "stijl-tree v1 4 4\n"
            "1 0 1 4 1 4 8 4\n"
            "2 1 2 3 2 3 2 2\n"
        )
        with pytest.raises(FormatError, match="root"):
            deserialize(text)

    def test_root_must_cover_data(self):
        text = "stijl-tree v1 4 4\n1 0 1 3 1 4 6 6\n"
        with pytest.raises(FormatError, match="cover"):
            deserialize(text)

    def test_counts_must_partition(self, rng):
        tree = two_branch_tree(random_matrix(rng, 10, 10))
        lines = tree.serialize().splitlines()
        fields = lines[1].split()
        fields[6] = str(int(fields[6]) + 1)
        broken = "\n".join([lines[0], " ".join(fields)] + lines[2:]) + "\n"
        with pytest.raises(FormatError):
            deserialize(broken)


class TestTransposed:
    def test_roundtrip(self, rng):
        tree = two_branch_tree(random_matrix(rng, 10, 10))
        flipped = tree.transposed()
        assert flipped.transposed() == tree
        ids = tree.post_order_ids()
        flipped_ids = flipped.post_order_ids()
        assert sorted(ids.values()) == sorted(flipped_ids.values())
