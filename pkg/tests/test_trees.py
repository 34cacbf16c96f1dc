import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfcorr.trees import (
    ParseTree,
    parse_bracketed,
    read_bracketed_file,
    serialize_tree,
    ted,
    ted_normalized,
    tree_height,
    tree_size,
)

from oracles import random_tree, zhang_shasha_ted


class TestParseBracketed:
    def test_single_node(self):
        tree = parse_bracketed("(A)")
        assert tree == ParseTree("A")
        assert tree_size(tree) == 1
        assert tree_height(tree) == 1

    def test_two_leaf_children(self):
        tree = parse_bracketed("(A (B) (C))")
        assert tree.label == "A"
        assert [c.label for c in tree.children] == ["B", "C"]
        assert tree_size(tree) == 3
        assert tree_height(tree) == 2

    def test_chain(self):
        tree = parse_bracketed("(A (B (C)))")
        assert tree_height(tree) == 3

    def test_bare_terminals(self):
        tree = parse_bracketed("(NP (DT a) (NN cat))")
        assert tree.children[0].children[0] == ParseTree("a")
        assert tree_size(tree) == 5

    def test_empty_input(self):
        with pytest.raises(ValueError, match="empty input"):
            parse_bracketed("   ")

    def test_unbalanced(self):
        with pytest.raises(ValueError, match="unbalanced"):
            parse_bracketed("(A (B)")

    def test_multiple_roots(self):
        with pytest.raises(ValueError, match="multiple roots"):
            parse_bracketed("(A) (B)")

    def test_label_missing(self):
        with pytest.raises(ValueError, match="label"):
            parse_bracketed("(())")

    def test_read_file(self, tmp_path):
        path = tmp_path / "trees.txt"
        path.write_text("(A (B) (C))\n\n(D)\n", encoding="utf-8")
        trees = read_bracketed_file(path)
        assert len(trees) == 2
        assert trees[1] == ParseTree("D")

    def test_read_file_reports_line(self, tmp_path):
        path = tmp_path / "trees.txt"
        path.write_text("(A)\n(B ( )\n", encoding="utf-8")
        with pytest.raises(ValueError, match=":2"):
            read_bracketed_file(path)


@st.composite
def trees(draw, max_nodes=8):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    n = draw(st.integers(min_value=1, max_value=max_nodes))
    return random_tree(np.random.default_rng(seed), n)


class TestSerialization:
    @given(trees())
    @settings(max_examples=200, deadline=None)
    def test_parse_serialize_roundtrip(self, tree):
        assert parse_bracketed(serialize_tree(tree)) == tree


class TestTed:
    def test_identity(self):
        tree = parse_bracketed("(A (B (C) (D)) (E))")
        assert ted(tree, tree) == 0

    def test_single_relabel(self):
        assert ted(ParseTree("A"), ParseTree("B")) == 1

    def test_known_insert(self):
        assert ted(parse_bracketed("(A (B))"), parse_bracketed("(A (B) (C))")) == 1

    @given(trees(), trees())
    @settings(max_examples=400, deadline=None)
    def test_matches_reference(self, a, b):
        assert ted(a, b) == zhang_shasha_ted(a, b)

    @given(trees(max_nodes=6), trees(max_nodes=6), trees(max_nodes=6))
    @settings(max_examples=100, deadline=None)
    def test_metric_axioms(self, a, b, c):
        assert ted(a, a) == 0
        assert ted(a, b) == ted(b, a)
        assert ted(a, c) <= ted(a, b) + ted(b, c)


class TestTedNormalized:
    def test_identical_leaves(self):
        assert ted_normalized(ParseTree("A"), ParseTree("A")) == 0.0

    def test_relabel_only(self):
        assert ted_normalized(ParseTree("A"), ParseTree("B")) == 1.0

    @given(trees(), trees())
    @settings(max_examples=200, deadline=None)
    def test_unit_interval(self, a, b):
        assert 0.0 <= ted_normalized(a, b) <= 1.0
