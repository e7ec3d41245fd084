import random
from itertools import product

import networkx as nx
import pytest

from bdtrees.counting import counting_series
from bdtrees.trees import (
    FreeTree, ParseError, RootedTree, TreeError, canonical_code, count_trees, diameter, enumerate_codes,
    enumerate_trees, format_tree, parse_tree, relabel_random, truncate_depth,
)

from conftest import tree


def test_parse_examples():
    assert parse_tree("").n == 1
    star = parse_tree("0 0 0")
    assert star.root == 0 and star.tree.degrees() == [3, 1, 1, 1]
    path = parse_tree("0 1 2")
    assert path.tree.degrees() == [1, 2, 2, 1]


@pytest.mark.parametrize("text,pos", [("0 2", 1), ("0 -1", 1), ("0 a", 1), ("1", 0)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_tree(text)
    assert err.value.position == pos


@pytest.mark.parametrize("text", ["", "0", "0 0 0", "0 1 2", "0 0 1 1 2 4"])
def test_format_round_trip(text):
    assert format_tree(parse_tree(text)) == text


def test_invalid_adjacency_rejected():
    with pytest.raises(TreeError):
        FreeTree(3, ((1,), (0,), ()))
    with pytest.raises(TreeError):
        FreeTree(2, ((0,), ()))


def test_canonical_code_examples():
    p4 = parse_tree("0 1 2")
    rng = random.Random(1)
    relabeled, perm = relabel_random(p4.tree, rng)
    assert canonical_code(p4.tree) == canonical_code(relabeled)
    assert canonical_code(tree("0 1 2")) != canonical_code(tree("0 0 0"))
    star = tree("0 0 0")
    assert canonical_code(RootedTree(star, 0)) != canonical_code(RootedTree(star, 1))


def _random_tree(rng, n):
    return FreeTree.from_parents([rng.randrange(i + 1) for i in range(n - 1)])


def test_canonical_code_relabel_invariance():
    rng = random.Random(7)
    for _ in range(1000):
        T = _random_tree(rng, rng.randint(1, 12))
        R, perm = relabel_random(T, rng)
        assert canonical_code(T) == canonical_code(R)
        root = rng.randrange(T.n)
        assert canonical_code(RootedTree(T, root)) == canonical_code(RootedTree(R, perm[root]))


def test_canonical_code_separates_nonisomorphic():
    trees = list(enumerate_trees("free", 9, 4))
    graphs = [nx.Graph(T.edges()) for T in trees]
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            assert not nx.is_isomorphic(graphs[i], graphs[j])


def test_enumeration_examples():
    assert len(list(enumerate_trees("free", 4, 4))) == 2
    assert len(list(enumerate_trees("free", 4, 2))) == 1
    assert len(list(enumerate_trees("rooted", 4, 3))) == 4


def _prufer_free_count(n, delta):
    # labeled trees from Prufer sequences, bucketed by canonical free code
    codes = set()
    for seq in product(range(n), repeat=n - 2):
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        if max(degree) > delta:
            continue
        edges = []
        deg = degree[:]
        for v in seq:
            leaf = min(i for i in range(n) if deg[i] == 1)
            edges.append((leaf, v))
            deg[leaf] -= 1
            deg[v] -= 1
        u, w = [i for i in range(n) if deg[i] == 1]
        edges.append((u, w))
        codes.add(canonical_code(FreeTree.from_edges(n, edges)))
    return len(codes)


def test_free_seven_vertices_against_prufer_oracle():
    assert count_trees("free", 7, 4) == 9 == _prufer_free_count(7, 4)


def test_enumeration_sorted_and_degree_bounded():
    for kind in ("free", "rooted", "planted"):
        for delta in (3, 4):
            codes = enumerate_codes(kind, 9, delta)
            assert codes == sorted(set(codes))
            for T in enumerate_trees(kind, 9, delta):
                rt = T if isinstance(T, RootedTree) else RootedTree(T, 0)
                assert rt.tree.max_degree() <= delta
                if kind == "planted":
                    assert rt.root_children_count() <= delta - 1


@pytest.mark.parametrize("delta,nmax", [(3, 14), (4, 14)])
def test_enumeration_matches_counting_series(delta, nmax):
    b = counting_series(delta, nmax)
    for kind, s in (("planted", b.p), ("rooted", b.r), ("free", b.t)):
        assert [count_trees(kind, n, delta) for n in range(1, nmax + 1)] == list(s.coeffs[1:])


def test_truncate_depth_examples_and_composition():
    p4 = parse_tree("0 1 2")
    assert canonical_code(truncate_depth(p4, 2)) == canonical_code(parse_tree("0 1"))
    star = parse_tree("0 0 0")
    assert truncate_depth(star, 1) is star
    assert truncate_depth(p4, 0).n == 1
    rng = random.Random(3)
    for _ in range(100):
        t = RootedTree(_random_tree(rng, rng.randint(1, 14)), 0)
        a, b = rng.randint(0, 5), rng.randint(0, 5)
        assert canonical_code(truncate_depth(truncate_depth(t, a), b)) == \
            canonical_code(truncate_depth(t, min(a, b)))


def test_diameter_examples():
    assert diameter(tree("")) == 0
    assert diameter(tree("0 0 0")) == 2
    assert diameter(tree("0 1 2")) == 3
    rng = random.Random(5)
    for _ in range(50):
        T = _random_tree(rng, rng.randint(2, 14))
        assert diameter(T) == nx.diameter(nx.Graph(T.edges()))
