import logging
import random
from itertools import combinations
from math import comb

import networkx as nx
import pytest

from bdtrees.occurrences import (
    OccurrenceTable, brute_force_occurrences, merge_tables, occurrence_distribution, occurrences,
    occurrences_containing_root, occurrences_spanning_join,
)
from bdtrees.trees import FreeTree, RootedTree, enumerate_trees, join, parse_tree, truncate_depth, diameter

from conftest import tree


def _nx_count(H, T):
    # independent oracle: induced connected subgraphs isomorphic to H via networkx
    G = nx.Graph()
    G.add_nodes_from(range(T.n))
    G.add_edges_from(T.edges())
    Hg = nx.Graph()
    Hg.add_nodes_from(range(H.n))
    Hg.add_edges_from(H.edges())
    return sum(1 for S in combinations(range(T.n), H.n)
               if nx.is_connected(G.subgraph(S)) and nx.is_isomorphic(G.subgraph(S), Hg))


def _random_tree(rng, n, delta=None):
    while True:
        T = FreeTree.from_parents([rng.randrange(i + 1) for i in range(n - 1)])
        if delta is None or T.max_degree() <= delta:
            return T


def test_occurrence_examples(small_trees):
    s = small_trees
    T = s["spider"]
    assert occurrences(s["K1"], T) == T.n
    assert occurrences(s["P3"], s["K13"]) == 3
    assert occurrences(s["P4"], s["K13"]) == 0
    assert occurrences(s["K2"], T) == T.n - 1


def test_occurrences_against_networkx_oracle(small_trees):
    rng = random.Random(11)
    patterns = [small_trees[k] for k in ("K2", "P3", "P4", "K13", "P5", "spider")]
    for _ in range(40):
        T = _random_tree(rng, rng.randint(1, 10))
        for H in patterns:
            expected = _nx_count(H, T)
            assert occurrences(H, T) == expected
            assert brute_force_occurrences(H, T) == expected


def test_root_examples(small_trees):
    s = small_trees
    star = s["K13"]
    assert occurrences_containing_root(s["P3"], RootedTree(star, 0)) == 3
    assert occurrences_containing_root(s["P3"], RootedTree(star, 1)) == 2
    t = parse_tree("0 0 1 1 3")
    assert occurrences_containing_root(s["K2"], t) == 2


def test_spanning_join_examples(small_trees):
    P3 = small_trees["P3"]
    k1 = RootedTree(tree(""), 0, True)
    k2 = RootedTree(tree("0"), 0, True)
    assert occurrences_spanning_join(P3, k1, k1) == 0
    assert occurrences_spanning_join(P3, k2, k1) == 1
    assert occurrences_spanning_join(P3, k2, k2) == 2


def _subtrees_under_root(t):
    kids = t.children()
    par = t.parents()
    out = []
    for c in kids[t.root]:
        keep = [c]
        i = 0
        while i < len(keep):
            keep.extend(kids[keep[i]])
            i += 1
        idx = {v: j for j, v in enumerate(keep)}
        out.append(FreeTree.from_parents([idx[par[v]] for v in keep[1:]]))
    return out


def test_root_decomposition_and_truncation(small_trees):
    rng = random.Random(13)
    for _ in range(200):
        T = _random_tree(rng, rng.randint(1, 14), 4)
        t = RootedTree(T, rng.randrange(T.n))
        for name in ("K2", "P3", "P4", "K13"):
            H = small_trees[name]
            root = occurrences_containing_root(H, t)
            assert occurrences(H, T) == root + sum(occurrences(H, c) for c in _subtrees_under_root(t))
            assert root == occurrences_containing_root(H, truncate_depth(t, diameter(H)))


def test_join_decomposition(small_trees):
    rng = random.Random(17)
    for _ in range(100):
        a = RootedTree(_random_tree(rng, rng.randint(1, 7)), 0, True)
        b = RootedTree(_random_tree(rng, rng.randint(1, 7)), 0, True)
        J, _, _ = join(a, b)
        for name in ("P3", "P4", "K13", "spider"):
            H = small_trees[name]
            assert occurrences(H, J) == occurrences(H, a.tree) + occurrences(H, b.tree) + \
                occurrences_spanning_join(H, a, b)


def test_p3_zagreb_identity():
    P3 = tree("0 1")
    for n in range(1, 13):
        for T in enumerate_trees("free", n, 4):
            D = sum(d * d for d in T.degrees())
            assert occurrences(P3, T) == sum(comb(d, 2) for d in T.degrees())
            assert 2 * occurrences(P3, T) == D - 2 * n + 2


def test_pattern_mode():
    P3 = tree("0 1")
    # in K_{1,3} the middle vertex of every P3 has host degree 3, not 2
    assert occurrences(P3, tree("0 0 0"), pattern=True) == 0
    assert occurrences(P3, tree("0 1 2"), pattern=True) == 2


def test_distribution_examples(caplog):
    P3, K2 = tree("0 1"), tree("0")
    assert occurrence_distribution("free", 4, 4, P3).counts == {2: 1, 3: 1}
    for n in range(2, 9):
        table = occurrence_distribution("free", n, 4, K2)
        assert table.counts == {n - 1: table.total}
    with caplog.at_level(logging.WARNING):
        assert occurrence_distribution("free", 5, 3, tree("0 0 0 0")).counts == {0: 2}
    assert "degree" in caplog.text


def test_distribution_matches_direct_counts():
    H = tree("0 1 2")
    for kind in ("free", "rooted", "planted"):
        direct = {}
        for T in enumerate_trees(kind, 9, 4):
            k = occurrences(H, T)
            direct[k] = direct.get(k, 0) + 1
        assert occurrence_distribution(kind, 9, 4, H).counts == dict(sorted(direct.items()))


def test_table_csv_round_trip_and_merge():
    t = occurrence_distribution("free", 7, 4, tree("0 1"))
    back = OccurrenceTable.from_csv(t.to_csv())
    assert back.counts == t.counts and back.n == 7 and back.subtree == "0 1"
    assert t.to_csv().splitlines()[0] == "n,delta,subtree,k,count"
    halves = [OccurrenceTable(7, 4, "0 1", {5: 1}), OccurrenceTable(7, 4, "0 1", {5: 2, 6: 1})]
    assert merge_tables(halves).counts == {5: 3, 6: 1}
