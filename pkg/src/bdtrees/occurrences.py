"""Exact subtree occurrence counting in explicit trees.

An occurrence of ``H`` in ``T`` is a vertex subset ``S`` of ``T`` whose
induced subgraph is connected and isomorphic to ``H``.  Subsets are counted,
not embeddings, so automorphisms of ``H`` never multiply the count.
"""

from __future__ import annotations

import csv
import io
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .trees import (
    FreeTree, Kind, RootedTree, canonical_code, centers, code_parents, enumerate_codes, format_tree, join,
    code_children, rooted_code, tree_from_code,
)

log = logging.getLogger(__name__)


class _Target:
    """Precomputed invariants of the pattern tree ``H``."""

    def __init__(self, H: FreeTree):
        self.H = H
        self.k = H.n
        self.code = canonical_code(H)
        self.degseq = tuple(sorted(H.degrees()))
        self.max_degree = max(self.degseq) if self.k > 1 else 0
        # up to 5 vertices the degree sequence already determines the tree
        self.need_code = self.k > 5


def _as_free(H) -> FreeTree:
    return H.tree if isinstance(H, RootedTree) else H


def _connected_subsets(adj, k: int, anchor: int | None = None, allowed=None) -> Iterator[frozenset]:
    """Connected ``k``-subsets, each exactly once (ESU enumeration).

    With ``anchor`` only subsets containing that vertex are produced.
    """
    n = len(adj)
    starts = range(n) if anchor is None else [anchor]
    for v in starts:
        if anchor is None:
            rank = lambda w, v=v: w > v  # noqa: E731
        else:
            rank = lambda w, v=v: w != v  # noqa: E731
        yield from _extend(adj, {v}, [w for w in adj[v] if rank(w)], rank, k, {v} | set(adj[v]))


def _extend(adj, sub, ext, rank, k, closed_nbhd):
    if len(sub) == k:
        yield frozenset(sub)
        return
    ext = list(ext)
    while ext:
        w = ext.pop()
        new_ext = list(ext)
        added = []
        for z in adj[w]:
            if z not in closed_nbhd and rank(z):
                new_ext.append(z)
                added.append(z)
        sub.add(w)
        closed_nbhd.update(added)
        yield from _extend(adj, sub, new_ext, rank, k, closed_nbhd)
        sub.discard(w)
        closed_nbhd.difference_update(added)


def _matches(adj, S: frozenset, target: _Target, pattern: bool) -> bool:
    degs = {v: sum(1 for w in adj[v] if w in S) for v in S}
    if tuple(sorted(degs.values())) != target.degseq:
        return False
    if pattern:
        for v, d in degs.items():
            if d != 1 and len(adj[v]) != d:
                return False
    if not target.need_code:
        return True
    sub = {v: [w for w in adj[v] if w in S] for v in S}
    return _subset_free_code(sub) == target.code


def _subset_free_code(sub: dict[int, list[int]]) -> tuple:
    verts = sorted(sub)
    idx = {v: i for i, v in enumerate(verts)}
    small = FreeTree(len(verts), tuple(tuple(sorted(idx[w] for w in sub[v])) for v in verts))
    return min(rooted_code(small.adjacency, c) for c in centers(small))


def _count_esu(adj, target: _Target, anchor=None, must_contain=(), pattern=False) -> int:
    if target.k > len(adj):
        return 0
    if target.k > 1 and target.max_degree > max(len(a) for a in adj):
        return 0
    total = 0
    for S in _connected_subsets(adj, target.k, anchor):
        if any(v not in S for v in must_contain):
            continue
        if _matches(adj, S, target, pattern):
            total += 1
    return total


def _topped_shapes(adj, root: int, k: int, max_children: int):
    """For every vertex ``v``: rooted code -> number of connected subsets whose top is ``v``.

    "Top" is the vertex of the subset closest to ``root``.  Only subsets of at
    most ``k`` vertices whose vertices have at most ``max_children`` children
    inside the subset are tracked.
    """
    order = []
    par = {root: -1}
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for w in adj[v]:
            if w != par[v]:
                par[w] = v
                stack.append(w)
    table: dict[int, dict] = {}
    for v in reversed(order):
        # partial states: sorted tuple of chosen child codes -> (size, count)
        states = {(): 1}
        sizes = {(): 1}
        for w in adj[v]:
            if w == par[v]:
                continue
            child = table[w]
            new = dict(states)
            for ms, cnt in states.items():
                if len(ms) >= max_children:
                    continue
                base = sizes[ms]
                for code, cc in child.items():
                    s = base + len(code) // 2
                    if s > k:
                        continue
                    key = tuple(sorted(ms + (code,), reverse=True))
                    new[key] = new.get(key, 0) + cnt * cc
                    sizes[key] = s
            states = new
        out: dict = {}
        for ms, cnt in states.items():
            code = (1,) + tuple(x for c in ms for x in c) + (0,)
            out[code] = out.get(code, 0) + cnt
        table[v] = out
    return table


@lru_cache(maxsize=256)
def _rootings(code: tuple) -> frozenset:
    H = tree_from_code(code).tree
    return frozenset(rooted_code(H.adjacency, r) for r in range(H.n))


def _count(adj, target: _Target, anchor=None, must_contain=(), pattern=False) -> int:
    if pattern:
        return _count_esu(adj, target, anchor, must_contain, pattern)
    if target.k > len(adj):
        return 0
    if target.k > 1 and target.max_degree > max(len(a) for a in adj):
        return 0
    rootings = _rootings(target.code)
    root = 0 if anchor is None else anchor
    table = _topped_shapes(adj, root, target.k, max(target.max_degree, 1))
    if anchor is None:
        return sum(cnt for d in table.values() for code, cnt in d.items() if code in rootings)
    total = sum(cnt for code, cnt in table[root].items() if code in rootings)
    for v in must_contain:
        # subtract root-topped copies that avoid the branch holding v
        if v == root:
            continue
        branch = _branch_child(adj, root, v)
        reduced = [tuple(w for w in nb if not (x == root and w == branch)) for x, nb in enumerate(adj)]
        t2 = _topped_shapes(reduced, root, target.k, max(target.max_degree, 1))
        total -= sum(cnt for code, cnt in t2[root].items() if code in rootings)
    return total


def _branch_child(adj, root, v):
    par = {root: -1}
    stack = [root]
    while stack:
        x = stack.pop()
        for w in adj[x]:
            if w != par[x]:
                par[w] = x
                stack.append(w)
    while par[v] != root:
        v = par[v]
    return v


def occurrences(H: FreeTree, T: FreeTree | RootedTree, pattern: bool = False) -> int:
    """Number of vertex subsets of ``T`` inducing a copy of ``H``.

    With ``pattern=True`` every vertex of the copy that is internal in ``H``
    (degree other than 1) must also have that exact degree in ``T``.
    """
    return _count(_as_free(T).adjacency, _Target(_as_free(H)), pattern=pattern)


def occurrences_containing_root(H: FreeTree, t: RootedTree, pattern: bool = False) -> int:
    return _count(t.tree.adjacency, _Target(_as_free(H)), anchor=t.root, pattern=pattern)


def occurrences_spanning_join(H: FreeTree, a: RootedTree, b: RootedTree) -> int:
    """Occurrences in ``join(a, b)`` meeting both sides, i.e. using the join edge."""
    joined, ra, rb = join(a, b)
    return _count(joined.adjacency, _Target(_as_free(H)), anchor=ra, must_contain=(rb,))


def brute_force_occurrences(H: FreeTree, T: FreeTree) -> int:
    """Reference count over all ``|H|``-subsets; exponential, for testing."""
    from itertools import combinations

    adj = T.adjacency
    hcode = canonical_code(H)
    total = 0
    for S in combinations(range(T.n), H.n):
        Sset = set(S)
        sub = {v: [w for w in adj[v] if w in Sset] for v in S}
        if sum(len(x) for x in sub.values()) != 2 * (H.n - 1):
            continue
        # connectivity
        seen = {S[0]}
        stack = [S[0]]
        while stack:
            for w in sub[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == H.n and _subset_free_code(sub) == hcode:
            total += 1
    return total


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OccurrenceTable:
    n: int
    delta: int
    subtree: str
    counts: dict[int, int] = field(default_factory=dict)
    kind: str = "free"

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def rows(self) -> list[dict]:
        return [{"n": self.n, "delta": self.delta, "subtree": self.subtree, "k": k, "count": c}
                for k, c in sorted(self.counts.items())]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["n", "delta", "subtree", "k", "count"], lineterminator="\n")
        w.writeheader()
        w.writerows(self.rows())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "OccurrenceTable":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty occurrence table")
        n, delta, sub = int(rows[0]["n"]), int(rows[0]["delta"]), rows[0]["subtree"]
        return cls(n, delta, sub, {int(r["k"]): int(r["count"]) for r in rows})


def merge_tables(tables: Iterable[OccurrenceTable]) -> OccurrenceTable:
    tables = list(tables)
    c: Counter = Counter()
    for t in tables:
        c.update(t.counts)
    first = tables[0]
    return OccurrenceTable(first.n, first.delta, first.subtree, dict(sorted(c.items())), first.kind)


class _CodeCounter:
    """Occurrence counts for trees given by rooted codes, memoised on subtrees.

    Trees in one enumeration share most of their subtrees, so caching the
    topped-shape table of every subtree code makes whole-class sweeps cheap.
    """

    def __init__(self, target: _Target):
        self.k = target.k
        self.max_children = max(target.max_degree, 1)
        self.rootings = _rootings(target.code)
        self._topped: dict = {}
        self._total: dict = {}

    def topped(self, code):
        hit = self._topped.get(code)
        if hit is not None:
            return hit
        k = self.k
        states = {(): 1}
        sizes = {(): 1}
        for child in code_children(code):
            ctab = self.topped(child)
            new = dict(states)
            for ms, cnt in states.items():
                if len(ms) >= self.max_children:
                    continue
                base = sizes[ms]
                for c, cc in ctab.items():
                    s = base + len(c) // 2
                    if s > k:
                        continue
                    key = tuple(sorted(ms + (c,), reverse=True))
                    new[key] = new.get(key, 0) + cnt * cc
                    sizes[key] = s
            states = new
        out: dict = {}
        for ms, cnt in states.items():
            c = (1,) + tuple(x for m in ms for x in m) + (0,)
            out[c] = out.get(c, 0) + cnt
        self._topped[code] = out
        return out

    def at_root(self, code) -> int:
        return sum(cnt for c, cnt in self.topped(code).items() if c in self.rootings)

    def total(self, code) -> int:
        hit = self._total.get(code)
        if hit is None:
            hit = self.at_root(code) + sum(self.total(ch) for ch in code_children(code))
            self._total[code] = hit
        return hit


def _adj_from_parents(parents) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(len(parents) + 1)]
    for i, p in enumerate(parents):
        adj[p].append(i + 1)
        adj[i + 1].append(p)
    return adj


def occurrence_distribution(kind: Kind, n: int, delta: int, H: FreeTree, pattern: bool = False) -> OccurrenceTable:
    H = _as_free(H)
    target = _Target(H)
    if H.n > 1 and target.max_degree > delta:
        log.warning("H has a vertex of degree %d > delta=%d; every tree has 0 occurrences",
                    target.max_degree, delta)
    counts: Counter = Counter()
    if pattern:
        for code in enumerate_codes(kind, n, delta):
            counts[_count(_adj_from_parents(code_parents(code)), target, pattern=True)] += 1
    else:
        memo = _CodeCounter(target)
        for code in enumerate_codes(kind, n, delta):
            counts[memo.total(code)] += 1
    return OccurrenceTable(n, delta, format_tree(RootedTree(H, 0)), dict(sorted(counts.items())), kind)
