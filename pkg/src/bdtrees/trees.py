"""Free, rooted and planted trees: parsing, canonical codes, enumeration.

Trees are small immutable values.  The text format is a parent array:
space-separated integers ``p_1 ... p_{n-1}`` with ``p_i < i``, vertex 0 being
the root; the empty string is the single vertex.

Canonical codes are AHU-style parenthesis words (1 = open, 0 = close) with
children sorted by non-increasing code.  The free code of a tree is the
minimum rooted code over its center vertices.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Iterator, Literal, Sequence, Union

Code = tuple[int, ...]
Kind = Literal["free", "rooted", "planted"]


class TreeError(ValueError):
    pass


class ParseError(TreeError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (token {position})")
        self.position = position


@dataclass(frozen=True)
class FreeTree:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1 or len(self.adjacency) != self.n:
            raise TreeError("adjacency must list neighbours of every vertex")
        edges = 0
        for v, nbrs in enumerate(self.adjacency):
            for w in nbrs:
                if w == v:
                    raise TreeError(f"self-loop at {v}")
                if not 0 <= w < self.n or v not in self.adjacency[w]:
                    raise TreeError(f"asymmetric adjacency {v}-{w}")
            if len(set(nbrs)) != len(nbrs):
                raise TreeError(f"multi-edge at {v}")
            edges += len(nbrs)
        if edges != 2 * (self.n - 1):
            raise TreeError("a tree on n vertices has n-1 edges")
        seen = {0}
        stack = [0]
        while stack:
            for w in self.adjacency[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != self.n:
            raise TreeError("tree is not connected")

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int]]) -> "FreeTree":
        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        return cls(n, tuple(tuple(sorted(x)) for x in adj))

    @classmethod
    def from_parents(cls, parents: Sequence[int]) -> "FreeTree":
        return cls.from_edges(len(parents) + 1, [(p, i + 1) for i, p in enumerate(parents)])

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in range(self.n) for w in self.adjacency[v] if v < w]

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def max_degree(self) -> int:
        return max(self.degrees())


@dataclass(frozen=True)
class RootedTree:
    tree: FreeTree
    root: int = 0
    planted: bool = False

    def __post_init__(self):
        if not 0 <= self.root < self.tree.n:
            raise TreeError("root out of range")

    @property
    def n(self) -> int:
        return self.tree.n

    def parents(self) -> list[int]:
        """Parent of every vertex (``-1`` for the root)."""
        par = [-1] * self.n
        seen = [False] * self.n
        seen[self.root] = True
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for w in self.tree.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    par[w] = v
                    queue.append(w)
        return par

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parents()):
            if p >= 0:
                kids[p].append(v)
        return kids

    def depths(self) -> list[int]:
        return _bfs_dist(self.tree.adjacency, self.root)

    def depth(self) -> int:
        return max(self.depths())

    def root_children_count(self) -> int:
        return len(self.tree.adjacency[self.root])


Tree = Union[FreeTree, RootedTree]


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def parse_tree(text: str, planted: bool = False) -> RootedTree:
    tokens = text.split()
    parents = []
    for i, tok in enumerate(tokens):
        try:
            p = int(tok)
        except ValueError:
            raise ParseError(f"not an integer: {tok!r}", i) from None
        if p < 0:
            raise ParseError(f"negative parent {p}", i)
        if p > i:
            raise ParseError(f"parent {p} of vertex {i + 1} must be smaller than {i + 1}", i)
        parents.append(p)
    return RootedTree(FreeTree.from_parents(parents), 0, planted)


def format_tree(t: Tree) -> str:
    """Parent-array text.  Trees already labelled in parent order round-trip verbatim."""
    if isinstance(t, FreeTree):
        t = RootedTree(t, 0)
    par = t.parents()
    if t.root == 0 and all(par[i] < i for i in range(1, t.n)):
        return " ".join(str(p) for p in par[1:])
    order = _bfs_order(t.tree.adjacency, t.root)
    relabel = {v: i for i, v in enumerate(order)}
    return " ".join(str(relabel[par[v]]) for v in order[1:])


def _bfs_dist(adj, src) -> list[int]:
    dist = [-1] * len(adj)
    dist[src] = 0
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def _bfs_order(adj, src) -> list[int]:
    seen = {src}
    order = [src]
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


# ---------------------------------------------------------------------------
# canonical codes
# ---------------------------------------------------------------------------

def rooted_code(adj, root: int, parent: int = -1) -> Code:
    order = []
    par = {root: parent}
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for w in adj[v]:
            if w != par[v]:
                par[w] = v
                stack.append(w)
    codes: dict[int, Code] = {}
    for v in reversed(order):
        kids = sorted((codes[w] for w in adj[v] if w != par[v]), reverse=True)
        codes[v] = (1,) + tuple(x for c in kids for x in c) + (0,)
    return codes[root]


def centers(t: FreeTree) -> list[int]:
    adj = t.adjacency
    d0 = _bfs_dist(adj, 0)
    a = max(range(t.n), key=lambda v: (d0[v], -v))
    da = _bfs_dist(adj, a)
    b = max(range(t.n), key=lambda v: (da[v], -v))
    db = _bfs_dist(adj, b)
    diam = da[b]
    return sorted(v for v in range(t.n)
                  if da[v] + db[v] == diam and max(da[v], db[v]) == (diam + 1) // 2)


def canonical_code(t: Tree) -> Code:
    """Rooted AHU code for rooted/planted trees, minimal center code for free trees."""
    if isinstance(t, RootedTree):
        return rooted_code(t.tree.adjacency, t.root)
    return min(rooted_code(t.adjacency, c) for c in centers(t))


def code_parents(code: Code) -> list[int]:
    """Decode a parenthesis code into a parent array (preorder labels)."""
    parents: list[int] = []
    stack: list[int] = []
    nxt = 0
    for sym in code:
        if sym == 1:
            if stack:
                parents.append(stack[-1])
            stack.append(nxt)
            nxt += 1
        else:
            stack.pop()
    return parents


def tree_from_code(code: Code, planted: bool = False) -> RootedTree:
    return RootedTree(FreeTree.from_parents(code_parents(code)), 0, planted)


def code_children(code: Code) -> list[Code]:
    """Top-level child codes of a rooted code."""
    out = []
    depth = 0
    start = 1
    for i in range(1, len(code) - 1):
        depth += 1 if code[i] == 1 else -1
        if depth == 0:
            out.append(code[start:i + 1])
            start = i + 1
    return out


def code_from_children(children) -> Code:
    kids = sorted(children, reverse=True)
    return (1,) + tuple(x for c in kids for x in c) + (0,)


def code_height(code: Code) -> int:
    h = d = 0
    for sym in code:
        d += 1 if sym == 1 else -1
        h = max(h, d)
    return h - 1


def code_size(code: Code) -> int:
    return len(code) // 2


# ---------------------------------------------------------------------------
# depth truncation and diameter
# ---------------------------------------------------------------------------

def truncate_depth(t: RootedTree, ell: int) -> RootedTree:
    if ell < 0:
        raise TreeError("ell must be non-negative")
    depth = t.depths()
    if max(depth) <= ell:
        return t
    keep = [v for v in _bfs_order(t.tree.adjacency, t.root) if depth[v] <= ell]
    relabel = {v: i for i, v in enumerate(keep)}
    par = t.parents()
    parents = [relabel[par[v]] for v in keep[1:]]
    return RootedTree(FreeTree.from_parents(parents), 0, t.planted)


def truncate_code(code: Code, ell: int) -> Code:
    """Code of the ``ell``-depth truncation, computed on the code itself."""
    out = []
    d = 0
    for sym in code:
        if sym == 1:
            d += 1
            if d <= ell + 1:
                out.append(1)
        else:
            if d <= ell + 1:
                out.append(0)
            d -= 1
    # truncation can reorder siblings; re-canonicalise
    return rooted_code_from_parents(code_parents(tuple(out)))


def rooted_code_from_parents(parents: Sequence[int]) -> Code:
    n = len(parents) + 1
    kids: list[list[int]] = [[] for _ in range(n)]
    for i, p in enumerate(parents):
        kids[p].append(i + 1)
    codes: list[Code] = [()] * n
    for v in range(n - 1, -1, -1):
        codes[v] = code_from_children([codes[w] for w in kids[v]])
    return codes[0]


def diameter(t: Tree) -> int:
    adj = t.tree.adjacency if isinstance(t, RootedTree) else t.adjacency
    d0 = _bfs_dist(adj, 0)
    a = max(range(len(adj)), key=lambda v: d0[v])
    return max(_bfs_dist(adj, a))


def join(a: RootedTree, b: RootedTree) -> tuple[FreeTree, int, int]:
    """Connect the roots of two planted trees by a new edge.

    Returns the joined tree and the ids of the two former roots.
    """
    na = a.n
    edges = a.tree.edges() + [(v + na, w + na) for v, w in b.tree.edges()]
    edges.append((a.root, b.root + na))
    return FreeTree.from_edges(na + b.n, edges), a.root, b.root + na


def relabel_random(t: FreeTree, rng: random.Random) -> tuple[FreeTree, list[int]]:
    perm = list(range(t.n))
    rng.shuffle(perm)
    return FreeTree.from_edges(t.n, [(perm[v], perm[w]) for v, w in t.edges()]), perm


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _planted_bucket(size: int, delta: int) -> tuple[tuple[Code, int], ...]:
    """Planted trees of ``size`` vertices (every vertex <= delta-1 children), with heights."""
    if size == 1:
        return (((1, 0), 0),)
    out = []
    for kids in _forests(size - 1, delta - 1, delta):
        code = code_from_children([k[0] for k in kids])
        out.append((code, 1 + max(k[1] for k in kids)))
    out.sort()
    return tuple(out)


def _size_partitions(total: int, max_parts: int, largest: int | None = None):
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for s in range(min(total, largest), 0, -1):
        for rest in _size_partitions(total - s, max_parts - 1, s):
            yield (s,) + rest


def _forests(total: int, max_count: int, delta: int):
    """Multisets of planted trees with sizes summing to ``total`` and at most ``max_count`` members."""
    for sizes in _size_partitions(total, max_count):
        groups: dict[int, int] = {}
        for s in sizes:
            groups[s] = groups.get(s, 0) + 1
        choices = [combinations_with_replacement(_planted_bucket(s, delta), m) for s, m in groups.items()]
        for combo in product(*[list(c) for c in choices]):
            yield [k for part in combo for k in part]


def _free_codes(n: int, delta: int) -> list[Code]:
    if n == 1:
        return [(1, 0)]
    out = []
    # one center: at least two children reach the maximal height
    for kids in _forests(n - 1, delta, delta):
        if len(kids) < 2:
            continue
        hs = sorted((k[1] for k in kids), reverse=True)
        if hs[0] == hs[1]:
            out.append(code_from_children([k[0] for k in kids]))
    # two centers: join two planted trees of equal height
    for sa in range(n - 1, 0, -1):
        sb = n - sa
        if sb > sa:
            break
        A = _planted_bucket(sa, delta)
        B = _planted_bucket(sb, delta)
        pairs = combinations_with_replacement(A, 2) if sa == sb else product(A, B)
        for a, b in pairs:
            if a[1] != b[1]:
                continue
            c1 = code_from_children(code_children(a[0]) + [b[0]])
            c2 = code_from_children(code_children(b[0]) + [a[0]])
            out.append(min(c1, c2))
    return out


def enumerate_trees(kind: Kind, n: int, delta: int) -> Iterator[Tree]:
    """One representative per isomorphism class, in increasing canonical-code order."""
    for code in enumerate_codes(kind, n, delta):
        if kind == "free":
            yield tree_from_code(code).tree
        else:
            yield tree_from_code(code, planted=(kind == "planted"))


def enumerate_codes(kind: Kind, n: int, delta: int) -> list[Code]:
    if n < 1:
        raise TreeError("n must be >= 1")
    if delta < 2:
        raise TreeError("delta must be >= 2")
    if kind == "planted":
        return sorted(c for c, _ in _planted_bucket(n, delta))
    if kind == "rooted":
        if n == 1:
            return [(1, 0)]
        return sorted(code_from_children([k[0] for k in kids]) for kids in _forests(n - 1, delta, delta))
    if kind == "free":
        return sorted(_free_codes(n, delta))
    raise TreeError(f"unknown kind {kind!r}")


def count_trees(kind: Kind, n: int, delta: int) -> int:
    return len(enumerate_codes(kind, n, delta))
