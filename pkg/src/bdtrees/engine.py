"""Coefficient-bootstrapping evaluator for implicit series systems.

Systems of the form ``y_i = x * E_i(y)``, where ``E_i`` is built from sums,
products, cycle-index substitutions and ``x -> x^i`` dilations, are solved
one coefficient at a time: coefficient ``n`` of every unknown depends only on
coefficients ``< n``.  Expressions form a DAG of lazily extended coefficient
caches, so shared subexpressions are computed once.

The coefficient of ``x^n`` lives in a pluggable ring:

* :data:`UNI`  -- exact rationals (the ``u = 1`` specialisation),
* :data:`BI`   -- sparse polynomials in ``u`` (dicts ``k -> count``),
* :class:`JetRing` -- truncated Taylor jets in ``eps`` with ``u = 1 + eps``,
  which carry the u-derivatives at ``u = 1`` needed for moments.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import comb
from operator import mul

from .series import cycle_types, _norm

INF = 10 ** 9


# ---------------------------------------------------------------------------
# coefficient rings
# ---------------------------------------------------------------------------

class UniRing:
    name = "uni"
    zero = 0
    one = 1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sum(items):
        return _norm(sum(items))

    @staticmethod
    def scale(a, c):
        return _norm(a * c)

    @staticmethod
    def conv(A, B, lo, hi, j):
        # sum_{i=lo..hi} A[i] * B[j-i]
        if hi < lo:
            return 0
        return _norm(sum(map(mul, A[lo:hi + 1], reversed(B[j - hi:j - lo + 1]))))

    @staticmethod
    def dilate(a, i):
        return a

    @staticmethod
    def ushift(a, k):
        return a

    @staticmethod
    def from_number(c):
        return c

    @staticmethod
    def from_monomial(k):
        return 1

    @staticmethod
    def is_zero(a):
        return a == 0


class BiRing:
    name = "bi"
    zero: dict = {}
    one = {0: 1}

    @staticmethod
    def add(a, b):
        d = dict(a)
        for k, v in b.items():
            d[k] = d.get(k, 0) + v
        return {k: v for k, v in d.items() if v}

    @staticmethod
    def sum(items):
        d: dict = {}
        for a in items:
            for k, v in a.items():
                d[k] = d.get(k, 0) + v
        return {k: _norm(v) for k, v in sorted(d.items()) if v}

    @staticmethod
    def scale(a, c):
        return {k: _norm(v * c) for k, v in a.items() if v * c}

    @staticmethod
    def conv(A, B, lo, hi, j):
        d: dict = {}
        for i in range(lo, hi + 1):
            a = A[i]
            if not a:
                continue
            b = B[j - i]
            if not b:
                continue
            for ka, va in a.items():
                for kb, vb in b.items():
                    d[ka + kb] = d.get(ka + kb, 0) + va * vb
        return {k: _norm(v) for k, v in sorted(d.items()) if v}

    @staticmethod
    def dilate(a, i):
        return {k * i: v for k, v in a.items()}

    @staticmethod
    def ushift(a, k):
        return {e + k: v for e, v in a.items()}

    @staticmethod
    def from_number(c):
        return {0: c} if c else {}

    @staticmethod
    def from_monomial(k):
        return {k: 1}

    @staticmethod
    def is_zero(a):
        return not a


class JetRing:
    """Coefficients ``c_0 + c_1 eps + ... + c_d eps^d`` with ``u = 1 + eps``.

    ``c_r`` of a series coefficient ``sum_k t_k u^k`` equals
    ``sum_k C(k, r) t_k``, the r-th factorial moment.
    """

    def __init__(self, degree: int):
        self.degree = degree
        self.name = f"jet{degree}"
        self.zero = (0,) * (degree + 1)
        self.one = (1,) + (0,) * degree
        # (1+eps)^i - 1 powers, for dilation
        self._dil_cache: dict[int, list[list[int]]] = {}

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sum(self, items):
        acc = [0] * (self.degree + 1)
        for a in items:
            for r, v in enumerate(a):
                acc[r] += v
        return tuple(_norm(v) for v in acc)

    def scale(self, a, c):
        return tuple(_norm(v * c) for v in a)

    def mul(self, a, b):
        d = self.degree
        return tuple(sum(a[s] * b[r - s] for s in range(r + 1)) for r in range(d + 1))

    def conv(self, A, B, lo, hi, j):
        d = self.degree
        if hi < lo:
            return self.zero
        As = A[lo:hi + 1]
        Bs = B[j - hi:j - lo + 1][::-1]
        comps_a = list(zip(*As))
        comps_b = list(zip(*Bs))
        out = []
        for r in range(d + 1):
            acc = 0
            for s in range(r + 1):
                acc += sum(map(mul, comps_a[s], comps_b[r - s]))
            out.append(_norm(acc))
        return tuple(out)

    def _dil(self, i):
        # row r: coefficients of ((1+eps)^i - 1)^r in eps, truncated
        if i not in self._dil_cache:
            d = self.degree
            base = [0] + [comb(i, s) for s in range(1, d + 1)]
            rows = [[1] + [0] * d]
            for _ in range(d):
                prev = rows[-1]
                rows.append([sum(prev[s] * base[t - s] for s in range(t + 1)) for t in range(d + 1)])
            self._dil_cache[i] = rows
        return self._dil_cache[i]

    def dilate(self, a, i):
        if i == 1:
            return a
        rows = self._dil(i)
        d = self.degree
        return tuple(_norm(sum(a[r] * rows[r][t] for r in range(d + 1))) for t in range(d + 1))

    def ushift(self, a, k):
        if k == 0:
            return a
        return self.mul(a, self.from_monomial(k))

    def from_number(self, c):
        return (c,) + (0,) * self.degree

    def from_monomial(self, k):
        return tuple(comb(k, r) for r in range(self.degree + 1))

    def is_zero(self, a):
        return not any(a)


UNI = UniRing()
BI = BiRing()


# ---------------------------------------------------------------------------
# expression nodes
# ---------------------------------------------------------------------------

class Node:
    """Lazily extended coefficient list; ``val`` is a lower bound on the valuation."""

    __slots__ = ("c", "val", "ring")

    def __init__(self, ring, val):
        self.ring = ring
        self.val = val
        self.c = []

    def get(self, j):
        c = self.c
        while len(c) <= j:
            i = len(c)
            c.append(self.ring.zero if i < self.val else self._compute(i))
        return c[j]

    def upto(self, j):
        self.get(j)
        return self.c

    def _compute(self, j):  # pragma: no cover - abstract
        raise NotImplementedError


class Leaf(Node):
    """An unknown; coefficients are appended by the solver."""

    __slots__ = ("label",)

    def __init__(self, ring, val, label=None):
        super().__init__(ring, val)
        self.label = label
        self.c = [ring.zero]

    def get(self, j):
        if j >= len(self.c):
            raise RuntimeError(f"coefficient {j} of unknown {self.label!r} requested before it was solved")
        return self.c[j]

    def _compute(self, j):
        raise RuntimeError("leaf coefficients are set by the solver")


class Known(Node):
    __slots__ = ("data",)

    def __init__(self, ring, data):
        nz = [i for i, v in enumerate(data) if not ring.is_zero(v)]
        super().__init__(ring, nz[0] if nz else INF)
        self.data = list(data)

    def _compute(self, j):
        return self.data[j] if j < len(self.data) else self.ring.zero


class Sum(Node):
    __slots__ = ("terms",)

    def __init__(self, ring, terms):
        super().__init__(ring, min((t.val for t in terms), default=INF))
        self.terms = terms

    def _compute(self, j):
        return self.ring.sum([t.get(j) for t in self.terms if t.val <= j])


class Prod(Node):
    __slots__ = ("a", "b")

    def __init__(self, ring, a, b):
        super().__init__(ring, min(a.val + b.val, INF))
        self.a, self.b = a, b

    def _compute(self, j):
        a, b = self.a, self.b
        lo, hi = a.val, j - b.val
        if hi < lo:
            return self.ring.zero
        A = a.upto(hi)
        B = b.upto(j - lo)
        return self.ring.conv(A, B, lo, hi, j)


class Dilate(Node):
    __slots__ = ("a", "i")

    def __init__(self, ring, a, i):
        super().__init__(ring, min(a.val * i, INF))
        self.a, self.i = a, i

    def _compute(self, j):
        if j % self.i:
            return self.ring.zero
        return self.ring.dilate(self.a.get(j // self.i), self.i)


class Scale(Node):
    __slots__ = ("a", "k")

    def __init__(self, ring, a, k):
        super().__init__(ring, a.val)
        self.a, self.k = a, k

    def _compute(self, j):
        return self.ring.scale(self.a.get(j), self.k)


class Shift(Node):
    """Multiply by ``x^s u^k``."""

    __slots__ = ("a", "s", "k")

    def __init__(self, ring, a, s, k):
        super().__init__(ring, min(a.val + s, INF))
        self.a, self.s, self.k = a, s, k

    def _compute(self, j):
        return self.ring.ushift(self.a.get(j - self.s), self.k)


class Builder:
    """Factory for expression nodes with structural sharing and zero pruning.

    Any node whose valuation exceeds ``order`` is replaced by the shared zero
    node, which keeps large but mostly out-of-range systems cheap.
    """

    def __init__(self, ring, order: int):
        self.ring = ring
        self.order = order
        self._memo: dict = {}
        self.zero_node = Known(ring, [])
        self.one_node = Known(ring, [ring.one])

    def _z(self, node):
        return self.zero_node if node.val > self.order else node

    def leaf(self, val, label=None):
        return self._z(Leaf(self.ring, val, label))

    def known(self, data):
        return self._z(Known(self.ring, data))

    def monomial(self, n, k=0, coeff=1):
        if n > self.order:
            return self.zero_node
        key = ("mono", n, k, coeff)
        if key not in self._memo:
            data = [self.ring.zero] * n + [self.ring.scale(self.ring.from_monomial(k), coeff)]
            self._memo[key] = Known(self.ring, data)
        return self._memo[key]

    def sum(self, terms):
        terms = [t for t in terms if t is not self.zero_node]
        if not terms:
            return self.zero_node
        if len(terms) == 1:
            return terms[0]
        key = ("sum",) + tuple(sorted(id(t) for t in terms))
        if key not in self._memo:
            self._memo[key] = Sum(self.ring, terms)
        return self._memo[key]

    def prod(self, a, b):
        if a is self.zero_node or b is self.zero_node:
            return self.zero_node
        if a is self.one_node:
            return b
        if b is self.one_node:
            return a
        if a.val + b.val > self.order:
            return self.zero_node
        key = ("prod",) + tuple(sorted((id(a), id(b))))
        if key not in self._memo:
            self._memo[key] = Prod(self.ring, a, b)
        return self._memo[key]

    def product(self, factors):
        out = self.one_node
        for f in factors:
            out = self.prod(out, f)
        return out

    def power(self, a, c):
        if c == 0:
            return self.one_node
        key = ("pow", id(a), c)
        if key not in self._memo:
            half = self.power(a, c // 2)
            sq = self.prod(half, half)
            self._memo[key] = self.prod(sq, a) if c % 2 else sq
        return self._memo[key]

    def dilate(self, a, i):
        if i == 1 or a is self.zero_node:
            return a
        if a.val * i > self.order:
            return self.zero_node
        key = ("dil", id(a), i)
        if key not in self._memo:
            self._memo[key] = Dilate(self.ring, a, i)
        return self._memo[key]

    def scale(self, a, k):
        if k == 1 or a is self.zero_node:
            return a
        if k == 0:
            return self.zero_node
        key = ("scale", id(a), k)
        if key not in self._memo:
            self._memo[key] = Scale(self.ring, a, k)
        return self._memo[key]

    def shift(self, a, s=0, k=0):
        if a is self.zero_node:
            return a
        if s == 0 and k == 0:
            return a
        if a.val + s > self.order:
            return self.zero_node
        key = ("shift", id(a), s, k)
        if key not in self._memo:
            self._memo[key] = Shift(self.ring, a, s, k)
        return self._memo[key]

    def cycle_index(self, m, a):
        """Node for ``Z(S_m; a)``."""
        if m == 0:
            return self.one_node
        key = ("Z", id(a), m)
        if key not in self._memo:
            terms = []
            for ctype, count in cycle_types(m):
                factors = [self.power(self.dilate(a, i), c) for i, c in ctype]
                terms.append(self.scale(self.product(factors), count))
            self._memo[key] = self.scale(self.sum(terms), Fraction(1, math.factorial(m)))
        return self._memo[key]

    def cycle_index_ds1(self, m, a, da):
        """Node for the ``s_1``-directional derivative of ``Z(S_m; a)`` along ``da``.

        Obtained by differentiating each monomial ``prod s_i^{c_i}`` of the
        cycle index in ``s_1``; dilated slots are held fixed.
        """
        if m == 0:
            return self.zero_node
        terms = []
        for ctype, count in cycle_types(m):
            mult = dict(ctype)
            c1 = mult.get(1, 0)
            if c1 == 0:
                continue
            factors = [self.power(a, c1 - 1), da]
            factors += [self.power(self.dilate(a, i), c) for i, c in ctype if i != 1]
            terms.append(self.scale(self.product(factors), count * c1))
        return self.scale(self.sum(terms), Fraction(1, math.factorial(m)))


def bootstrap(leaves, exprs, order):
    """Solve ``leaf_i = x * exprs[i]`` coefficient by coefficient up to ``order``.

    ``exprs[i]`` may reference any of the leaves.  Leaves that were pruned to
    the zero node are skipped.
    """
    pairs = [(lf, ex) for lf, ex in zip(leaves, exprs) if isinstance(lf, Leaf)]
    for n in range(1, order + 1):
        new = []
        for lf, ex in pairs:
            new.append(lf.ring.zero if n < lf.val else ex.get(n - 1))
        for (lf, _), v in zip(pairs, new):
            lf.c.append(v)
