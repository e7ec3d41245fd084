"""The finite functional system indexed by depth-truncation classes.

Fix a pattern tree ``H`` of diameter ``h`` and a degree bound ``delta``.
Planted trees are split by their ``h``-depth truncation.  Truncations of
depth exactly ``h`` (*deep* classes) become the unknowns ``A_tau(x, u)``;
shallower truncations are single trees and enter as monomials
``x^{|tau|} u^{occ(H, tau)}``.  Grouping all classes by their
``(h-1)``-truncation ``sigma`` gives

    B_sigma = x^{|sigma|} u^{occ(H, sigma)} + sum_{tau deep, trunc(tau) = sigma} A_tau

    A_tau   = x * u^{k_root(tau)} * prod_s Z(S_{l_s}; B_{sigma_s})

where ``tau`` has ``l_s`` children of shape ``sigma_s`` and ``k_root`` counts
occurrences of ``H`` through the root.  Rooted trees are a root with at most
``delta`` planted children, and free trees follow from the edge pairing

    t = r - 1/2 sum B_s1 B_s2 u^{k(s1, s2)} + 1/2 sum B_s(x^2, u^2) u^{k(s, s)}

with ``k`` the number of occurrences using the join edge.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement

import networkx as nx

from . import engine
from .counting import (
    CountingBundle, counting_series, find_x0, sample_grid, solve_planted_value, _z_value,
)
from .engine import BI, UNI, Builder, JetRing, bootstrap
from .occurrences import _CodeCounter, _Target
from .series import (
    SeriesError, TruncatedBiSeries, TruncatedUniSeries, cycle_types, eval_lower_bound, sqrt_extrapolate,
)
from .trees import (
    Code, FreeTree, RootedTree, canonical_code, code_children, code_from_children, code_height, code_size,
    diameter, tree_from_code, truncate_code,
)

log = logging.getLogger(__name__)

DEFAULT_CLASS_CAP = 100_000
# below this point the truncated counting series of order 600 is exact to machine precision
SERIES_SAFE_X = 0.2


class ResourceCapError(RuntimeError):
    """The class enumeration would exceed the configured cap."""


class ConnectivityError(RuntimeError):
    def __init__(self, message, components):
        super().__init__(message)
        self.components = components


@dataclass(frozen=True)
class TruncationClass:
    code: Code
    deep: bool
    size: int
    occurrences: int  # occurrences of H inside the class shape itself

    @property
    def shape(self) -> RootedTree:
        return tree_from_code(self.code, planted=True)


@dataclass(frozen=True)
class ClassEquation:
    class_id: int
    k_root: int
    children: tuple[tuple[int, int], ...]  # (group id, multiplicity)


@dataclass
class ClassSystem:
    delta: int
    h: int
    H: Code
    classes: list[TruncationClass]
    equations: dict[int, ClassEquation]
    groups: list[Code] = field(default_factory=list)
    group_map: dict[int, list[int]] = field(default_factory=dict)  # group -> member class ids
    class_group: dict[int, int] = field(default_factory=dict)
    trivial: bool = False  # H cannot occur (degree too large): all counts are zero

    @property
    def deep_ids(self) -> list[int]:
        return sorted(self.equations)

    @property
    def n_unknowns(self) -> int:
        return len(self.equations)

    @cached_property
    def _counter(self) -> _CodeCounter:
        return _CodeCounter(_Target(tree_from_code(self.H).tree))

    def group_occurrences(self, g: int) -> int:
        return self._counter.total(self.groups[g])

    def root_exponent(self, code: Code) -> int:
        return self._counter.at_root(code)

    def join_exponent(self, g1: int, g2: int) -> int:
        """Occurrences of H using the edge that joins groups ``g1`` and ``g2``."""
        a, b = self.groups[g1], self.groups[g2]
        joined = code_from_children(code_children(a) + [b])
        return self._counter.at_root(joined) - self._counter.at_root(a)

    def root_shapes(self, max_size: int | None = None):
        """Root of a rooted tree with at most ``delta`` children, as group multisets.

        Yields ``(k_root, ((group, multiplicity), ...), min_size)``.
        """
        sizes = [code_size(g) for g in self.groups]
        for m in range(self.delta + 1):
            for combo in combinations_with_replacement(range(len(self.groups)), m):
                size = 1 + sum(sizes[g] for g in combo)
                if max_size is not None and size > max_size:
                    continue
                code = code_from_children([self.groups[g] for g in combo])
                mult: dict[int, int] = {}
                for g in combo:
                    mult[g] = mult.get(g, 0) + 1
                yield self.root_exponent(code), tuple(sorted(mult.items())), size


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _level_count(delta: int, h: int, cap: int | None = None) -> int | None:
    """Number of planted shapes of depth ``<= h``; ``None`` once it passes ``cap``."""
    count = 1
    for _ in range(h):
        count = math.comb(count + delta - 1, delta - 1)
        if cap is not None and count > cap:
            return None
    return count


def _planted_up_to_depth(delta: int, h: int, cap: int) -> list[Code]:
    if _level_count(delta, h, cap) is None:
        raise ResourceCapError(
            f"truncation classes for delta={delta}, h={h} exceed the cap of {cap}; "
            f"use a smaller delta or a subtree of smaller diameter")
    level = [(1, 0)]
    for _ in range(h):
        prev = sorted(level, reverse=True)
        level = []
        for m in range(delta):
            for combo in combinations_with_replacement(prev, m):
                level.append(code_from_children(list(combo)))
    return sorted(level)


def enumerate_classes(delta: int, h: int, cap: int = DEFAULT_CLASS_CAP) -> list[TruncationClass]:
    """All planted trees of depth ``<= h`` with at most ``delta - 1`` children per vertex."""
    if delta < 3:
        raise SeriesError("delta >= 3 required")
    if h < 1:
        raise SeriesError("h >= 1 required (K1 is handled separately)")
    return [TruncationClass(c, code_height(c) == h, code_size(c), 0) for c in _planted_up_to_depth(delta, h, cap)]


def build_system(delta: int, H: FreeTree | RootedTree, cap: int = DEFAULT_CLASS_CAP) -> ClassSystem:
    if isinstance(H, RootedTree):
        H = H.tree
    h = diameter(H)
    if h < 1:
        raise SeriesError("H must have at least one edge; K1 is special-cased in compute_mu")
    if delta < 3:
        raise SeriesError("delta >= 3 required")
    Hcode = canonical_code(H)
    counter = _CodeCounter(_Target(H))
    trivial = H.max_degree() > delta
    if trivial:
        log.warning("H has maximum degree %d > delta=%d; returning the zero system", H.max_degree(), delta)
    codes = _planted_up_to_depth(delta, h, cap)
    groups = _planted_up_to_depth(delta, h - 1, cap)
    gindex = {g: i for i, g in enumerate(groups)}
    classes = []
    equations = {}
    group_map: dict[int, list[int]] = {i: [] for i in range(len(groups))}
    class_group = {}
    for cid, code in enumerate(codes):
        deep = code_height(code) == h
        classes.append(TruncationClass(code, deep, code_size(code), counter.total(code)))
        g = gindex[truncate_code(code, h - 1)]
        group_map[g].append(cid)
        class_group[cid] = g
        if deep:
            mult: dict[int, int] = {}
            for ch in code_children(code):
                mult[gindex[ch]] = mult.get(gindex[ch], 0) + 1
            equations[cid] = ClassEquation(cid, counter.at_root(code), tuple(sorted(mult.items())))
    sys = ClassSystem(delta, h, Hcode, classes, equations, groups, group_map, class_group, trivial)
    sys.__dict__["_counter"] = counter
    return sys


# ---------------------------------------------------------------------------
# dependency structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConnectivityReport:
    strongly_connected: bool
    components: list[list[int]]


def dependency_graph(sys: ClassSystem) -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(sys.equations)
    for cid, eq in sys.equations.items():
        for g, _ in eq.children:
            for member in sys.group_map.get(g, []):
                if member in sys.equations:
                    G.add_edge(cid, member)
    return G


def check_strong_connectivity(sys: ClassSystem) -> ConnectivityReport:
    """Irreducibility of the unknown-dependency digraph.

    A single unknown whose equation does not mention itself is explicit, not
    an implicit system, and is reported as not strongly connected.
    """
    G = dependency_graph(sys)
    comps = [sorted(c) for c in nx.strongly_connected_components(G)]
    comps.sort()
    ok = len(comps) == 1 and G.number_of_edges() > 0
    return ConnectivityReport(ok, comps)


# ---------------------------------------------------------------------------
# series solutions
# ---------------------------------------------------------------------------

class _Solved:
    """Expression nodes for one ring/order, solved by bootstrapping."""

    def __init__(self, sys: ClassSystem, ring, order: int, assemble: bool = True):
        self.sys = sys
        self.order = order
        self.ring = ring
        b = self.b = Builder(ring, order)
        self.leaves = {cid: b.leaf(sys.classes[cid].size, cid) for cid in sys.equations}
        self.B = {}
        for g, members in sys.group_map.items():
            terms = [b.monomial(code_size(sys.groups[g]), sys.group_occurrences(g))]
            terms += [self.leaves[m] for m in members if m in self.leaves]
            self.B[g] = b.sum(terms)
        exprs = []
        for cid in sys.equations:
            exprs.append(self.rhs(cid))
        bootstrap([self.leaves[c] for c in sys.equations], exprs, order)
        self.p = b.sum(list(self.B.values()))
        if assemble:
            self.r = self._rooted()
            self.t = self._free()

    def rhs(self, cid):
        """``u^k * prod Z(l_s; B_s)`` (the equation without its leading ``x``)."""
        eq = self.sys.equations[cid]
        prod = self.b.product(self.b.cycle_index(m, self.B[g]) for g, m in eq.children)
        return self.b.shift(prod, 0, eq.k_root)

    def _rooted(self):
        b = self.b
        by_k: dict[int, list] = {}
        for k, children, _ in self.sys.root_shapes(self.order):
            node = b.product(b.cycle_index(m, self.B[g]) for g, m in children)
            by_k.setdefault(k, []).append(node)
        return b.shift(b.sum([b.shift(b.sum(v), 0, k) for k, v in sorted(by_k.items())]), 1, 0)

    def _free(self):
        b = self.b
        G = range(len(self.sys.groups))
        pairs: dict[int, list] = {}
        diag: dict[int, list] = {}
        for g1 in G:
            for g2 in G:
                node = b.prod(self.B[g1], self.B[g2])
                if node is b.zero_node:
                    continue
                pairs.setdefault(self.sys.join_exponent(g1, g2), []).append(node)
            node = b.dilate(self.B[g1], 2)
            if node is not b.zero_node:
                diag.setdefault(self.sys.join_exponent(g1, g1), []).append(node)
        Q = b.sum([b.shift(b.sum(v), 0, k) for k, v in sorted(pairs.items())])
        D = b.sum([b.shift(b.sum(v), 0, k) for k, v in sorted(diag.items())])
        half = engine.Fraction(1, 2)
        return b.sum([self.r, b.scale(Q, -half), b.scale(D, half)])

    def coeffs(self, node):
        return node.upto(self.order)[: self.order + 1]


def _bi(coeffs) -> TruncatedBiSeries:
    return TruncatedBiSeries._raw([dict(sorted(c.items())) for c in coeffs])


@dataclass(frozen=True)
class SystemSeries:
    classes: dict[int, TruncatedBiSeries]
    p: TruncatedBiSeries
    r: TruncatedBiSeries
    t: TruncatedBiSeries


def _trivial_series(sys: ClassSystem, order: int) -> SystemSeries:
    bundle = counting_series(sys.delta, order)

    def lift(s):
        return TruncatedBiSeries._raw([{0: c} if c else {} for c in s.coeffs])

    return SystemSeries({}, lift(bundle.p), lift(bundle.r), lift(bundle.t))


def solve_series(sys: ClassSystem, order: int) -> SystemSeries:
    """Bivariate series of every deep class and the assembled ``p``, ``r``, ``t``."""
    if order < 1:
        raise SeriesError("order must be >= 1")
    if sys.trivial:
        return _trivial_series(sys, order)
    s = _Solved(sys, BI, order)
    classes = {cid: _bi(s.coeffs(lf)) if isinstance(lf, engine.Leaf) else TruncatedBiSeries.zero(order)
               for cid, lf in s.leaves.items()}
    return SystemSeries(classes, _bi(s.coeffs(s.p)), _bi(s.coeffs(s.r)), _bi(s.coeffs(s.t)))


@dataclass(frozen=True)
class MomentSeries:
    """Per-``n`` first and second moments ``sum_k k^r c_{n,k}`` and totals."""

    totals: list[int]
    m1: list
    m2: list

    def mean(self, n):
        return engine.Fraction(self.m1[n], self.totals[n])

    def variance(self, n):
        mu = self.mean(n)
        return engine.Fraction(self.m2[n], self.totals[n]) - mu * mu


def mean_variance_series(sys: ClassSystem, order: int, family: str = "free",
                         route: str = "jet") -> MomentSeries:
    """Exact first and second moments of the occurrence count for every ``n <= order``.

    ``route="jet"`` solves the system over ``u = 1 + eps`` truncated at
    ``eps^2``; ``route="bivariate"`` sums the full ``t(x, u)`` table.
    """
    if route == "bivariate":
        series = solve_series(sys, order)
        s = {"free": series.t, "rooted": series.r, "planted": series.p}[family]
        return MomentSeries(list(s.at_u1().coeffs), list(s.u_moment(1).coeffs), list(s.u_moment(2).coeffs))
    if route != "jet":
        raise ValueError(f"unknown route {route!r}")
    if sys.trivial:
        bundle = counting_series(sys.delta, order)
        s = {"free": bundle.t, "rooted": bundle.r, "planted": bundle.p}[family]
        return MomentSeries(list(s.coeffs), [0] * (order + 1), [0] * (order + 1))
    solved = _Solved(sys, JetRing(2), order)
    node = {"free": solved.t, "rooted": solved.r, "planted": solved.p}[family]
    c = solved.coeffs(node)
    return MomentSeries([v[0] for v in c], [v[1] for v in c], [2 * v[2] + v[1] for v in c])


# ---------------------------------------------------------------------------
# Jacobian column sums
# ---------------------------------------------------------------------------

def jacobian_column_sum(sys: ClassSystem, order: int) -> dict[int, TruncatedUniSeries]:
    """``sum_rows dF_row / dA_col`` at ``u = 1`` for every deep column, as series.

    Derivatives act on the first cycle-index slot only; ``A(x^i)`` for
    ``i >= 2`` is a known function of ``x`` in the system.
    """
    s = _Solved(sys, UNI, order, assemble=False)
    b = s.b
    one = b.one_node
    per_group = {}
    for g in range(len(sys.groups)):
        terms = []
        for cid, eq in sys.equations.items():
            mult = dict(eq.children)
            if g not in mult:
                continue
            factors = [b.cycle_index(m, s.B[g2]) for g2, m in eq.children if g2 != g]
            factors.append(b.cycle_index_ds1(mult[g], s.B[g], one))
            terms.append(b.product(factors))
        per_group[g] = b.shift(b.sum(terms), 1, 0)
    out = {}
    for cid in sys.equations:
        node = per_group[sys.class_group[cid]]
        out[cid] = TruncatedUniSeries._raw(s.coeffs(node))
    return out


# ---------------------------------------------------------------------------
# accurate evaluation at real x (u = 1)
# ---------------------------------------------------------------------------

class _Dual:
    """Value with first-order parts in several directions (forward mode)."""

    __slots__ = ("v", "d")

    def __init__(self, v, d=None):
        self.v = v
        self.d = d or {}

    def __add__(self, o):
        if not isinstance(o, _Dual):
            return _Dual(self.v + o, dict(self.d))
        d = dict(self.d)
        for k, val in o.d.items():
            d[k] = d.get(k, 0.0) + val
        return _Dual(self.v + o.v, d)

    __radd__ = __add__

    def __mul__(self, o):
        if not isinstance(o, _Dual):
            return _Dual(self.v * o, {k: val * o for k, val in self.d.items()})
        d = {k: val * o.v for k, val in self.d.items()}
        for k, val in o.d.items():
            d[k] = d.get(k, 0.0) + self.v * val
        return _Dual(self.v * o.v, d)

    __rmul__ = __mul__

    def __pow__(self, c):
        out = _Dual(1.0)
        for _ in range(c):
            out = out * self
        return out


def _z_dual(m, slots):
    total = _Dual(0.0)
    for ctype, count in cycle_types(m):
        term = _Dual(float(count))
        for i, c in ctype:
            term = term * (slots[i] ** c)
        total = total + term
    return total * (1.0 / math.factorial(m))


class SystemEvaluator:
    """Class values and partial derivatives of the system at real ``x < x0``, ``u = 1``.

    The first cycle-index slot is evaluated exactly at ``u = 1`` through the
    truncation hierarchy, starting from the accurately solved ``p(x)``.
    Dilated slots ``A(x^i, u^i)`` with ``i >= 2`` sit well inside the disc of
    convergence and come from truncated series, together with their ``x``-
    and ``u``-derivatives (the latter from the jet solution).
    """

    def __init__(self, sys: ClassSystem, series_order: int = 120, counting_order: int = 600):
        self.sys = sys
        self.bundle: CountingBundle = counting_series(sys.delta, counting_order)
        jet = _Solved(sys, JetRing(1), series_order, assemble=False)
        self._A0 = {}
        self._Au = {}
        for cid, lf in jet.leaves.items():
            c = lf.upto(series_order) if isinstance(lf, engine.Leaf) else [jet.ring.zero] * (series_order + 1)
            self._A0[cid] = TruncatedUniSeries._raw([v[0] for v in c[: series_order + 1]])
            self._Au[cid] = TruncatedUniSeries._raw([v[1] for v in c[: series_order + 1]])
        self._A0x = {cid: s.derivative() for cid, s in self._A0.items()}
        self._p_cache: dict[float, float] = {}

    # -- u = 1 values by truncation level ---------------------------------
    def _p(self, x: float) -> float:
        if x not in self._p_cache:
            if x <= SERIES_SAFE_X:
                self._p_cache[x] = eval_lower_bound(self.bundle.p, x)
            else:
                sol = solve_planted_value(self.bundle, x)
                if sol is None:
                    raise SeriesError(f"x={x} lies beyond the singularity")
                self._p_cache[x] = sol[0]
        return self._p_cache[x]

    def level_values(self, level: int, x: float, _memo=None) -> dict[Code, float]:
        """Generating-function value at ``x`` of every depth-``level`` truncation group."""
        memo = {} if _memo is None else _memo
        key = (level, x)
        if key in memo:
            return memo[key]
        if level == 0:
            out = {(1, 0): self._p(x)}
        else:
            lower = self.level_values(level - 1, x, memo)
            lower_dil = {i: self.level_values(level - 1, x ** i, memo) for i in range(2, self.sys.delta)}
            out = {}
            for code in _planted_up_to_depth(self.sys.delta, level, 10 ** 9):
                if code_height(code) < level:
                    out[code] = x ** code_size(code)
                    continue
                mult: dict[Code, int] = {}
                for ch in code_children(code):
                    mult[ch] = mult.get(ch, 0) + 1
                val = x
                for ch, m in mult.items():
                    slots = {1: lower[ch]}
                    slots.update({i: lower_dil[i][ch] for i in lower_dil})
                    val *= _z_value(m, slots[1], slots)
                out[code] = val
        memo[key] = out
        return out

    def class_values(self, x: float) -> dict[int, float]:
        vals = self.level_values(self.sys.h, x)
        return {cid: vals[self.sys.classes[cid].code] for cid in self.sys.equations}

    # -- partial derivatives -------------------------------------------------
    def _slots(self, g: int, x: float, y: dict[int, float], direction=None):
        """Cycle-index slots of ``B_g`` as duals in ``x`` ('x'), ``u`` ('u') and
        optionally the first-slot direction ``direction``."""
        sys = self.sys
        size = code_size(sys.groups[g])
        occ = sys.group_occurrences(g)
        members = [m for m in sys.group_map[g] if m in sys.equations]
        slots = {}
        for i in range(1, sys.delta):
            xi = x ** i
            mono = xi ** size
            d = {"x": i * size * x ** (i * size - 1), "u": float(i * occ) * mono}
            val = _Dual(mono, d)
            if i == 1:
                extra = {direction: 1.0} if direction is not None else {}
                val = val + _Dual(sum(y[m] for m in members), extra)
            else:
                for m in members:
                    a = eval_lower_bound(self._A0[m], xi)
                    ax = _eval_signed(self._A0x[m], xi)
                    au = eval_lower_bound(self._Au[m], xi)
                    val = val + _Dual(a, {"x": ax * i * x ** (i - 1), "u": au * i})
            slots[i] = val
        return slots

    def row_values(self, x: float, direction_group: int | None = None) -> dict[int, _Dual]:
        """``F_row`` for every deep row as a dual number at ``(x, A(x,1), 1)``."""
        sys = self.sys
        y = self.class_values(x)
        slot_cache = {g: self._slots(g, x, y, "y" if g == direction_group else None)
                      for g in range(len(sys.groups))}
        out = {}
        for cid, eq in sys.equations.items():
            val = _Dual(x, {"x": 1.0, "u": float(eq.k_root) * x})
            for g, m in eq.children:
                val = val * _z_dual(m, slot_cache[g])
            out[cid] = val
        return out

    def partials(self, x: float) -> tuple[float, float, float]:
        """``sum_rows F_u``, ``sum_rows F_x`` and the fixed-point residual at ``x``."""
        y = self.class_values(x)
        rows = self.row_values(x)
        Fu = math.fsum(r.d.get("u", 0.0) for r in rows.values())
        Fx = math.fsum(r.d.get("x", 0.0) for r in rows.values())
        resid = max(abs(rows[c].v - y[c]) for c in rows)
        return Fu, Fx, resid

    def column_sums(self, x: float) -> dict[int, float]:
        """Numeric Jacobian column sums, one value per truncation group with deep members."""
        out = {}
        for g, members in self.sys.group_map.items():
            if not any(m in self.sys.equations for m in members):
                continue
            rows = self.row_values(x, direction_group=g)
            out[g] = math.fsum(r.d.get("y", 0.0) for r in rows.values())
        return out


def _eval_signed(s: TruncatedUniSeries, x: float) -> float:
    return math.fsum(float(c) * x ** n for n, c in enumerate(s.coeffs) if c)


# ---------------------------------------------------------------------------
# the mean constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularityReport:
    x0: float
    mu: float
    column_sum_residual: float
    extrapolation_residual: float
    warnings: tuple[str, ...] = ()

    def as_record(self) -> dict:
        return {"x0": self.x0, "mu": self.mu, "column_sum_residual": self.column_sum_residual,
                "extrapolation_residual": self.extrapolation_residual,
                "warnings": "; ".join(self.warnings)}


RESIDUAL_WARN = 1e-4


def compute_mu(sys: ClassSystem | None, x0: float, order: int = 120, delta: int | None = None,
               counting_order: int = 600) -> SingularityReport:
    """Mean constant ``mu_H = sum F_u / (x0 * sum F_x)`` at the singularity.

    ``sys=None`` stands for ``H = K1`` (every tree has ``n`` occurrences).
    """
    if sys is None:
        return SingularityReport(x0, 1.0, 0.0, 0.0)
    if sys.trivial:
        return SingularityReport(x0, 0.0, 0.0, 0.0, ("H cannot occur under this degree bound",))
    report = check_strong_connectivity(sys)
    if not report.strongly_connected:
        raise ConnectivityError(
            f"dependency graph is not strongly connected ({len(report.components)} components)",
            report.components)
    ev = SystemEvaluator(sys, order, counting_order)
    grid = sample_grid(x0)
    fu, fx, cs = [], [], {}
    for x in grid:
        Fu, Fx, _ = ev.partials(x)
        fu.append((x, Fu))
        fx.append((x, Fx))
        for g, v in ev.column_sums(x).items():
            cs.setdefault(g, []).append((x, v))
    fit_u = sqrt_extrapolate(fu, x0)
    fit_x = sqrt_extrapolate(fx, x0)
    col_resid = max(abs(sqrt_extrapolate(v, x0).g - 1.0) for v in cs.values())
    mu = fit_u.g / (x0 * fit_x.g)
    ext_resid = max(fit_u.residual / max(abs(fit_u.g), 1e-300), fit_x.residual / max(abs(fit_x.g), 1e-300))
    warnings = []
    if ext_resid > RESIDUAL_WARN:
        warnings.append(f"relative extrapolation residual {ext_resid:.2e} above {RESIDUAL_WARN:.0e}")
    return SingularityReport(x0, mu, col_resid, ext_resid, tuple(warnings))


def mu_for(H: FreeTree | RootedTree, delta: int, order: int = 120, counting_order: int = 600,
           tol: float = 1e-8) -> SingularityReport:
    """Convenience: build the system for ``H`` and evaluate ``mu_H``."""
    if isinstance(H, RootedTree):
        H = H.tree
    est = find_x0(delta, counting_order, tol)
    if H.n == 1:
        return compute_mu(None, est.x0)
    return compute_mu(build_system(delta, H), est.x0, order, counting_order=counting_order)
