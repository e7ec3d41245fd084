"""Truncated formal power series with exact rational coefficients.

Two concrete types are provided: :class:`TruncatedUniSeries` in ``x`` and
:class:`TruncatedBiSeries` in ``x`` and ``u`` (sparse in ``u``).  Both are
immutable.  Truncation order is always explicit; binary operations truncate
at the smaller of the two operand orders.

Floating point appears only in :func:`eval_lower_bound` and
:func:`sqrt_extrapolate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

Number = Union[int, Fraction]


class SeriesError(ValueError):
    pass


def _norm(q: Number) -> Number:
    """Collapse integral Fractions to ``int`` so integer series stay fast."""
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


def _check_number(c) -> Number:
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise SeriesError(f"coefficients must be exact rationals, got {c!r}")
    return _norm(Fraction(c)) if not isinstance(c, int) else c


# ---------------------------------------------------------------------------
# cycle index of the symmetric group
# ---------------------------------------------------------------------------

def partitions(m: int, largest: int | None = None):
    """Yield the partitions of ``m`` as non-increasing tuples."""
    if largest is None:
        largest = m
    if m == 0:
        yield ()
        return
    for k in range(min(m, largest), 0, -1):
        for rest in partitions(m - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def cycle_types(m: int) -> tuple[tuple[tuple[tuple[int, int], ...], int], ...]:
    """Cycle types of S_m with their class sizes.

    Each entry is ``(((i, c_i), ...), count)`` where ``count = m!/z`` is the
    number of permutations of that type, so that
    ``Z(S_m) = (1/m!) * sum count * prod s_i^{c_i}``.
    """
    out = []
    for lam in partitions(m):
        mult: dict[int, int] = {}
        for part in lam:
            mult[part] = mult.get(part, 0) + 1
        z = 1
        for i, c in mult.items():
            z *= i ** c * math.factorial(c)
        out.append((tuple(sorted(mult.items())), math.factorial(m) // z))
    return tuple(out)


# ---------------------------------------------------------------------------
# univariate series
# ---------------------------------------------------------------------------

class TruncatedUniSeries:
    """Power series ``sum_{n<=order} c_n x^n`` with exact coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Number], order: int | None = None):
        c = [_check_number(v) for v in coeffs]
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise SeriesError("order must be non-negative")
        if len(c) > order + 1:
            c = c[: order + 1]
        c.extend([0] * (order + 1 - len(c)))
        self._c = tuple(c)

    @classmethod
    def _raw(cls, coeffs) -> "TruncatedUniSeries":
        obj = cls.__new__(cls)
        obj._c = tuple(coeffs)
        return obj

    @classmethod
    def zero(cls, order: int) -> "TruncatedUniSeries":
        return cls._raw([0] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "TruncatedUniSeries":
        return cls._raw([1] + [0] * order)

    @classmethod
    def monomial(cls, n: int, order: int, coeff: Number = 1) -> "TruncatedUniSeries":
        c = [0] * (order + 1)
        if n <= order:
            c[n] = _check_number(coeff)
        return cls._raw(c)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple[Number, ...]:
        return self._c

    def __getitem__(self, n: int) -> Number:
        return self._c[n]

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedUniSeries):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        terms = [f"{c}*x^{n}" for n, c in enumerate(self._c) if c]
        return f"TruncatedUniSeries({' + '.join(terms) or '0'}; O(x^{self.order + 1}))"

    def truncate(self, order: int) -> "TruncatedUniSeries":
        if order > self.order:
            raise SeriesError("cannot extend a truncated series")
        return TruncatedUniSeries._raw(self._c[: order + 1])

    def __add__(self, other):
        if isinstance(other, Rational):
            other = TruncatedUniSeries.monomial(0, self.order, other)
        if not isinstance(other, TruncatedUniSeries):
            return NotImplemented
        n = min(self.order, other.order) + 1
        return TruncatedUniSeries._raw(_norm(a + b) for a, b in zip(self._c[:n], other._c[:n]))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedUniSeries._raw(-a for a in self._c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return TruncatedUniSeries._raw(_norm(a * other) for a in self._c)
        if not isinstance(other, TruncatedUniSeries):
            return NotImplemented
        order = min(self.order, other.order)
        a, b = self._c, other._c
        nza = [i for i in range(order + 1) if a[i]]
        out = [0] * (order + 1)
        for i in nza:
            ai = a[i]
            for j in range(order + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncatedUniSeries._raw(_norm(v) for v in out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise SeriesError("negative powers are not supported")
        result = TruncatedUniSeries.one(self.order)
        for _ in range(k):
            result = result * self
        return result

    def dilate(self, i: int) -> "TruncatedUniSeries":
        """Substitute ``x -> x^i``."""
        if i < 1:
            raise SeriesError("dilation factor must be >= 1")
        out = [0] * (self.order + 1)
        for n in range(0, self.order // i + 1):
            out[n * i] = self._c[n]
        return TruncatedUniSeries._raw(out)

    def shift(self, s: int) -> "TruncatedUniSeries":
        """Multiply by ``x^s`` (same order)."""
        out = [0] * s + list(self._c[: self.order + 1 - s])
        return TruncatedUniSeries._raw(out[: self.order + 1])

    def derivative(self) -> "TruncatedUniSeries":
        """d/dx; the result has order one less."""
        if self.order == 0:
            return TruncatedUniSeries.zero(0)
        return TruncatedUniSeries._raw(n * self._c[n] for n in range(1, self.order + 1))

    def evaluate(self, x: Number) -> Number:
        """Exact evaluation of the truncated polynomial at a rational point."""
        acc: Number = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return _norm(Fraction(acc))


# ---------------------------------------------------------------------------
# bivariate series
# ---------------------------------------------------------------------------

def _clean(d: Mapping[int, Number]) -> dict[int, Number]:
    return {k: _norm(v) for k, v in sorted(d.items()) if v}


class TruncatedBiSeries:
    """Series ``sum_n x^n * P_n(u)`` where each ``P_n`` is a sparse polynomial."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Mapping[int, Number]], order: int | None = None):
        c = []
        for d in coeffs:
            clean = {}
            for k, v in d.items():
                if not isinstance(k, int) or k < 0:
                    raise SeriesError(f"u-exponents must be non-negative integers, got {k!r}")
                clean[k] = _check_number(v)
            c.append(_clean(clean))
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise SeriesError("order must be non-negative")
        c = c[: order + 1]
        c.extend({} for _ in range(order + 1 - len(c)))
        self._c = tuple(c)

    @classmethod
    def _raw(cls, coeffs) -> "TruncatedBiSeries":
        obj = cls.__new__(cls)
        obj._c = tuple(coeffs)
        return obj

    @classmethod
    def zero(cls, order: int) -> "TruncatedBiSeries":
        return cls._raw({} for _ in range(order + 1))

    @classmethod
    def one(cls, order: int) -> "TruncatedBiSeries":
        return cls._raw([{0: 1}] + [{} for _ in range(order)])

    @classmethod
    def monomial(cls, n: int, k: int, order: int, coeff: Number = 1) -> "TruncatedBiSeries":
        c = [{} for _ in range(order + 1)]
        if n <= order:
            c[n] = {k: _check_number(coeff)}
        return cls._raw(c)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple[dict[int, Number], ...]:
        return self._c

    def __getitem__(self, n: int) -> dict[int, Number]:
        return dict(self._c[n])

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedBiSeries):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(tuple(d.items()) for d in self._c))

    def __repr__(self) -> str:
        return f"TruncatedBiSeries({list(self._c)!r})"

    def truncate(self, order: int) -> "TruncatedBiSeries":
        if order > self.order:
            raise SeriesError("cannot extend a truncated series")
        return TruncatedBiSeries._raw(self._c[: order + 1])

    def __add__(self, other):
        if isinstance(other, Rational):
            other = TruncatedBiSeries.monomial(0, 0, self.order, other)
        if not isinstance(other, TruncatedBiSeries):
            return NotImplemented
        n = min(self.order, other.order) + 1
        out = []
        for a, b in zip(self._c[:n], other._c[:n]):
            d = dict(a)
            for k, v in b.items():
                d[k] = d.get(k, 0) + v
            out.append(_clean(d))
        return TruncatedBiSeries._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedBiSeries._raw({k: -v for k, v in d.items()} for d in self._c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return TruncatedBiSeries._raw(_clean({k: v * other for k, v in d.items()}) for d in self._c)
        if not isinstance(other, TruncatedBiSeries):
            return NotImplemented
        order = min(self.order, other.order)
        out = [dict() for _ in range(order + 1)]
        for i in range(order + 1):
            a = self._c[i]
            if not a:
                continue
            for j in range(order + 1 - i):
                b = other._c[j]
                if not b:
                    continue
                acc = out[i + j]
                for ka, va in a.items():
                    for kb, vb in b.items():
                        acc[ka + kb] = acc.get(ka + kb, 0) + va * vb
        return TruncatedBiSeries._raw(_clean(d) for d in out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise SeriesError("negative powers are not supported")
        result = TruncatedBiSeries.one(self.order)
        for _ in range(k):
            result = result * self
        return result

    def dilate(self, i: int) -> "TruncatedBiSeries":
        """Substitute ``x -> x^i`` and ``u -> u^i`` together."""
        if i < 1:
            raise SeriesError("dilation factor must be >= 1")
        out = [{} for _ in range(self.order + 1)]
        for n in range(0, self.order // i + 1):
            out[n * i] = {k * i: v for k, v in self._c[n].items()}
        return TruncatedBiSeries._raw(out)

    def shift(self, s: int, k: int = 0) -> "TruncatedBiSeries":
        """Multiply by ``x^s u^k``."""
        out = [{} for _ in range(s)] + [{e + k: v for e, v in d.items()} for d in self._c]
        return TruncatedBiSeries._raw(out[: self.order + 1])

    def at_u1(self) -> TruncatedUniSeries:
        """Specialise ``u = 1``."""
        return TruncatedUniSeries._raw(_norm(sum(d.values())) for d in self._c)

    def u_moment(self, r: int) -> TruncatedUniSeries:
        """Coefficient-wise ``sum_k k^r c_{n,k}``."""
        return TruncatedUniSeries._raw(_norm(sum(k ** r * v for k, v in d.items())) for d in self._c)

    def has_nonnegative_coefficients(self) -> bool:
        return all(v >= 0 for d in self._c for v in d.values())


AnySeries = Union[TruncatedUniSeries, TruncatedBiSeries]


def _one_like(f: AnySeries) -> AnySeries:
    return type(f).one(f.order)


def _constant_term(f: AnySeries) -> Number:
    if isinstance(f, TruncatedUniSeries):
        return f[0]
    return sum(f.coeffs[0].values())


def cycle_index_multiset(m: int, f: AnySeries) -> AnySeries:
    """``Z(S_m; f)``: every cycle-index variable ``s_i`` becomes ``f(x^i)``.

    For a bivariate ``f`` the substitution is ``f(x^i, u^i)``.  The
    coefficient of ``x^n`` counts size-``n`` multisets of ``m`` objects.
    """
    if m < 0:
        raise SeriesError("m must be non-negative")
    if isinstance(f, TruncatedBiSeries):
        if f.coeffs[0]:
            raise SeriesError("cycle-index substitution needs a zero constant term")
    elif f[0] != 0:
        raise SeriesError("cycle-index substitution needs a zero constant term")
    if m == 0:
        return _one_like(f)
    dilates = {1: f}
    total = None
    for ctype, count in cycle_types(m):
        term = _one_like(f) * count
        for i, c in ctype:
            if i not in dilates:
                dilates[i] = f.dilate(i)
            term = term * (dilates[i] ** c)
        total = term if total is None else total + term
    return total * Fraction(1, math.factorial(m))


def multiset_directional_derivative(m: int, f: TruncatedUniSeries, g: TruncatedUniSeries) -> TruncatedUniSeries:
    """First-order part in ``eps`` of ``Z(S_m; s_1 = f + eps*g, s_i = f(x^i))``.

    Only the first cycle-index slot is perturbed; the dilated slots are held
    fixed.  This is the partial derivative in the direction of ``s_1``, as it
    appears in the Jacobian of a functional system whose unknowns enter
    through ``s_1``.  Computed with dual-number arithmetic over the
    partition sum, not with the ``Z(S_{m-1})`` shortcut.
    """
    if m < 1:
        raise SeriesError("derivative needs m >= 1")
    if f[0] != 0:
        raise SeriesError("cycle-index substitution needs a zero constant term")
    order = min(f.order, g.order)
    f = f.truncate(order)
    g = g.truncate(order)
    one = TruncatedUniSeries.one(order)
    zero = TruncatedUniSeries.zero(order)

    def dmul(a, b):
        return a[0] * b[0], a[0] * b[1] + a[1] * b[0]

    slots = {1: (f, g)}
    total = zero
    for ctype, count in cycle_types(m):
        term = (one * count, zero)
        for i, c in ctype:
            if i not in slots:
                slots[i] = (f.dilate(i), zero)
            for _ in range(c):
                term = dmul(term, slots[i])
        total = total + term[1]
    return total * Fraction(1, math.factorial(m))


# ---------------------------------------------------------------------------
# numeric helpers
# ---------------------------------------------------------------------------

def _term_value(c: Number, n: int, x: float, logx: float) -> float:
    if c == 0:
        return 0.0
    if isinstance(c, int) and c.bit_length() < 1000:
        t = float(c) * x ** n
        if t != 0.0 or x == 0.0:
            return t
    if x == 0.0:
        return 0.0
    return math.exp(math.log(c.numerator) - math.log(c.denominator) + n * logx) if isinstance(c, Fraction) \
        else math.exp(math.log(c) + n * logx)


def eval_lower_bound(f: TruncatedUniSeries, x: float) -> float:
    """Floating value of the truncated sum at ``0 <= x < 1``.

    With non-negative coefficients this is a lower bound on the full series
    that can only grow with the truncation order.
    """
    if not 0.0 <= x < 1.0:
        raise SeriesError(f"x must lie in [0, 1), got {x}")
    for n, c in enumerate(f.coeffs):
        if c < 0:
            raise SeriesError(f"negative coefficient at x^{n}; lower-bound semantics void")
    if x == 0.0:
        return float(f[0])
    logx = math.log(x)
    return math.fsum(_term_value(c, n, x, logx) for n, c in enumerate(f.coeffs))


@dataclass(frozen=True)
class ExtrapolationFit:
    """Least-squares fit of ``g - h*sqrt(x0 - x)``; ``g`` is the limit at ``x0``."""

    g: float
    h: float
    x0: float
    residual: float


def sqrt_extrapolate(samples: Sequence[tuple[float, float]], x0: float) -> ExtrapolationFit:
    if len(samples) < 3:
        raise SeriesError("sqrt_extrapolate needs at least 3 samples")
    xs = np.array([float(s[0]) for s in samples])
    ys = np.array([float(s[1]) for s in samples])
    if np.any(xs >= x0):
        raise SeriesError("all sample points must lie strictly below x0")
    if len(set(xs.tolist())) != len(xs):
        raise SeriesError("sample points must be distinct")
    design = np.column_stack([np.ones_like(xs), -np.sqrt(x0 - xs)])
    (g, h), *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - design @ np.array([g, h])
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return ExtrapolationFit(float(g), float(h), float(x0), rms)
