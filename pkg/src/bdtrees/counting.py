"""Counting series of bounded-degree planted, rooted and free trees.

``p`` (planted) solves ``p = x * sum_{j<=delta-1} Z(S_j; p)``; the restricted
series ``p_restricted`` caps the root at ``delta-2`` children, ``r`` (rooted)
allows ``delta`` children and free trees follow from the edge-pairing
identity ``t = r - (p^2 - p(x^2)) / 2``.

The dominant singularity ``x0`` of ``p`` is the point where
``p_restricted(x0) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .engine import UNI, Builder, bootstrap
from .series import (
    SeriesError, TruncatedUniSeries, cycle_types, eval_lower_bound, sqrt_extrapolate,
)


# Offsets x0 * 2^-j.  Values are computed accurately (not from the truncated
# series), so the grid can hug x0 and the (x0 - x) term of the local
# expansion stays below 1e-5 of the fitted limit.
GRID_EXPONENTS = tuple(range(16, 24))


def sample_grid(x0: float, exponents=GRID_EXPONENTS) -> list[float]:
    return [x0 * (1.0 - 2.0 ** -j) for j in exponents]


@dataclass(frozen=True)
class CountingBundle:
    delta: int
    order: int
    p: TruncatedUniSeries
    p_restricted: TruncatedUniSeries
    r: TruncatedUniSeries
    t: TruncatedUniSeries


@dataclass(frozen=True)
class SingularityEstimate:
    x0: float
    p_at_x0: float
    truncation: int
    bracket_width: float
    truncated_root: float = math.nan
    extrapolation_residual: float = 0.0


@lru_cache(maxsize=32)
def counting_series(delta: int, order: int) -> CountingBundle:
    if order < 1:
        raise SeriesError("order must be >= 1")
    if delta < 2:
        raise SeriesError("delta must be >= 2")
    b = Builder(UNI, order)
    p = b.leaf(1, "p")
    Z = [b.cycle_index(j, p) for j in range(delta + 1)]
    bootstrap([p], [b.sum(Z[:delta])], order)
    restricted = b.shift(b.sum(Z[:delta - 1]), 1)
    rooted = b.shift(b.sum(Z), 1)

    def series(node):
        return TruncatedUniSeries._raw(node.upto(order)[:order + 1])

    ps = series(p)
    r = series(rooted)
    t = r - (ps * ps - ps.dilate(2)) * Fraction(1, 2)
    return CountingBundle(delta, order, ps, series(restricted), r, t)


# ---------------------------------------------------------------------------
# accurate evaluation inside the disc of convergence
# ---------------------------------------------------------------------------

def _z_value(m: int, s1: float, slots: dict[int, float]) -> float:
    """``Z(S_m)`` evaluated with ``s_1 = s1`` and ``s_i = slots[i]``."""
    total = 0.0
    for ctype, count in cycle_types(m):
        term = float(count)
        for i, c in ctype:
            term *= (s1 if i == 1 else slots[i]) ** c
        total += term
    return total / math.factorial(m)


def _dilated_slots(p: TruncatedUniSeries, x: float, upto: int) -> dict[int, float]:
    return {i: eval_lower_bound(p, x ** i) for i in range(2, upto + 1)}


def solve_planted_value(bundle: CountingBundle, x: float, max_iter: int = 400):
    """``p(x)`` and ``p_restricted(x)`` for ``0 < x < x0`` by Newton's method.

    Only the first cycle-index slot is solved for; the dilated slots
    ``p(x^i)`` (``i >= 2``) come from the truncated series, where they
    converge geometrically.  Returns ``None`` when ``x`` lies beyond the
    singularity (the fixed point has disappeared).
    """
    d = bundle.delta
    slots = _dilated_slots(bundle.p, x, d)
    y = 0.0
    for _ in range(max_iter):
        F = x * sum(_z_value(j, y, slots) for j in range(d))
        dF = x * sum(_z_value(j, y, slots) for j in range(d - 1))
        if dF >= 1.0:
            return None
        step = (F - y) / (1.0 - dF)
        y_new = y + step
        if abs(step) <= 1e-16 * max(1.0, y_new):
            y = y_new
            break
        y = y_new
    restricted = x * sum(_z_value(j, y, slots) for j in range(d - 1))
    return y, restricted


def find_x0(delta: int, order: int = 600, tol: float = 1e-8) -> SingularityEstimate:
    """Locate ``x0`` where ``p_restricted(x0) = 1``.

    First a bisection on the truncated lower bound of ``p_restricted`` over
    ``[0, 0.5]``; its root sits above the true ``x0`` because truncation
    only loses mass.  Inside that bracket the series is then evaluated
    accurately (Newton on the planted fixed point) and bisected again, and
    ``p(x0)`` is read off a square-root extrapolation of ``p`` on
    :func:`sample_grid`.
    """
    if delta < 3:
        raise SeriesError("delta >= 3 required: for delta = 2 there is no square-root singularity")
    if tol <= 0:
        raise SeriesError("tol must be positive")
    bundle = counting_series(delta, order)

    def g(x):
        return eval_lower_bound(bundle.p_restricted, x) - 1.0

    if g(0.5) < 0:
        raise SeriesError(f"truncation order {order} too coarse to bracket x0; increase order")
    lo, hi = 0.0, 0.5
    for _ in range(200):
        if hi - lo < tol:
            break
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    truncated_root = hi

    def below(x):
        sol = solve_planted_value(bundle, x)
        return sol is not None and sol[1] < 1.0

    lo, hi = 0.0, truncated_root
    it = 0
    while hi - lo > min(tol, 1e-12) and it < 200:
        mid = 0.5 * (lo + hi)
        if below(mid):
            lo = mid
        else:
            hi = mid
        it += 1
    x0 = 0.5 * (lo + hi)
    samples = [(xj, solve_planted_value(bundle, xj)[0]) for xj in sample_grid(x0)]
    fit = sqrt_extrapolate(samples, x0)
    return SingularityEstimate(x0, fit.g, order, hi - lo, truncated_root, fit.residual)
