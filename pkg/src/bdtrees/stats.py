"""Moments of occurrence tables, least-squares fits and empirical asymptotic checks."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .occurrences import OccurrenceTable, occurrence_distribution
from .spectral import estrada, walk_moments, zagreb
from .trees import FreeTree, RootedTree, enumerate_trees, format_tree


@dataclass(frozen=True)
class MomentsReport:
    n: int
    mean: Fraction
    variance: Fraction
    skewness: float
    excess_kurtosis: float


def moments_from_counts(counts: dict[int, int], n: int = 0) -> MomentsReport:
    total = sum(counts.values())
    if not counts or total == 0:
        raise ValueError("empty table")
    mean = Fraction(sum(k * c for k, c in counts.items()), total)
    central = [sum((k - mean) ** r * c for k, c in counts.items()) / total for r in (2, 3, 4)]
    var, m3, m4 = central
    if var == 0:
        skew = kurt = 0.0
    else:
        skew = float(m3) / float(var) ** 1.5
        kurt = float(m4 / (var * var)) - 3.0
    return MomentsReport(n, mean, var, skew, kurt)


def table_moments(t: OccurrenceTable) -> MomentsReport:
    return moments_from_counts(t.counts, t.n)


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    r_squared: float
    count: int


def linear_fit(points: Iterable[tuple[float, float]]) -> RegressionResult:
    """Ordinary least squares ``y = slope * x + intercept``.

    A fit with zero residual reports ``r_squared = 1``, also when ``y`` is constant.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError("at least two points required")
    n = len(pts)
    mx = math.fsum(x for x, _ in pts) / n
    my = math.fsum(y for _, y in pts) / n
    sxx = math.fsum((x - mx) ** 2 for x, _ in pts)
    if sxx == 0:
        raise ValueError("x values are constant")
    sxy = math.fsum((x - mx) * (y - my) for x, y in pts)
    syy = math.fsum((y - my) ** 2 for _, y in pts)
    slope = sxy / sxx
    intercept = my - slope * mx
    sse = math.fsum((y - slope * x - intercept) ** 2 for x, y in pts)
    scale = max(1.0, math.fsum(y * y for _, y in pts))
    if sse <= 1e-24 * scale:
        r2 = 1.0
    else:
        r2 = max(0.0, 1.0 - sse / syy) if syy > 0 else 1.0
    return RegressionResult(slope, intercept, r2, n)


# ---------------------------------------------------------------------------
# Estrada survey
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurveyRow:
    tree: str
    n: int
    D: int
    EE: float
    moments: tuple[int, ...]  # M_2, M_4, ..., M_2K


@dataclass(frozen=True)
class SurveyAggregate:
    n: int
    delta: int
    trees: int
    mean_ee_per_n: float
    std_ee_per_n: float
    fit: RegressionResult | None


@dataclass
class EstradaSurvey:
    rows: list[SurveyRow]
    aggregate: SurveyAggregate

    def to_csv(self) -> str:
        K = len(self.rows[0].moments) if self.rows else 0
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tree", "n", "D", "EE"] + [f"M_{2 * k}" for k in range(1, K + 1)])
        for r in self.rows:
            w.writerow([r.tree, r.n, r.D, repr(r.EE)] + list(r.moments))
        return buf.getvalue()

    def to_svg(self, width: int = 480, height: int = 360) -> str:
        return scatter_svg([(r.D, r.EE) for r in self.rows], "D", "EE", width, height)


def estrada_survey(n: int, delta: int, K: int = 30) -> EstradaSurvey:
    """Estrada index, Zagreb index and even moments over every free tree of order ``n``.

    ``K = 0`` skips the moment columns.
    """
    rows = []
    for T in enumerate_trees("free", n, delta):
        M = walk_moments(T, 2 * K) if K > 0 else []
        rows.append(SurveyRow(format_tree(T), n, zagreb(T), estrada(T).value,
                              tuple(M[2 * k] for k in range(1, K + 1))))
    vals = [r.EE / n for r in rows]
    mean = math.fsum(vals) / len(vals)
    std = math.sqrt(math.fsum((v - mean) ** 2 for v in vals) / len(vals))
    fit = None
    if len({r.D for r in rows}) > 1:
        fit = linear_fit((r.D, r.EE) for r in rows)
    return EstradaSurvey(rows, SurveyAggregate(n, delta, len(rows), mean, std, fit))


def scatter_svg(points: Sequence[tuple[float, float]], xlabel: str, ylabel: str,
                width: int = 480, height: int = 360) -> str:
    """Minimal flat SVG scatter plot."""
    pad = 40
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    dx = (x1 - x0) or 1.0
    dy = (y1 - y0) or 1.0

    def sx(x):
        return pad + (x - x0) / dx * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / dy * (height - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
           f'<text x="{width / 2:.1f}" y="{height - 8}" font-size="12" text-anchor="middle">{xlabel}</text>',
           f'<text x="12" y="{height / 2:.1f}" font-size="12" text-anchor="middle" '
           f'transform="rotate(-90 12 {height / 2:.1f})">{ylabel}</text>']
    for x, y in points:
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2" fill="steelblue"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# concentration and normality trend
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticRow:
    n: int
    trees: int
    mean_per_n: float
    variance_per_n: float
    deviation_fraction: float  # share of trees with |X - E X| > n^(3/4)
    chebyshev_bound: float  # Var / n^(3/2)
    rooted_skewness: float


@dataclass
class AsymptoticReport:
    delta: int
    rows: list[AsymptoticRow] = field(default_factory=list)

    @property
    def chebyshev_holds(self) -> bool:
        return all(r.deviation_fraction <= r.chebyshev_bound + 1e-15 for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "trees", "mean_per_n", "variance_per_n", "deviation_fraction", "chebyshev_bound",
                    "rooted_skewness"])
        for r in self.rows:
            w.writerow([r.n, r.trees, repr(r.mean_per_n), repr(r.variance_per_n), repr(r.deviation_fraction),
                        repr(r.chebyshev_bound), repr(r.rooted_skewness)])
        return buf.getvalue()


def asymptotic_checks(H: FreeTree | RootedTree, delta: int, n_range: Iterable[int]) -> AsymptoticReport:
    """Mean and variance trajectories, the Chebyshev concentration step and rooted skewness."""
    if isinstance(H, RootedTree):
        H = H.tree
    report = AsymptoticReport(delta)
    for n in n_range:
        table = occurrence_distribution("free", n, delta, H)
        m = table_moments(table)
        thresh = n ** 0.75
        far = sum(c for k, c in table.counts.items() if abs(k - m.mean) > thresh)
        rooted = table_moments(occurrence_distribution("rooted", n, delta, H))
        report.rows.append(AsymptoticRow(
            n, table.total, float(m.mean) / n, float(m.variance) / n, far / table.total,
            float(m.variance) / n ** 1.5, rooted.skewness))
    return report
