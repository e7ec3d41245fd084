from fractions import Fraction

import pytest

from bdtrees.occurrences import OccurrenceTable, occurrence_distribution, occurrences
from bdtrees.stats import asymptotic_checks, estrada_survey, linear_fit, moments_from_counts, table_moments
from bdtrees.system import build_system, mean_variance_series
from bdtrees.trees import enumerate_trees

from conftest import tree

P3 = tree("0 1")


def test_table_moment_examples():
    m = moments_from_counts({0: 1, 2: 1})
    assert (m.mean, m.variance) == (1, 1)
    m = moments_from_counts({5: 7})
    assert (m.mean, m.variance) == (5, 0)
    m = table_moments(occurrence_distribution("free", 4, 4, P3))
    assert (m.mean, m.variance) == (Fraction(5, 2), Fraction(1, 4))
    with pytest.raises(ValueError):
        table_moments(OccurrenceTable(3, 4, "0", {}))


def test_table_moments_match_direct_average():
    H = tree("0 1 2")
    for n in (8, 10):
        xs = [occurrences(H, T) for T in enumerate_trees("free", n, 4)]
        mean = Fraction(sum(xs), len(xs))
        var = sum((x - mean) ** 2 for x in xs) / len(xs)
        m = table_moments(occurrence_distribution("free", n, 4, H))
        assert (m.mean, m.variance) == (mean, var)


def test_table_means_match_system_moments():
    ms = mean_variance_series(build_system(4, P3), 14)
    for n in range(1, 15):
        m = table_moments(occurrence_distribution("free", n, 4, P3))
        assert m.mean == ms.mean(n) and m.variance == ms.variance(n)


def test_p3_mean_equals_zagreb_identity():
    for n in range(2, 13):
        trees = list(enumerate_trees("free", n, 4))
        meanD = Fraction(sum(sum(d * d for d in T.degrees()) for T in trees), len(trees))
        assert table_moments(occurrence_distribution("free", n, 4, P3)).mean == meanD / 2 - n + 1


def test_linear_fit_examples():
    r = linear_fit([(x, 3 * x + 1) for x in range(5)])
    assert (r.slope, r.intercept, r.r_squared) == pytest.approx((3, 1, 1))
    r = linear_fit([(x, 2.0) for x in range(4)])
    assert r.slope == 0 and r.r_squared == 1
    r = linear_fit([(0, 0), (1, 1), (2, 1)])
    assert r.slope == pytest.approx(0.5) and r.intercept == pytest.approx(1 / 6)
    with pytest.raises(ValueError):
        linear_fit([(1, 1), (1, 2)])


def test_estrada_survey_examples():
    s = estrada_survey(4, 4, K=3)
    rows = {r.tree: r for r in s.rows}
    assert rows["0 1 0"].D == 10 and rows["0 1 0"].EE == pytest.approx(7.6357, abs=1e-3)
    assert rows["0 0 0"].D == 12 and rows["0 0 0"].EE == pytest.approx(7.8292, abs=1e-3)
    assert s.aggregate.mean_ee_per_n == pytest.approx((7.6357 + 7.8292) / 8, abs=1e-3)
    assert rows["0 0 0"].moments == (6, 18, 54)
    assert s.to_csv().splitlines()[0] == "tree,n,D,EE,M_2,M_4,M_6"
    assert s.to_svg().startswith("<svg")
    single = estrada_survey(2, 4)
    assert len(single.rows) == 1 and single.rows[0].D == 2
    assert single.rows[0].EE == pytest.approx(3.08616, abs=1e-5)


def test_estrada_concentrates():
    assert estrada_survey(16, 4, K=0).aggregate.std_ee_per_n < estrada_survey(10, 4, K=0).aggregate.std_ee_per_n


def test_asymptotic_checks():
    k2 = asymptotic_checks(tree("0"), 4, range(4, 10))
    assert all(r.deviation_fraction == 0 for r in k2.rows)
    rep = asymptotic_checks(P3, 4, [8, 12, 16])
    assert rep.chebyshev_holds
    by_n = {r.n: r for r in rep.rows}
    assert by_n[12].deviation_fraction <= by_n[12].chebyshev_bound
    assert abs(by_n[16].rooted_skewness) < abs(by_n[8].rooted_skewness)
    assert rep.to_csv().startswith("n,trees,mean_per_n")
