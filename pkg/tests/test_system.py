from fractions import Fraction

import pytest

from bdtrees.counting import counting_series, find_x0
from bdtrees.occurrences import occurrence_distribution, occurrences_containing_root
from bdtrees.series import TruncatedUniSeries
from bdtrees.system import (
    ClassEquation, ClassSystem, ConnectivityError, ResourceCapError, SystemEvaluator, TruncationClass,
    build_system, check_strong_connectivity, compute_mu, enumerate_classes, jacobian_column_sum,
    mean_variance_series, mu_for, solve_series,
)
from bdtrees.trees import RootedTree, canonical_code, code_height, parse_tree, tree_from_code

from conftest import tree

K2, P3, P4, K13 = tree("0"), tree("0 1"), tree("0 1 2"), tree("0 0 0")


def test_class_counts():
    assert len(enumerate_classes(3, 1)) == 3
    assert len(enumerate_classes(3, 2)) == 10
    assert len(enumerate_classes(4, 2)) == 35
    classes = enumerate_classes(3, 2)
    assert [c.code for c in classes] == sorted(c.code for c in classes)
    assert all(c.deep == (code_height(c.code) == 2) for c in classes)


def test_class_cap():
    with pytest.raises(ResourceCapError, match="delta=4, h=3"):
        enumerate_classes(4, 3, cap=1000)
    with pytest.raises(ResourceCapError):
        build_system(4, tree("0 1 2 3 4 5 6 7"))


def test_k2_delta_three_system():
    sys = build_system(3, K2)
    deep = [sys.classes[c] for c in sys.deep_ids]
    assert sorted(c.size for c in deep) == [2, 3]
    assert sorted(sys.equations[c].k_root for c in sys.deep_ids) == [1, 2]


def test_p3_root_exponents():
    sys = build_system(4, P3)
    chain = canonical_code(RootedTree(tree("0 1"), 0))
    cherry = canonical_code(RootedTree(tree("0 0"), 0))
    by_code = {sys.classes[c].code: sys.equations[c].k_root for c in sys.deep_ids}
    assert by_code[chain] == 1
    # the cherry has depth 1 < h, so it is a shallow class with a fixed monomial
    assert cherry not in by_code
    assert sys.root_exponent(cherry) == 1
    for cid in sys.deep_ids:
        shape = tree_from_code(sys.classes[cid].code)
        assert sys.equations[cid].k_root == occurrences_containing_root(P3, shape)


def test_strong_connectivity():
    assert check_strong_connectivity(build_system(3, K2)).strongly_connected
    assert check_strong_connectivity(build_system(4, P3)).strongly_connected
    # a single unknown whose equation does not use itself
    cls = [TruncationClass((1, 0), False, 1, 0), TruncationClass((1, 1, 0, 0), True, 2, 0)]
    degenerate = ClassSystem(3, 1, (1, 1, 0, 0), cls, {1: ClassEquation(1, 1, ((0, 1),))},
                             [(1, 0)], {0: [0]}, {0: 0, 1: 0})
    report = check_strong_connectivity(degenerate)
    assert not report.strongly_connected
    assert report.components == [[1]]
    with pytest.raises(ConnectivityError):
        compute_mu(degenerate, 0.35)


def test_bivariate_examples():
    s = solve_series(build_system(4, P3), 12)
    assert s.p[4] == {3: 2, 2: 2}
    assert s.t[4] == {2: 1, 3: 1}
    assert s.p.at_u1() == counting_series(4, 12).p


@pytest.mark.parametrize("H", [K2, P3, P4, K13], ids=["K2", "P3", "P4", "K13"])
def test_bivariate_against_enumeration(H):
    s = solve_series(build_system(4, H), 12)
    for n in range(1, 13):
        for kind, series in (("free", s.t), ("rooted", s.r), ("planted", s.p)):
            assert series[n] == occurrence_distribution(kind, n, 4, H).counts
    assert all(v >= 0 for c in s.t.coeffs for v in c.values())


def test_class_series_sum_to_planted_series():
    sys = build_system(3, P4)
    s = solve_series(sys, 20)
    total = TruncatedUniSeries.zero(20)
    for cls in sys.classes:
        if not cls.deep:
            total = total + TruncatedUniSeries.monomial(cls.size, 20)
    for series in s.classes.values():
        total = total + series.at_u1()
    assert total == counting_series(3, 20).p


def test_moment_examples():
    sys = build_system(4, K2)
    ms = mean_variance_series(sys, 40)
    t = counting_series(4, 40).t
    for n in range(1, 41):
        assert ms.m1[n] == (n - 1) * t[n]
        assert ms.m2[n] == (n - 1) ** 2 * t[n]
    p3 = mean_variance_series(build_system(4, P3), 10)
    assert p3.m1[4] == 5 and p3.variance(4) == Fraction(1, 4)


def test_moment_routes_agree():
    for delta, H in ((3, P3), (4, P4), (4, K13)):
        sys = build_system(delta, H)
        a = mean_variance_series(sys, 25, route="jet")
        b = mean_variance_series(sys, 25, route="bivariate")
        assert (a.totals, a.m1, a.m2) == (b.totals, b.m1, b.m2)


def test_degree_too_large_gives_zero_system(caplog):
    sys = build_system(3, tree("0 0 0 0"))
    assert sys.trivial
    assert all(m == 0 for m in mean_variance_series(sys, 20).m1)
    assert compute_mu(sys, 0.4).mu == 0.0


@pytest.mark.parametrize("delta,H", [(3, P3), (4, P3), (4, K2)])
def test_column_sums_equal_restricted_series(delta, H):
    cols = jacobian_column_sum(build_system(delta, H), 20)
    target = counting_series(delta, 20).p_restricted
    assert all(c == target for c in cols.values())


def test_column_sums_numeric_equal_and_reach_one():
    sys = build_system(4, P3)
    ev = SystemEvaluator(sys)
    vals = list(ev.column_sums(0.2).values())
    assert max(vals) - min(vals) < 1e-13
    rep = compute_mu(sys, find_x0(4).x0)
    assert rep.column_sum_residual < 1e-3


def test_evaluator_fixed_point_residual():
    ev = SystemEvaluator(build_system(4, P3))
    for x in (0.1, 0.3, 0.35):
        assert ev.partials(x)[2] < 1e-12


def test_mu_degenerate():
    for delta in (3, 4):
        assert mu_for(tree(""), delta).mu == 1.0
        assert mu_for(K2, delta).mu == pytest.approx(1.0, abs=1e-3)


def test_mu_p3_against_exact_means():
    rep = mu_for(P3, 4)
    ms = mean_variance_series(build_system(4, P3), 300)
    ns = range(50, 301)
    xs = [float(n) for n in ns]
    ys = [float(ms.mean(n)) for n in ns]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    assert rep.mu == pytest.approx(slope, rel=0.02)
    assert rep.mu > 0 and not rep.warnings
