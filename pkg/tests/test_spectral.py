import math

import numpy as np
import pytest

from bdtrees.spectral import (
    ConvergenceError, eigenvalues, estrada, moment_degree_check, symmetric_eigenvalues, tail_bound,
    walk_moments, zagreb,
)
from bdtrees.trees import enumerate_trees

from conftest import tree


def test_known_spectra():
    assert eigenvalues(tree("0")) == pytest.approx([1, -1], abs=1e-12)
    assert eigenvalues(tree("0 1")) == pytest.approx([math.sqrt(2), 0, -math.sqrt(2)], abs=1e-12)
    assert eigenvalues(tree("0 0 0")) == pytest.approx([math.sqrt(3), 0, 0, -math.sqrt(3)], abs=1e-12)


def test_jacobi_against_numpy():
    rng = np.random.default_rng(0)
    for n in (1, 2, 5, 12, 20):
        A = rng.normal(size=(n, n))
        A = A + A.T
        assert symmetric_eigenvalues(A) == pytest.approx(np.sort(np.linalg.eigvalsh(A))[::-1], abs=1e-10)


def test_jacobi_rejects_and_reports():
    with pytest.raises(ValueError):
        symmetric_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
    A = np.ones((6, 6)) + np.diag(np.arange(6.0))
    with pytest.raises(ConvergenceError):
        symmetric_eigenvalues(A, max_sweeps=0)


def test_trace_identities():
    for n in range(1, 11):
        for T in enumerate_trees("free", n, 4):
            lam = eigenvalues(T)
            assert sum(lam) == pytest.approx(0, abs=1e-9)
            assert sum(lam ** 2) == pytest.approx(2 * (n - 1), abs=1e-9)
            M = walk_moments(T, 12)
            for k in range(1, 7):
                assert sum(lam ** (2 * k)) == pytest.approx(M[2 * k], rel=1e-6)
            assert all(M[k] == 0 for k in range(1, 13, 2))


def test_estrada_examples():
    assert estrada(tree("")).value == pytest.approx(1.0)
    assert estrada(tree("0")).value == pytest.approx(math.e + 1 / math.e, abs=1e-12)
    assert estrada(tree("0 1")).value == pytest.approx(1 + 2 * math.cosh(math.sqrt(2)), abs=1e-12)
    assert estrada(tree("0 1")).value == pytest.approx(5.35637, abs=1e-4)


def test_estrada_modes_agree_within_bounds():
    for n in range(1, 11):
        for T in enumerate_trees("free", n, 4):
            e, m = estrada(T), estrada(T, "moments", 30, 4)
            assert abs(e.value - m.value) <= m.tail_bound + e.rounding_bound


def test_moment_mode_default_K_and_bound():
    T = tree("0 0 0 1 1 2 2")
    m = estrada(T, "moments", delta=4)
    assert m.tail_bound < 1e-9 * T.n
    assert estrada(T, "moments", K=2, delta=4).tail_bound > m.tail_bound
    assert tail_bound(10, 4, 30) < 1e-40
    with pytest.raises(ValueError):
        estrada(T, "moments", K=0, delta=4)


def test_walk_moment_examples():
    for T in enumerate_trees("free", 8, 4):
        M = walk_moments(T, 4)
        assert M[2] == 2 * (T.n - 1)
        assert M[3] == 0
    assert walk_moments(tree("0 0 0"), 4)[4] == 18


def test_walk_moments_exact_for_large_powers():
    # star K_{1,4}: M_{2k} = 2 * 4^k, beyond int64 range for large k
    M = walk_moments(tree("0 0 0 0"), 80)
    assert M[80] == 2 * 4 ** 40


def test_zagreb_examples():
    assert zagreb(tree("0 1 2")) == 10
    assert zagreb(tree("0 0 0")) == 12
    assert zagreb(tree("")) == 0


def test_moment_degree_inequality():
    assert moment_degree_check(tree("0 0 0"), 2).ok
    assert walk_moments(tree("0 0 0"), 4)[4] == 18 <= 84
    assert moment_degree_check(tree("0 1 2"), 1).ok
    for n in range(1, 13):
        for T in enumerate_trees("free", n, 4):
            assert moment_degree_check(T, 8).ok


def test_estrada_extremes_and_upper_bound():
    for n in range(2, 11):
        vals = [estrada(T).value for T in enumerate_trees("free", n, max(n - 1, 2))]
        path = estrada(tree(" ".join(str(i) for i in range(n - 1)))).value
        star = estrada(tree(" ".join(["0"] * (n - 1)))).value
        assert path == pytest.approx(min(vals)) and star == pytest.approx(max(vals))
        for T in enumerate_trees("free", n, 4):
            assert estrada(T).value <= math.e ** 4 * n
