"""Adjacency spectra, Estrada index, closed-walk moments and the Zagreb index of trees."""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .trees import FreeTree, RootedTree

OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 50


class ConvergenceError(RuntimeError):
    pass


def _as_free(T) -> FreeTree:
    return T.tree if isinstance(T, RootedTree) else T


def adjacency_matrix(T) -> np.ndarray:
    T = _as_free(T)
    A = np.zeros((T.n, T.n))
    for a, b in T.edges():
        A[a, b] = A[b, a] = 1.0
    return A


@numba.njit(cache=True)
def _jacobi(A, tol, max_sweeps):
    # cyclic Jacobi rotations; returns (diagonal, sweeps used, final off-norm)
    a = A.copy()
    n = a.shape[0]
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        off = math.sqrt(2.0 * off)
        if off < tol:
            return np.diag(a).copy(), sweep, off
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
    return np.diag(a).copy(), -1, off


def symmetric_eigenvalues(A: np.ndarray, tol: float = OFFDIAG_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted descending."""
    return _eigen_with_error(A, tol, max_sweeps)[0]


def _eigen_with_error(A, tol=OFFDIAG_TOL, max_sweeps=MAX_SWEEPS):
    """Eigenvalues plus an absolute per-eigenvalue error bound.

    The bound is the final off-diagonal Frobenius norm (Weyl) plus a
    generous allowance for round-off in the rotations.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("square matrix required")
    if not np.array_equal(A, A.T):
        raise ValueError("matrix is not symmetric")
    n = A.shape[0]
    if n == 0:
        return np.zeros(0), 0.0
    diag, sweeps, off = _jacobi(A, tol, max_sweeps)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})")
    roundoff = 16.0 * n * (sweeps + 1) * np.finfo(float).eps * float(np.linalg.norm(A))
    return np.sort(diag)[::-1], off + roundoff


def eigenvalues(T) -> np.ndarray:
    return symmetric_eigenvalues(adjacency_matrix(T))


def walk_moments(T, K: int) -> list[int]:
    """Exact closed-walk counts ``M_0..M_K`` (``M_k = trace A^k``).

    Uses ``trace A^{2j} = ||A^j||_F^2`` and ``trace A^{2j+1} = <A^j, A^{j+1}>``,
    so only powers up to ``ceil(K/2)`` are formed.  Entries of ``A^j`` are at
    most ``maxdeg^j`` and stay in int64; the squared sums use Python integers.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    T = _as_free(T)
    n = T.n
    half = (K + 1) // 2
    maxdeg = max((len(a) for a in T.adjacency), default=0)
    dtype = np.int64 if maxdeg ** half < 2 ** 62 else object
    A = np.zeros((n, n), dtype=dtype)
    for a, b in T.edges():
        A[a, b] = A[b, a] = 1
    powers = [np.eye(n, dtype=dtype)]
    for _ in range(half):
        powers.append(powers[-1] @ A)
    flat = [P.ravel().tolist() for P in powers]
    out = []
    for k in range(K + 1):
        j = k // 2
        out.append(int(sum(map(operator.mul, flat[j], flat[k - j]))))
    return out


def zagreb(T) -> int:
    return sum(d * d for d in _as_free(T).degrees())


def tail_bound(n: int, delta: int, K: int, terms: int = 400) -> float:
    """Upper bound on ``sum_{k>K} M_{2k}/(2k)!`` from ``M_{2k} <= delta^{2k} n``."""
    total = 0.0
    for k in range(K + 1, K + 1 + terms):
        term = math.exp(2 * k * math.log(delta) - math.lgamma(2 * k + 1)) * n if delta > 0 else 0.0
        total += term
        if term < 1e-300 or (term < total * 1e-18):
            break
    return total


def default_K(n: int, delta: int, rel: float = 1e-9) -> int:
    K = 1
    while tail_bound(n, delta, K) >= rel * n:
        K += 1
    return K


@dataclass(frozen=True)
class EstradaValue:
    value: float
    tail_bound: float = 0.0  # truncation of the moment series (moments mode)
    K: int | None = None
    rounding_bound: float = 0.0  # floating error of the eigenvalue route (eigen mode)


def estrada(T, mode: str = "eigen", K: int | None = None, delta: int | None = None) -> EstradaValue:
    """Estrada index by eigenvalues or by the even closed-walk moment series."""
    T = _as_free(T)
    if mode == "eigen":
        lam, err = _eigen_with_error(adjacency_matrix(T))
        ee = math.fsum(math.exp(v) for v in lam)
        return EstradaValue(ee, rounding_bound=float(ee * math.expm1(err) + 4 * len(lam) * ee * np.finfo(float).eps))
    if mode != "moments":
        raise ValueError(f"unknown mode {mode!r}")
    if delta is None:
        delta = max(T.max_degree(), 1)
    if K is None:
        K = default_K(T.n, delta)
    if K < 1:
        raise ValueError("K >= 1 required")
    M = walk_moments(T, 2 * K)
    s = sum(Fraction(M[2 * k], math.factorial(2 * k)) for k in range(K + 1))
    return EstradaValue(float(s), tail_bound(T.n, delta, K), K)


@dataclass(frozen=True)
class DegreeCheck:
    ok: bool
    violation: int | None  # first k with M_2k > sum d_i^2k


def moment_degree_check(T, K: int) -> DegreeCheck:
    """Exact check of ``M_{2k} <= sum_i d_i^{2k}`` for ``1 <= k <= K``."""
    if K < 1:
        raise ValueError("K >= 1 required")
    T = _as_free(T)
    M = walk_moments(T, 2 * K)
    degs = T.degrees()
    for k in range(1, K + 1):
        if M[2 * k] > sum(d ** (2 * k) for d in degs):
            return DegreeCheck(False, k)
    return DegreeCheck(True, None)


@dataclass(frozen=True)
class SpectralSummary:
    n: int
    eigenvalues: tuple[float, ...]
    ee: float
    moments: tuple[int, ...]
    zagreb: int


def summarize(T, K: int = 30) -> SpectralSummary:
    T = _as_free(T)
    lam = eigenvalues(T)
    return SpectralSummary(T.n, tuple(float(v) for v in lam), math.fsum(math.exp(v) for v in lam),
                           tuple(walk_moments(T, 2 * K)), zagreb(T))
