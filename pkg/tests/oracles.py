"""Independent reference computations used only by the test suite.

Each oracle solves the same problem as a library routine through a different
route: the integral equation by dense quadrature instead of the finite-rank
reduction, the sampled eigenproblem by finite differences instead of the
sine-basis Galerkin matrix, and small symmetric eigenproblems by inertia
bisection instead of Jacobi rotations.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import eigh_tridiagonal

from heatline.glsolve import Grid, PotentialSamples
from heatline.ritz import trapezoid_weights
from heatline.spectra import KernelTermList, eval_L

PI = math.pi


def nystrom_psi(terms: KernelTermList, grid: Grid) -> np.ndarray:
    """psi_j(s_i) from a dense Nystrom solve of the integral equation.

    For each grid point s_i the kernel row K(s_i, .) is found from the
    trapezoid-discretized equation on [0, s_i], then integrated against a_j.
    """
    x = grid.points
    npts = len(x)
    a = terms.a_values(x)                              # (rank, npts)
    L = eval_L(terms, x[:, None], x[None, :])          # L(x_r, x_c)
    psi = np.zeros((npts, terms.rank))
    for i in range(npts):
        m = i + 1
        w = trapezoid_weights(x[:m]) if m > 1 else np.zeros(1)
        # unknown k_r = K(s_i, x_r): k_r + sum_r' w_r' L(x_r', x_r) k_r' = -L(s_i, x_r)
        system = np.eye(m) + w[None, :] * L[:m, :m].T
        k = np.linalg.solve(system, -L[i, :m])
        psi[i] = (w * k) @ a[:, :m].T
    return psi


def fd_eigenvalues(samples: PotentialSamples, count: int, refine: int = 16) -> np.ndarray:
    """Low eigenvalues of -w'' + Q w = nu w, w(0) = w(pi) = 0 by finite differences.

    The samples are read as a piecewise-linear potential and re-sampled on a
    uniform grid `refine` times finer than the original spacing, so the
    three-point stencil resolves sharp features of the sampled function.
    """
    nfine = refine * (len(samples.grid) - 1) + 1
    xf = np.linspace(0.0, PI, nfine)
    qf = np.interp(xf, samples.grid.points, samples.values)
    h = xf[1] - xf[0]
    main = 2.0 / h**2 + qf[1:-1]
    off = np.full(len(main) - 1, -1.0 / h**2)
    return eigh_tridiagonal(main, off, select="i", select_range=(0, count - 1),
                            eigvals_only=True)


def _count_below(matrix: np.ndarray, shift: float) -> int:
    """Number of eigenvalues of a symmetric matrix below `shift` (Sylvester inertia).

    Plain LDL^T elimination without pivoting; a vanishing pivot is dodged by
    nudging the shift, which cannot change the count for shifts off the
    spectrum by more than the nudge.
    """
    n = matrix.shape[0]
    a = matrix - shift * np.eye(n)
    negatives = 0
    for k in range(n):
        pivot = a[k, k]
        if abs(pivot) < 1e-300:
            return _count_below(matrix, shift + 1e-12 * (1.0 + abs(shift)))
        if pivot < 0.0:
            negatives += 1
        rows = a[k + 1:, k] / pivot
        a[k + 1:, k + 1:] -= rows[:, None] * a[k, k + 1:]
        a[k + 1:, k] = 0.0
    return negatives


def bisection_eigenvalues(matrix: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by inertia-count bisection."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    radius = np.sum(np.abs(matrix), axis=1)
    lo = float(np.min(np.diag(matrix) - radius)) - 1.0
    hi = float(np.max(np.diag(matrix) + radius)) + 1.0
    eigenvalues = np.empty(n)
    for k in range(1, n + 1):
        a, b = lo, hi
        while b - a > tol * max(1.0, abs(a), abs(b)):
            mid = 0.5 * (a + b)
            if _count_below(matrix, mid) >= k:
                b = mid
            else:
                a = mid
        eigenvalues[k - 1] = 0.5 * (a + b)
    return eigenvalues
