"""Finite-rank Gel'fand-Levitan solver: from kernel terms to potential samples.

Writing psi_j(s) = int_0^s K(s, t) a_j(t) dt reduces the integral equation

    K(s, t) + int_0^s K(s, t') L(t', t) dt' = -L(s, t),   0 <= t <= s,

with the finite-rank kernel L to a rank x rank linear system at each s:

    (I + G(s)) psi(s) = -G(s) a(s),     G_mj(s) = int_0^s b_j a_m dt.

Differentiating in s gives a second system with the same matrix for psi'(s):

    (I + G(s)) psi'(s) = -G(s) a'(s) - sigma(s) a(s),
    sigma(s) = sum_j (a_j(s) + psi_j(s)) b_j(s).

The potential follows from the diagonal of the transformation kernel,
Q(s) = 2 dK(s,s)/ds, assembled from psi, psi' and the analytic derivatives
of the component functions:

    Q(s) = -2 sum_j [ (a_j'(s) + psi_j'(s)) b_j(s) + (a_j(s) + psi_j(s)) b_j'(s) ].

The gram matrix G(s) is computed in closed form by default: every integrand
is a product of sines or a linear function, and the exact primitives keep the
solve free of quadrature error even on coarse grids.  A cumulative-trapezoid
variant is kept for discretization studies; near s = pi the matrix I + G is
close to singular and trapezoid errors in G are strongly amplified there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .csvio import read_float_columns, write_csv
from .spectra import KernelTermList, TargetSpectrum, build_kernel_terms

PI = math.pi

#: absolute pivot floor of the elimination; GL solvability keeps pivots far above it
PIVOT_FLOOR = 1e-12

_ENDPOINT_TOL = 1e-12


class SingularSystemError(Exception):
    """A pivot of the reduced system fell below the floor (invalid spectral data)."""


@dataclass(frozen=True)
class Grid:
    """Strictly increasing sample points x_1 = 0 < ... < x_{M+1} = pi."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 3:
            raise ValueError("grid needs at least 3 points")
        if np.any(np.diff(pts) <= 0.0):
            raise ValueError("grid points must be strictly increasing")
        if abs(pts[0]) > _ENDPOINT_TOL or abs(pts[-1] - PI) > _ENDPOINT_TOL:
            raise ValueError("grid must span [0, pi]")

    def __len__(self) -> int:
        return len(self.points)

    def index_of(self, s: float) -> int:
        """Index of the grid point equal to s (within rounding)."""
        i = int(np.argmin(np.abs(self.points - s)))
        if abs(self.points[i] - s) > 1e-9:
            raise ValueError(f"s = {s} is not a grid point")
        return i


def make_uniform_grid(intervals: int) -> Grid:
    """M equal intervals on [0, pi], M >= 2."""
    if intervals < 2:
        raise ValueError("uniform grid needs at least 2 intervals")
    return Grid(np.linspace(0.0, PI, intervals + 1))


def make_two_zone_grid(left_intervals: int, right_intervals: int, split: float = 0.9 * PI) -> Grid:
    """M1 equal intervals on [0, split] and M2 on [split, pi]; split appears once."""
    if left_intervals < 1 or right_intervals < 1:
        raise ValueError("each zone needs at least 1 interval")
    if not 0.0 < split < PI:
        raise ValueError(f"split {split} must lie strictly inside (0, pi)")
    left = np.linspace(0.0, split, left_intervals + 1)
    right = np.linspace(split, PI, right_intervals + 1)
    return Grid(np.concatenate([left, right[1:]]))


@dataclass(frozen=True)
class PsiSolution:
    """psi_j and psi_j' at every grid point; shape (npoints, rank)."""

    grid: Grid
    psi: np.ndarray
    psi_prime: np.ndarray


@dataclass(frozen=True)
class PotentialSamples:
    """Constructed potential Q at the grid points."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != self.grid.points.shape:
            raise ValueError("one potential value per grid point required")
        if not np.all(np.isfinite(vals)):
            raise ValueError("potential values must be finite")

    def to_csv(self, path) -> None:
        write_csv(path, ["s", "Q"], zip(self.grid.points, self.values))

    @classmethod
    def from_csv(cls, path) -> "PotentialSamples":
        s, q = read_float_columns(path, ["s", "Q"])
        return cls(grid=Grid(s), values=q)


def _pair_primitive(freq_a: float, freq_b: float, s: np.ndarray) -> np.ndarray:
    """int_0^s f(t) g(t) dt where f, g are t (freq 0) or sin(freq t), unit weight."""
    if freq_a == 0.0 and freq_b == 0.0:
        return s**3 / 3.0
    if freq_a == 0.0 or freq_b == 0.0:
        f = freq_a if freq_a != 0.0 else freq_b
        return (np.sin(f * s) - f * s * np.cos(f * s)) / f**2
    if freq_a == freq_b:
        return s / 2.0 - np.sin(2.0 * freq_a * s) / (4.0 * freq_a)
    dm, dp = freq_a - freq_b, freq_a + freq_b
    return np.sin(dm * s) / (2.0 * dm) - np.sin(dp * s) / (2.0 * dp)


def exact_gram(terms: KernelTermList, s) -> np.ndarray:
    """Closed-form G(s) with G_mj = int_0^s b_j a_m dt; shape (..., rank, rank)."""
    s = np.asarray(s, dtype=float)
    r = terms.rank
    out = np.empty(s.shape + (r, r))
    for m, tm in enumerate(terms.terms):
        for j, tj in enumerate(terms.terms):
            out[..., m, j] = tm.weight * _pair_primitive(tm.frequency, tj.frequency, s)
    return out


def trapezoid_gram(terms: KernelTermList, grid: Grid) -> np.ndarray:
    """Cumulative-trapezoid G at every grid point; one panel per step and pair."""
    x = grid.points
    a = terms.a_values(x)
    b = terms.b_values(x)
    integrand = a[:, None, :] * b[None, :, :]          # (m, j, points)
    dx = np.diff(x)
    panels = 0.5 * dx * (integrand[:, :, :-1] + integrand[:, :, 1:])
    out = np.zeros((len(x), terms.rank, terms.rank))
    np.cumsum(panels, axis=2, out=panels)
    out[1:] = np.moveaxis(panels, 2, 0)
    return out


def gram_integrals(terms: KernelTermList, grid: Grid, s: float) -> np.ndarray:
    """Trapezoid gram matrix at the grid point s (A_mj = int_0^s b_j a_m)."""
    return trapezoid_gram(terms, grid)[grid.index_of(s)]


def solve_pivoted(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Gaussian elimination with partial pivoting and an absolute pivot floor."""
    a = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    n = a.shape[0]
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) < PIVOT_FLOOR:
            raise SingularSystemError(f"pivot {a[p, k]:.3e} below {PIVOT_FLOOR:.0e}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= factors[:, None] * a[k, k:]
        b[k + 1:] -= factors[:, None] * b[k]
    x = np.zeros_like(b)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x[:, 0] if squeeze else x


def solve_psi_systems(terms: KernelTermList, grid: Grid, gram: str = "exact") -> PsiSolution:
    """Solve the reduced system and its differentiated companion at every grid point.

    gram selects how G(s) is computed: "exact" (closed form, default) or
    "trapezoid" (cumulative panels on the grid).
    """
    x = grid.points
    npts = len(x)
    r = terms.rank
    if r == 0:
        zeros = np.zeros((npts, 0))
        return PsiSolution(grid=grid, psi=zeros, psi_prime=zeros.copy())
    if gram == "exact":
        G = exact_gram(terms, x)
    elif gram == "trapezoid":
        G = trapezoid_gram(terms, grid)
    else:
        raise ValueError(f"unknown gram rule {gram!r}")
    a = terms.a_values(x)
    ap = terms.a_prime_values(x)
    b = terms.b_values(x)
    eye = np.eye(r)
    psi = np.empty((npts, r))
    psi_prime = np.empty((npts, r))
    for i in range(npts):
        try:
            p = solve_pivoted(eye + G[i], -G[i] @ a[:, i])
            sigma = float(np.dot(a[:, i] + p, b[:, i]))
            dp = solve_pivoted(eye + G[i], -G[i] @ ap[:, i] - sigma * a[:, i])
        except SingularSystemError as err:
            raise SingularSystemError(f"at grid point s = {x[i]:.6f}: {err}") from None
        psi[i] = p
        psi_prime[i] = dp
    return PsiSolution(grid=grid, psi=psi, psi_prime=psi_prime)


def recover_potential(terms: KernelTermList, psi: PsiSolution, grid: Grid) -> PotentialSamples:
    """Q(x_i) = 2 [K_s(x_i, x_i) + K_t(x_i, x_i)] from psi, psi' and derivatives."""
    if psi.grid.points.shape != grid.points.shape or not np.array_equal(psi.grid.points, grid.points):
        raise ValueError("psi was computed on a different grid")
    x = grid.points
    if terms.rank == 0:
        return PotentialSamples(grid=grid, values=np.zeros_like(x))
    a = terms.a_values(x)
    ap = terms.a_prime_values(x)
    b = terms.b_values(x)
    bp = terms.b_prime_values(x)
    k_s = -np.sum((ap + psi.psi_prime.T) * b, axis=0)
    k_t = -np.sum((a + psi.psi.T) * bp, axis=0)
    return PotentialSamples(grid=grid, values=2.0 * (k_s + k_t))


def construct_potential(
    spectrum: TargetSpectrum, grid: Grid, gram: str = "exact"
) -> PotentialSamples:
    """Full construction pipeline: kernel terms, psi systems, potential recovery."""
    terms = build_kernel_terms(spectrum)
    psi = solve_psi_systems(terms, grid, gram=gram)
    return recover_potential(terms, psi, grid)
