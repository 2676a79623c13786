"""Target spectral data and the finite-rank Gel'fand-Levitan kernel.

The design goal is a potential Q on [0, pi] whose Dirichlet eigenvalues are a
prescribed sequence nu_1 < nu_2 < ... that differs from the free sequence
j^2 at finitely many indices.  Each spectral level carries a normalizing
constant alpha_j (the squared norm of the model eigenfunction); the free
levels use sin(j x) with ||sin(j x)||^2 = pi/2.

The difference between the prescribed and the free spectral function is a
finite sum of jumps, so the Gel'fand-Levitan input kernel is finite rank:

    L(x, y) = sum_j a_j(x) b_j(y)

with one added term per prescribed level (weight 1/alpha_j) and one
subtracted term per replaced free level (weight 2/pi).  A level at nu = 0
degenerates to the pair (x/alpha, y), the nu -> 0 limit of the sine pair.
All component functions have closed-form first derivatives, which the
recovery of Q from the transformation kernel requires exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

PI = math.pi

#: squared L2 norm of sin(j x) on [0, pi], the free-level normalizer
FREE_NORMALIZER = PI / 2.0

#: squared L2 norm of x on [0, pi], the normalizer of the nu = 0 level
ZERO_LEVEL_NORMALIZER = PI**3 / 3.0


@dataclass(frozen=True)
class PerturbedLevel:
    """One prescribed spectral level replacing the free level at the same index."""

    index: int
    nu: float
    alpha: float


@dataclass(frozen=True)
class TargetSpectrum:
    """Prescribed Dirichlet eigenvalues nu_j and normalizers alpha_j.

    Indices absent from `perturbed` keep the free values nu_j = j^2,
    alpha_j = pi/2.  The merged sequence must be strictly increasing.
    """

    perturbed: tuple[PerturbedLevel, ...]
    interval_length: float = PI

    def __post_init__(self) -> None:
        last_index = 0
        for level in self.perturbed:
            if level.index <= last_index:
                raise ValueError(
                    f"perturbed indices must be strictly increasing, got {level.index}"
                )
            if level.nu < 0.0:
                raise ValueError(f"eigenvalue nu_{level.index} = {level.nu} is negative")
            if level.alpha <= 0.0:
                raise ValueError(f"normalizer alpha_{level.index} = {level.alpha} must be positive")
            last_index = level.index
        merged = self.eigenvalues(max((lv.index for lv in self.perturbed), default=0) + 1)
        if np.any(np.diff(merged) <= 0.0):
            raise ValueError(f"merged spectrum is not strictly increasing: {merged}")

    @property
    def perturbed_indices(self) -> tuple[int, ...]:
        return tuple(level.index for level in self.perturbed)

    def eigenvalue(self, j: int) -> float:
        """nu_j of the merged spectrum (1-based)."""
        if j < 1:
            raise ValueError("spectral index must be >= 1")
        for level in self.perturbed:
            if level.index == j:
                return level.nu
        return float(j * j)

    def normalizer(self, j: int) -> float:
        """alpha_j of the merged spectrum (1-based)."""
        if j < 1:
            raise ValueError("spectral index must be >= 1")
        for level in self.perturbed:
            if level.index == j:
                return level.alpha
        return FREE_NORMALIZER

    def eigenvalues(self, count: int) -> np.ndarray:
        """First `count` merged eigenvalues, ascending in index."""
        return np.array([self.eigenvalue(j) for j in range(1, count + 1)])


def default_target_spectrum() -> TargetSpectrum:
    """The designed heat-channel spectrum: nu = (0, 11, 14, 16, 25, 36, ...)."""
    return TargetSpectrum(
        perturbed=(
            PerturbedLevel(1, 0.0, ZERO_LEVEL_NORMALIZER),
            PerturbedLevel(2, 11.0, FREE_NORMALIZER),
            PerturbedLevel(3, 14.0, FREE_NORMALIZER),
        )
    )


def load_target_spectrum(path: str | Path) -> TargetSpectrum:
    """Read a spectrum from a JSON file.

    Accepted forms: a list of records, or an object with a "perturbed" list
    and an optional "interval_length".  Each record holds "index" and "nu";
    a missing "alpha" defaults to pi/2, or pi^3/3 when nu = 0.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        records = data.get("perturbed", [])
        interval_length = float(data.get("interval_length", PI))
    else:
        records = data
        interval_length = PI
    levels = []
    for rec in records:
        nu = float(rec["nu"])
        default_alpha = ZERO_LEVEL_NORMALIZER if nu == 0.0 else FREE_NORMALIZER
        levels.append(PerturbedLevel(int(rec["index"]), nu, float(rec.get("alpha", default_alpha))))
    return TargetSpectrum(perturbed=tuple(levels), interval_length=interval_length)


@dataclass(frozen=True)
class KernelTerm:
    """One rank-one piece a(x) b(y) of the kernel.

    frequency == 0 encodes the degenerate nu = 0 pair a(x) = weight * x,
    b(y) = y; otherwise a(x) = weight * sin(frequency x), b(y) = sin(frequency y).
    """

    weight: float
    frequency: float

    def a(self, x):
        x = np.asarray(x, dtype=float)
        if self.frequency == 0.0:
            return self.weight * x
        return self.weight * np.sin(self.frequency * x)

    def a_prime(self, x):
        x = np.asarray(x, dtype=float)
        if self.frequency == 0.0:
            return np.full_like(x, self.weight)
        return self.weight * self.frequency * np.cos(self.frequency * x)

    def b(self, y):
        y = np.asarray(y, dtype=float)
        if self.frequency == 0.0:
            return y.copy()
        return np.sin(self.frequency * y)

    def b_prime(self, y):
        y = np.asarray(y, dtype=float)
        if self.frequency == 0.0:
            return np.ones_like(y)
        return self.frequency * np.cos(self.frequency * y)


@dataclass(frozen=True)
class KernelTermList:
    """Finite-rank factorization L(x, y) = sum_j a_j(x) b_j(y)."""

    terms: tuple[KernelTerm, ...]

    @property
    def rank(self) -> int:
        return len(self.terms)

    def a_values(self, x) -> np.ndarray:
        """Stacked a_j(x), shape (rank,) + shape(x)."""
        return np.stack([t.a(x) for t in self.terms]) if self.terms else _empty_stack(x)

    def a_prime_values(self, x) -> np.ndarray:
        return np.stack([t.a_prime(x) for t in self.terms]) if self.terms else _empty_stack(x)

    def b_values(self, y) -> np.ndarray:
        return np.stack([t.b(y) for t in self.terms]) if self.terms else _empty_stack(y)

    def b_prime_values(self, y) -> np.ndarray:
        return np.stack([t.b_prime(y) for t in self.terms]) if self.terms else _empty_stack(y)


def _empty_stack(x) -> np.ndarray:
    return np.zeros((0,) + np.asarray(x, dtype=float).shape)


def build_kernel_terms(spectrum: TargetSpectrum) -> KernelTermList:
    """Assemble the kernel terms for a target spectrum.

    For every perturbed index j: one added term for the prescribed level,
    a(x) = sin(sqrt(nu_j) x) / alpha_j (or x / alpha_j when nu_j = 0), paired
    with b(y) = sin(sqrt(nu_j) y) (or y); and one subtracted free term
    a(x) = -(2/pi) sin(j x), b(y) = sin(j y).  Rank = 2 * len(perturbed).
    """
    added = []
    removed = []
    for level in spectrum.perturbed:
        if level.nu < 0.0:
            raise ValueError(f"eigenvalue nu_{level.index} = {level.nu} is negative")
        if level.nu == 0.0:
            added.append(KernelTerm(weight=1.0 / level.alpha, frequency=0.0))
        else:
            added.append(KernelTerm(weight=1.0 / level.alpha, frequency=math.sqrt(level.nu)))
        removed.append(KernelTerm(weight=-1.0 / FREE_NORMALIZER, frequency=float(level.index)))
    return KernelTermList(terms=tuple(added + removed))


def eval_L(terms: KernelTermList, x, y):
    """Evaluate L(x, y) = sum_j a_j(x) b_j(y); broadcasts over array arguments."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast_shapes(x.shape, y.shape))
    for term in terms.terms:
        out = out + term.a(x) * term.b(y)
    if out.ndim == 0:
        return float(out)
    return out
