"""Potentials with a prescribed Dirichlet spectrum and the heat-channel built on them."""

from .channel import (
    ChannelPotential,
    CombinedLevel,
    HeatSeries,
    ModeSet,
    assemble_channel,
    combine_spectra,
    concentration_metric,
    first_mode,
    heat_series,
)
from .csvio import InputFormatError
from .glsolve import (
    Grid,
    PotentialSamples,
    PsiSolution,
    SingularSystemError,
    construct_potential,
    exact_gram,
    gram_integrals,
    make_two_zone_grid,
    make_uniform_grid,
    recover_potential,
    solve_psi_systems,
    trapezoid_gram,
)
from .ritz import (
    DegenerateShapeError,
    JacobiConvergenceError,
    LinearizedMomentsDiagnostic,
    RitzMatrix,
    RitzReport,
    SpectrumErrors,
    assemble_ritz_matrix,
    cosine_moments,
    jacobi_eigen,
    linearized_qtilde_diagnostic,
    relative_error,
    verify_potential,
)
from .spectra import (
    KernelTerm,
    KernelTermList,
    PerturbedLevel,
    TargetSpectrum,
    build_kernel_terms,
    default_target_spectrum,
    eval_L,
    load_target_spectrum,
)

__all__ = [
    "ChannelPotential",
    "CombinedLevel",
    "DegenerateShapeError",
    "Grid",
    "HeatSeries",
    "InputFormatError",
    "JacobiConvergenceError",
    "KernelTerm",
    "KernelTermList",
    "LinearizedMomentsDiagnostic",
    "ModeSet",
    "PerturbedLevel",
    "PotentialSamples",
    "PsiSolution",
    "RitzMatrix",
    "RitzReport",
    "SingularSystemError",
    "SpectrumErrors",
    "TargetSpectrum",
    "assemble_channel",
    "assemble_ritz_matrix",
    "build_kernel_terms",
    "combine_spectra",
    "concentration_metric",
    "construct_potential",
    "cosine_moments",
    "default_target_spectrum",
    "eval_L",
    "exact_gram",
    "first_mode",
    "gram_integrals",
    "heat_series",
    "jacobi_eigen",
    "linearized_qtilde_diagnostic",
    "load_target_spectrum",
    "make_two_zone_grid",
    "make_uniform_grid",
    "recover_potential",
    "relative_error",
    "solve_psi_systems",
    "trapezoid_gram",
    "verify_potential",
]
