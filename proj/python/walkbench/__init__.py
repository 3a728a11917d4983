"""Reversible chains, Szegedy walks, hitting times, and perturbation bounds.

Thin re-export of the compiled core. Matrices follow the column-stochastic
convention: entries[j, k] is the probability of moving from state k to state j,
so every column sums to 1.
"""

from ._core import (
    BoundInapplicableError,
    BoundReport,
    Distribution,
    DivergentPhaseError,
    Error,
    FeasibilityError,
    GenerationError,
    HittingReport,
    NoiseMatrix,
    PerturbedSzegedyBound,
    PhaseBucket,
    QuantumSpectrum,
    ReducibilityError,
    SpectralData,
    SpectralTheoremError,
    StochasticMatrix,
    SubstochasticMatrix,
    SzegedyBound,
    ValidationError,
    WalkOperator,
    WeylReport,
    absorbing,
    annihilation_threshold,
    apply_noise,
    build_walk,
    delete_states,
    discriminant,
    dpht,
    dpht_bound,
    dpqht,
    dpqht_bound,
    eig_sym,
    ht_montecarlo,
    ht_resolvent,
    ht_spectral,
    lazify,
    load_chain,
    make_chain,
    make_distribution,
    make_noise,
    make_stochastic,
    marked_start_state,
    naive_dpqht_bound,
    op_norm2,
    overlaps,
    qht_fullspace,
    qht_spectral,
    quantum_spectrum,
    report_exit_code,
    report_json,
    sample_noise,
    save_chain,
    similarity_transform,
    spectral_gap,
    stationary,
    sweep_csv,
    sym_norm2,
    szegedy_bound,
    szegedy_bound_perturbed,
    truncate,
    verify_instance,
    weyl_check,
)

__all__ = [
    "BoundInapplicableError",
    "BoundReport",
    "Distribution",
    "DivergentPhaseError",
    "Error",
    "FeasibilityError",
    "GenerationError",
    "HittingReport",
    "NoiseMatrix",
    "PerturbedSzegedyBound",
    "PhaseBucket",
    "QuantumSpectrum",
    "ReducibilityError",
    "SpectralData",
    "SpectralTheoremError",
    "StochasticMatrix",
    "SubstochasticMatrix",
    "SzegedyBound",
    "ValidationError",
    "WalkOperator",
    "WeylReport",
    "absorbing",
    "annihilation_threshold",
    "apply_noise",
    "build_walk",
    "delete_states",
    "discriminant",
    "dpht",
    "dpht_bound",
    "dpqht",
    "dpqht_bound",
    "eig_sym",
    "ht_montecarlo",
    "ht_resolvent",
    "ht_spectral",
    "lazify",
    "load_chain",
    "make_chain",
    "make_distribution",
    "make_noise",
    "make_stochastic",
    "marked_start_state",
    "naive_dpqht_bound",
    "op_norm2",
    "overlaps",
    "qht_fullspace",
    "qht_spectral",
    "quantum_spectrum",
    "report_exit_code",
    "report_json",
    "sample_noise",
    "save_chain",
    "similarity_transform",
    "spectral_gap",
    "stationary",
    "sweep_csv",
    "sym_norm2",
    "szegedy_bound",
    "szegedy_bound_perturbed",
    "truncate",
    "verify_instance",
    "weyl_check",
]
