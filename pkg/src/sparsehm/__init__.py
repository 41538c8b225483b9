"""Sparse Bayesian history matching of two-phase waterflood models.

Modules
-------
simulator
    IMPES two-phase flow on a 2-D grid; produces pressure-drop and
    water-saturation observations at wells.
transform
    Orthonormal 2-D DCT basis with zig-zag coefficient ordering.
sensitivity
    Finite-difference Jacobians in coefficient space.
sbl
    Sparse Bayesian learning kernels and the iterative inversion drivers.
harness
    Reservoir scenarios, synthetic truths, experiments and metrics.
"""
from .harness import build_scenario, evaluate, generate_truth, synthesize_observations
from .sbl import (
    InversionConfig,
    InversionResult,
    run_algorithm_i,
    run_algorithm_ii,
    run_gaussian_baseline,
    run_inversion,
)
from .simulator import FluidProps, GridSpec, PermeabilityField, Well, WellSpec, run_simulation
from .transform import DCTBasis

__version__ = "0.1.0"

__all__ = [
    "DCTBasis",
    "FluidProps",
    "GridSpec",
    "InversionConfig",
    "InversionResult",
    "PermeabilityField",
    "Well",
    "WellSpec",
    "build_scenario",
    "evaluate",
    "generate_truth",
    "run_algorithm_i",
    "run_algorithm_ii",
    "run_gaussian_baseline",
    "run_inversion",
    "run_simulation",
    "synthesize_observations",
]
