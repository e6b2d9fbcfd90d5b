"""Interior-degenerate diffusion on the periodic interval."""

from .disc_ops import (
    DiscreteOperator,
    assemble_operator,
    average,
    delta_minus,
    delta_plus,
    discrete_energy,
    energy_gradient,
    inner,
    norm,
)
from .estimators import DegenerateDiffusion, EdgeDiffusivity, FractionalSmoother, Mollify
from .flows import DiffusionFlow, FlowKind, implicit_euler_step, make_h, minimizing_movement
from .frac_kernel import MultiplierSpec, apply_multiplier, fit_singularity_exponent, kernel_samples
from .gamma_viscosity import make_mollifier, mollify, recovery_sequence_report, viscosity_flow_compare
from .grid import GammaSet, Grid1D, Grid2D
from .spectral import SpectralDecomposition, eigendecompose, semigroup_apply
from .weights import Weight, edge_diffusivity, power_weight, strong_weight

__version__ = "0.1.0"

__all__ = [
    "DegenerateDiffusion",
    "DiffusionFlow",
    "DiscreteOperator",
    "EdgeDiffusivity",
    "FlowKind",
    "FractionalSmoother",
    "GammaSet",
    "Grid1D",
    "Grid2D",
    "Mollify",
    "MultiplierSpec",
    "SpectralDecomposition",
    "Weight",
    "apply_multiplier",
    "assemble_operator",
    "average",
    "delta_minus",
    "delta_plus",
    "discrete_energy",
    "edge_diffusivity",
    "eigendecompose",
    "energy_gradient",
    "fit_singularity_exponent",
    "implicit_euler_step",
    "inner",
    "kernel_samples",
    "make_h",
    "make_mollifier",
    "minimizing_movement",
    "mollify",
    "norm",
    "power_weight",
    "recovery_sequence_report",
    "semigroup_apply",
    "strong_weight",
    "viscosity_flow_compare",
]
