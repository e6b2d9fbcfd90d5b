"""Diffusivities vanishing on Gamma: weak power laws, strong power laws, edge detectors."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frac_kernel import ExponentFit, MultiplierSpec, apply_multiplier, fit_singularity_exponent
from .grid import ONE_D, GammaSet, Grid1D, distance_field

__all__ = [
    "Weight",
    "power_weight",
    "strong_weight",
    "edge_diffusivity",
    "fit_diffusivity_exponent",
]

WEAK, STRONG, EDGE = "weak", "strong", "edge"


@dataclass(frozen=True, eq=False)
class Weight:
    """Node samples alpha_i of a diffusivity on a 1D grid."""

    samples: np.ndarray
    grid: Grid1D
    sigma: float
    kind: str
    eps: float | None = None
    gamma: GammaSet = field(default=ONE_D)

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.shape != (self.grid.size,):
            raise ValueError(f"weight needs {self.grid.size} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)) or np.any(s < 0):
            raise ValueError("weight samples must be finite and nonnegative")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    def shifted(self, delta: float) -> "Weight":
        """The viscous weight alpha + delta (same class tag)."""
        if delta < 0:
            raise ValueError("viscosity must be nonnegative")
        return Weight(self.samples + delta, self.grid, self.sigma, self.kind, self.eps, self.gamma)

    @property
    def degenerate_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.samples == 0)


def power_weight(grid: Grid1D, sigma: float, gamma: GammaSet = ONE_D) -> Weight:
    """alpha_i = d(x_i, Gamma)^sigma, sigma in [0, 1)."""
    if not 0 <= sigma < 1:
        raise ValueError(f"weakly degenerate weights need sigma in [0, 1), got {sigma}")
    d = distance_field(grid, gamma)
    return Weight(d**sigma, grid, float(sigma), WEAK, gamma=gamma)


def strong_weight(grid: Grid1D, sigma: float, gamma: GammaSet = ONE_D) -> Weight:
    """alpha_i = d(x_i, Gamma)^(1 + sigma), sigma > 0; 1/alpha is not integrable."""
    if not sigma > 0:
        raise ValueError(f"strongly degenerate weights need sigma > 0, got {sigma}")
    d = distance_field(grid, gamma)
    return Weight(d ** (1.0 + sigma), grid, float(sigma), STRONG, gamma=gamma)


def edge_diffusivity(u0, eps: float, multiplier=None) -> Weight:
    """Frozen edge-detector coefficient a_eps(u0) = 1 / (1 + N_eps(|D+ u0|)^2).

    ``multiplier`` may replace N_eps by any callable acting on a grid vector.
    A sampled jump produces a single forward-difference spike of height
    jump/d_m, the discrete counterpart of a Dirac mass.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    u0 = np.asarray(u0, dtype=float)
    grid = Grid1D.from_size(u0.size)
    grad = np.abs(np.roll(u0, -1) - u0) / grid.spacing
    if multiplier is None:
        spec = MultiplierSpec(eps, 1)
        smoothed = apply_multiplier(grad, spec)
    else:
        smoothed = np.asarray(multiplier(grad), dtype=float)
    alpha = 1.0 / (1.0 + smoothed**2)
    return Weight(alpha, grid, 2.0 - 2.0 * eps, EDGE, eps=float(eps))


def fit_diffusivity_exponent(weight: Weight, window, gamma: GammaSet = ONE_D) -> ExponentFit:
    """Exponent of alpha ~ d(x, Gamma)^s near Gamma for an edge-detector weight.

    alpha = 1/(1 + N^2) with N -> infinity on Gamma, so the asymptotic exponent
    of alpha is -2 times that of N = sqrt(1/alpha - 1). N is fitted as a power
    law plus a smooth offset; a direct log-log fit of alpha stays far from the
    asymptotic regime at any resolvable distance.
    """
    alpha = weight.samples
    if np.any(alpha <= 0) or np.any(alpha > 1):
        raise ValueError("edge-detector samples must lie in (0, 1]")
    magnitude = np.sqrt(np.clip(1.0 / alpha - 1.0, 0.0, None))
    dist = distance_field(weight.grid, gamma)
    fit = fit_singularity_exponent(magnitude, dist, window, spacing=weight.grid.spacing)
    return ExponentFit(-2.0 * fit.slope, -2.0 * fit.intercept, fit.r_squared, fit.window,
                       fit.offset, fit.n_points)
