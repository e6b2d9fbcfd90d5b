"""Fourier multiplier N_eps = F^-1 diag(|k|^-eps) F on the periodic box.

Modes are e^{i pi k.x} on [-1, 1)^n (period 2). The zero mode is annihilated,
so N_eps maps into mean-free functions and stays self-adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .grid import GammaSet, Grid1D, Grid2D, torus_distance_to_gamma

__all__ = [
    "MultiplierSpec",
    "ExponentFit",
    "wavenumbers",
    "multiplier_symbol",
    "apply_multiplier",
    "kernel_samples",
    "fit_singularity_exponent",
    "circle_line_delta",
]

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class MultiplierSpec:
    eps: float
    dimension: int = 1
    zero_mode_policy: str = "annihilate"

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        if self.zero_mode_policy != "annihilate":
            raise ValueError("only the 'annihilate' zero-mode policy is supported")


@dataclass(frozen=True)
class ExponentFit:
    """Result of a singularity-exponent fit ``y ~ exp(intercept) * r**slope + offset``."""

    slope: float
    intercept: float
    r_squared: float
    window: tuple[float, float]
    offset: float = 0.0
    n_points: int = 0

    def as_row(self) -> tuple[float, float, float]:
        return (self.slope, self.intercept, self.r_squared)


def wavenumbers(n_nodes: int) -> np.ndarray:
    """Integer k of the modes e^{i pi k x} resolved by ``n_nodes`` samples of [-1, 1)."""
    return np.rint(np.fft.fftfreq(n_nodes) * n_nodes).astype(int)


def multiplier_symbol(shape, eps: float) -> np.ndarray:
    """|k|^-eps on the FFT frequency lattice, 0 at k = 0."""
    ks = np.meshgrid(*[wavenumbers(n) for n in shape], indexing="ij")
    kabs = np.sqrt(sum(k.astype(float) ** 2 for k in ks))
    sym = np.zeros(kabs.shape)
    nz = kabs > 0
    sym[nz] = kabs[nz] ** (-eps)
    return sym


def apply_multiplier(v, spec: MultiplierSpec) -> np.ndarray:
    """N_eps applied to a real periodic sample array (1D vector or 2D square)."""
    v = np.asarray(v, dtype=float)
    if v.ndim != spec.dimension:
        raise ValueError(f"expected a {spec.dimension}D array, got shape {v.shape}")
    if any(n % 2 for n in v.shape) or len(set(v.shape)) != 1:
        raise ValueError(f"expected an even-sized square periodic lattice, got shape {v.shape}")
    out = np.fft.ifftn(multiplier_symbol(v.shape, spec.eps) * np.fft.fftn(v))
    scale = max(1.0, float(np.max(np.abs(v))))
    if np.max(np.abs(out.imag)) > _IMAG_TOL * scale:
        raise FloatingPointError("multiplier output has a non-negligible imaginary part")
    return out.real


def kernel_samples(spec: MultiplierSpec, grid) -> np.ndarray:
    """Periodic kernel G_eps sampled on ``grid``: N_eps of a unit-mass discrete delta at the origin."""
    if grid.m < 64:
        raise ValueError("kernel sampling needs m >= 64")
    if spec.dimension == 1:
        if not isinstance(grid, Grid1D):
            raise ValueError("a 1D multiplier needs a Grid1D")
        delta = np.zeros(grid.size)
        delta[grid.position(0)] = 1.0 / grid.spacing
    else:
        if not isinstance(grid, Grid2D):
            raise ValueError("a 2D multiplier needs a Grid2D")
        delta = np.zeros(grid.shape)
        delta[grid.m, grid.m] = 1.0 / grid.spacing**2
    return apply_multiplier(delta, spec)


def _window_mask(distance, window):
    r_min, r_max = window
    return (distance >= r_min) & (distance <= r_max)


def _power_offset_fit(r, y):
    """Least-squares y ~ A r^p + B; p by bounded scalar search over the profiled residual."""

    def residual(p):
        M = np.column_stack([r**p, np.ones_like(r)])
        coef, *_ = np.linalg.lstsq(M, y, rcond=None)
        return float(np.sum((M @ coef - y) ** 2)), coef

    grid_p = np.linspace(-2.5, 2.5, 101)
    scores = [residual(p)[0] for p in grid_p]
    j = int(np.argmin(scores))
    lo, hi = grid_p[max(j - 1, 0)], grid_p[min(j + 1, len(grid_p) - 1)]
    res = minimize_scalar(lambda p: residual(p)[0], bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    p = float(res.x)
    ss_res, (amp, offset) = residual(p)
    return p, float(amp), float(offset), ss_res


def fit_singularity_exponent(samples, distance, window, *, spacing=None, remainder="constant") -> ExponentFit:
    """Fit the power-law exponent of ``samples`` as the distance goes to zero.

    ``distance`` holds the distance of each sample to the singular set (or a
    :class:`GammaSet`, in which case ``samples`` must be a 1D grid vector).

    With ``remainder="constant"`` the model is ``A r^p + B``: the smooth part
    of the kernel is frozen to its value on the singular set, which removes
    the bias a bounded remainder puts on a plain log-log slope. With
    ``remainder="none"`` the slope of log(samples) against log(r) is returned.
    """
    samples = np.asarray(samples, dtype=float)
    if isinstance(distance, GammaSet):
        grid = Grid1D.from_size(samples.size)
        distance = torus_distance_to_gamma(grid.nodes, distance)
        spacing = grid.spacing if spacing is None else spacing
    distance = np.asarray(distance, dtype=float)
    if distance.shape != samples.shape:
        raise ValueError("samples and distance must have the same shape")
    r_min, r_max = map(float, window)
    if not r_min < r_max:
        raise ValueError("window must satisfy r_min < r_max")
    if spacing is not None and not (2 * spacing <= r_min and r_max <= 0.25):
        raise ValueError(f"window {window} must lie within (2*spacing, 0.25) = ({2 * spacing}, 0.25)")
    sel = _window_mask(distance, (r_min, r_max))
    r, y = distance[sel].ravel(), samples[sel].ravel()
    if r.size < 8:
        raise ValueError(f"fit window holds {r.size} samples, need at least 8")
    if np.any(y <= 0):
        raise ValueError("nonpositive samples in the fit window; the smooth remainder dominates, refine the grid")

    if remainder == "none":
        slope, intercept = np.polyfit(np.log(r), np.log(y), 1)
        pred = intercept + slope * np.log(r)
        ss_res = np.sum((np.log(y) - pred) ** 2)
        ss_tot = np.sum((np.log(y) - np.log(y).mean()) ** 2)
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
        return ExponentFit(float(slope), float(intercept), float(r2), (r_min, r_max), 0.0, int(r.size))
    if remainder != "constant":
        raise ValueError(f"unknown remainder model {remainder!r}")

    p, amp, offset, ss_res = _power_offset_fit(r, y)
    if amp <= 0:
        raise ValueError("fitted singular amplitude is not positive")
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ExponentFit(p, float(np.log(amp)), float(r2), (r_min, r_max), offset, int(r.size))


def circle_line_delta(grid: Grid2D, gamma: GammaSet) -> np.ndarray:
    """Lattice approximation of the line measure delta_Gamma of a circle.

    Each node carries hat(d/h)/h with d the distance to the circle and h the
    spacing, so the support stays within one cell of the curve and the
    Riemann sum reproduces the circumference.
    """
    if gamma.kind != "circle":
        raise ValueError("circle_line_delta needs a circular Gamma")
    h = grid.spacing
    if gamma.radius <= 4 * h:
        raise ValueError(f"radius {gamma.radius} is under-resolved for spacing {h}")
    X, Y = grid.mesh()
    d = torus_distance_to_gamma(np.stack([X, Y], axis=-1), gamma)
    return np.clip(1.0 - d / h, 0.0, None) / h
