"""Mollifiers, viscous energies and the vanishing-viscosity limit."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .disc_ops import assemble_operator, delta_plus, discrete_energy, norm
from .grid import Grid1D
from .spectral import eigendecompose, semigroup_apply
from .weights import Weight

__all__ = [
    "Mollifier",
    "make_mollifier",
    "mollify",
    "viscosity_term",
    "regularized_energy",
    "GammaReport",
    "recovery_sequence_report",
    "viscosity_flow_compare",
    "weight_mollifier_bound",
    "fit_rate",
]

RESOLUTION_FACTOR = 8


def bump(s):
    """exp(-1/(1 - s^2)) on |s| < 1, zero elsewhere."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


@dataclass(frozen=True, eq=False)
class Mollifier:
    """phi_m(x) = m phi(m x) sampled on a grid, centered at array position 0."""

    scale: int
    grid: Grid1D
    samples: np.ndarray = field(repr=False)

    @property
    def support_radius(self) -> float:
        return 1.0 / self.scale


def make_mollifier(grid: Grid1D, scale: int) -> Mollifier:
    if scale < 1:
        raise ValueError("mollifier scale must be a positive integer")
    if 1.0 / scale < 2 * grid.spacing:
        raise ValueError(f"mollifier of scale {scale} is under-resolved on a grid with m={grid.m}")
    x = grid.nodes
    r = np.minimum(np.abs(x), 2.0 - np.abs(x))
    phi = np.roll(scale * bump(scale * r), -grid.m)
    phi /= phi.sum() * grid.spacing
    phi.flags.writeable = False
    return Mollifier(int(scale), grid, phi)


def mollify(u, mol: Mollifier) -> np.ndarray:
    """Periodic discrete convolution u_m = phi_m * u (quadrature with weight d_m)."""
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != mol.grid.size:
        raise ValueError("state and mollifier live on different grids")
    kernel_hat = np.fft.rfft(mol.samples) * mol.grid.spacing
    return np.fft.irfft(np.fft.rfft(u, axis=-1) * kernel_hat, n=mol.grid.size, axis=-1)


def viscosity_term(u, delta: float) -> float:
    """delta * 1/2 sum (D+ u)^2 d_m, the part of the viscous energy added by the viscosity."""
    u = np.asarray(u, dtype=float)
    d = 2.0 / u.shape[-1]
    return delta * 0.5 * np.sum(delta_plus(u, d) ** 2, axis=-1) * d


def regularized_energy(u, w: Weight, delta: float) -> float:
    """Discrete energy with weight alpha + delta."""
    return discrete_energy(u, w.shifted(delta))


def fit_rate(scales, values) -> float:
    """Slope of log(values) against log(scales)."""
    scales = np.asarray(scales, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0):
        raise ValueError("rates need positive values")
    return float(np.polyfit(np.log(scales), np.log(values), 1)[0])


@dataclass
class GammaReport:
    scales: list[int]
    energies: list[float]
    weighted_energies: list[float]
    viscosity_terms: list[float]
    limit_energy: float
    liminf_ok: bool
    recovery_rate: float
    weighted_rate: float | None

    def as_dict(self) -> dict:
        return {
            "scales": list(self.scales),
            "energies": list(self.energies),
            "weighted_energies": list(self.weighted_energies),
            "viscosity_terms": list(self.viscosity_terms),
            "limit_energy": self.limit_energy,
            "liminf_ok": self.liminf_ok,
            "recovery_rate": self.recovery_rate,
            "weighted_rate": self.weighted_rate,
        }


def recovery_sequence_report(u, w: Weight, scales) -> GammaReport:
    """Energies of the recovery sequence u_m = phi_m * u with viscosity 1/m.

    ``recovery_rate`` is the fitted decay exponent of the viscosity term
    (1/m) 1/2 ||D+ u_m||^2; ``weighted_rate`` the exponent of E_alpha(u_m)
    (None when those energies are not all positive).
    """
    scales = [int(s) for s in scales]
    if len(scales) < 2 or any(b <= a for a, b in zip(scales, scales[1:])):
        raise ValueError("scales must be strictly increasing, at least two")
    if w.grid.m < RESOLUTION_FACTOR * scales[-1]:
        raise ValueError(f"background grid m={w.grid.m} under-resolves scale {scales[-1]}; "
                         f"need m >= {RESOLUTION_FACTOR * scales[-1]}")
    u = np.asarray(u, dtype=float)
    weighted, visc, total = [], [], []
    liminf_ok = True
    for s in scales:
        um = mollify(u, make_mollifier(w.grid, s))
        e_alpha = float(discrete_energy(um, w))
        e_visc = float(viscosity_term(um, 1.0 / s))
        e_total = float(regularized_energy(um, w, 1.0 / s))
        liminf_ok &= e_alpha <= e_total
        weighted.append(e_alpha)
        visc.append(e_visc)
        total.append(e_total)
    weighted_rate = fit_rate(scales, weighted) if min(weighted) > 0 else None
    return GammaReport(scales, total, weighted, visc, float(discrete_energy(u, w)), bool(liminf_ok),
                       fit_rate(scales, visc), weighted_rate)


def viscosity_flow_compare(u0, w: Weight, deltas, t: float) -> list[tuple[float, float]]:
    """Rows (delta, ||u_delta(t) - u_0(t)||) for flows with weight alpha + delta."""
    if not t > 0:
        raise ValueError("comparison time must be positive")
    reference = semigroup_apply(eigendecompose(assemble_operator(w)), t, u0)
    rows = []
    for delta in deltas:
        if delta == 0:
            rows.append((0.0, 0.0))
            continue
        dec = eigendecompose(assemble_operator(w.shifted(delta)))
        rows.append((float(delta), float(norm(semigroup_apply(dec, t, u0) - reference, w.grid.spacing))))
    return rows


def weight_mollifier_bound(w: Weight, mol: Mollifier) -> float:
    """max_i alpha_i (phi_m * 1/alpha)_i; needs alpha > 0 at every node."""
    if np.any(w.samples <= 0):
        raise ValueError("1/alpha is undefined where the weight vanishes on a node")
    return float(np.max(w.samples * mollify(1.0 / w.samples, mol)))
