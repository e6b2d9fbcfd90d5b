"""Forward/backward differences, the discrete weighted energy and its operator.

All inner products are d_m-weighted, <u, v> = sum u_i v_i d_m, so that the
gradient of the energy is the mesh-consistent -D-(alpha D+ u).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid1D
from .weights import Weight

__all__ = [
    "DiscreteOperator",
    "inner",
    "norm",
    "average",
    "delta_plus",
    "delta_minus",
    "delta_centered",
    "discrete_energy",
    "energy_gradient",
    "assemble_operator",
    "centered_energy",
]


def _spacing(u, spacing):
    return 2.0 / np.shape(u)[-1] if spacing is None else spacing


def inner(u, v, spacing=None) -> float:
    u = np.asarray(u, dtype=float)
    return np.sum(u * np.asarray(v, dtype=float), axis=-1) * _spacing(u, spacing)


def norm(u, spacing=None) -> float:
    return np.sqrt(inner(u, u, spacing))


def average(u) -> float:
    """avg(u) = (1/2) sum u_i d_m, the mean over B = [-1, 1)."""
    return np.mean(np.asarray(u, dtype=float), axis=-1)


def delta_plus(u, spacing=None) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return (np.roll(u, -1, axis=-1) - u) / _spacing(u, spacing)


def delta_minus(u, spacing=None) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return (u - np.roll(u, 1, axis=-1)) / _spacing(u, spacing)


def delta_centered(u, spacing=None) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return (np.roll(u, -1, axis=-1) - np.roll(u, 1, axis=-1)) / (2 * _spacing(u, spacing))


def _check(u, w: Weight) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != w.grid.size:
        raise ValueError(f"state of length {u.shape[-1]} does not live on the weight's grid (m={w.grid.m})")
    if not np.all(np.isfinite(u)):
        raise ValueError("state has non-finite entries")
    return u


def discrete_energy(u, w: Weight) -> float:
    """E(u) = 1/2 sum alpha_i (D+ u)_i^2 d_m.

    alpha enters linearly, as in the first variation of the energy.
    """
    u = _check(u, w)
    d = w.grid.spacing
    return 0.5 * np.sum(w.samples * delta_plus(u, d) ** 2, axis=-1) * d


def energy_gradient(u, w: Weight) -> np.ndarray:
    """Gradient in the d_m-weighted inner product: -D-(alpha D+ u)."""
    u = _check(u, w)
    d = w.grid.spacing
    return -delta_minus(w.samples * delta_plus(u, d), d)


def centered_energy(u, w: Weight) -> float:
    """1/2 sum alpha_i [(u_{i+1} - u_{i-1}) / (2 d_m)]^2 d_m."""
    u = _check(u, w)
    d = w.grid.spacing
    return 0.5 * np.sum(w.samples * delta_centered(u, d) ** 2, axis=-1) * d


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """Dense symmetric PSD matrix A with A u = energy_gradient(u), so u' = -A u."""

    matrix: np.ndarray
    weight: Weight

    @property
    def grid(self) -> Grid1D:
        return self.weight.grid

    @property
    def spacing(self) -> float:
        return self.grid.spacing

    def __matmul__(self, u):
        return np.asarray(u, dtype=float) @ self.matrix.T

    def apply(self, u) -> np.ndarray:
        return self @ u


def edge_matrix(n: int, edge_weights, spacing: float) -> np.ndarray:
    """Symmetric matrix of sum_i c_i (u_{i+1} - u_i)^2 / d^2 over periodic edges (i, i+1)."""
    c = np.asarray(edge_weights, dtype=float) / spacing**2
    i = np.arange(n)
    j = (i + 1) % n
    A = np.zeros((n, n))
    np.add.at(A, (i, i), c)
    np.add.at(A, (j, j), c)
    np.add.at(A, (i, j), -c)
    np.add.at(A, (j, i), -c)
    return A


def assemble_operator(w: Weight) -> DiscreteOperator:
    A = edge_matrix(w.grid.size, w.samples, w.grid.spacing)
    A.flags.writeable = False
    return DiscreteOperator(A, w)
