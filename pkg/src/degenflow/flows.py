"""The competing evolutions of the degenerate heat equation on the periodic interval.

T1      the regularizing semigroup e^{-tA} of the full discrete operator
T2      the semigroup on the orthogonal complement of h, h-coefficient frozen
T3      independent evolutions inside and outside Gamma, coupling severed
STRONG  T1 machinery driven by a strongly degenerate weight
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .disc_ops import DiscreteOperator, assemble_operator, average, discrete_energy, edge_matrix, inner
from .grid import Grid1D
from .spectral import SpectralDecomposition, eigendecompose, semigroup_apply
from .weights import STRONG, Weight

__all__ = [
    "FlowKind",
    "make_h",
    "h_blocks",
    "DiffusionFlow",
    "evolve",
    "steady_state",
    "implicit_euler_step",
    "minimizing_movement",
]


class FlowKind(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    STRONG = "Strong"


def h_blocks(grid: Grid1D) -> np.ndarray:
    """Boolean mask of the inner block, grid indices -m/2 < i <= m/2 for even m.

    For odd m the mask is the set of nodes in [-1/2, 1/2].
    """
    i = grid.indices
    if grid.is_even:
        return (i > -grid.m // 2) & (i <= grid.m // 2)
    return np.abs(grid.nodes) <= 0.5


def make_h(grid: Grid1D) -> np.ndarray:
    """The normalized two-valued mode h = (chi_inner - chi_outer)/sqrt(2).

    <h, 1> = 0 and <h, h> = 1 in the d_m-weighted inner product.
    """
    return np.where(h_blocks(grid), 1.0, -1.0) / math.sqrt(2.0)


def _check_state(u0, grid: Grid1D) -> np.ndarray:
    u0 = np.asarray(u0, dtype=float)
    if u0.shape[-1] != grid.size:
        raise ValueError(f"state of length {u0.shape[-1]} does not match grid with {grid.size} nodes")
    return u0


class DiffusionFlow:
    """Solution operator of one flow kind for a fixed weight.

    Decompositions are computed once at construction; :meth:`evolve` and
    :meth:`steady_state` are then pure.
    """

    def __init__(self, kind, weight: Weight):
        kind = FlowKind(kind)
        grid = weight.grid
        if kind is FlowKind.T3 and not grid.is_even:
            raise ValueError("the split flow T3 needs an even grid (interfaces on nodes)")
        if kind is FlowKind.STRONG and weight.kind != STRONG:
            raise ValueError("the Strong flow needs a strongly degenerate weight")
        self.kind = kind
        self.weight = weight
        self.grid = grid
        self.h = make_h(grid)
        self.operator = assemble_operator(weight)
        if kind is FlowKind.T3:
            self.blocks = self._split_blocks()
            self.decomposition = None
        elif kind is FlowKind.T2:
            self.blocks = None
            self.decomposition = eigendecompose(self._compressed_operator(), grid.spacing)
        else:
            self.blocks = None
            self.decomposition = eigendecompose(self.operator)

    def _compressed_operator(self) -> np.ndarray:
        # P A P with P the orthogonal projector off h; equals A on even grids,
        # where h already spans part of the kernel
        P = np.eye(self.grid.size) - np.outer(self.h, self.h) * self.grid.spacing
        M = P @ self.operator.matrix @ P
        return 0.5 * (M + M.T)

    def _split_blocks(self):
        inner_mask = h_blocks(self.grid)
        n = self.grid.size
        i = np.arange(n)
        same_side = inner_mask[i] == inner_mask[(i + 1) % n]
        # the weighted-Neumann condition: drop every edge that crosses Gamma
        A = edge_matrix(n, np.where(same_side, self.weight.samples, 0.0), self.grid.spacing)
        blocks = []
        for mask in (inner_mask, ~inner_mask):
            idx = np.flatnonzero(mask)
            blocks.append((idx, eigendecompose(A[np.ix_(idx, idx)], self.grid.spacing)))
        return blocks

    @property
    def gap(self) -> float:
        """Slowest nonzero decay rate of the flow."""
        if self.blocks is not None:
            return min(dec.gap for _, dec in self.blocks)
        return self.decomposition.gap

    def evolve(self, u0, t: float) -> np.ndarray:
        u0 = _check_state(u0, self.grid)
        if t < 0:
            raise ValueError("time must be nonnegative")
        if self.kind is FlowKind.T2:
            c = inner(u0, self.h, self.grid.spacing)
            rest = u0 - np.multiply.outer(c, self.h)
            return semigroup_apply(self.decomposition, t, rest) + np.multiply.outer(c, self.h)
        if self.kind is FlowKind.T3:
            out = np.empty_like(u0)
            for idx, dec in self.blocks:
                out[..., idx] = semigroup_apply(dec, t, u0[..., idx])
            return out
        return semigroup_apply(self.decomposition, t, u0)

    def trajectory(self, u0, times) -> np.ndarray:
        """States at each of ``times``, shape (len(times), n)."""
        return np.stack([self.evolve(u0, t) for t in times])

    def h_is_stationary(self) -> bool:
        return discrete_energy(self.h, self.weight) == 0.0

    def steady_state(self, u0) -> np.ndarray:
        """Closed-form t -> infinity limit."""
        u0 = _check_state(u0, self.grid)
        avg = average(u0)[..., None] * np.ones(self.grid.size)
        c = inner(u0, self.h, self.grid.spacing)
        if self.kind is FlowKind.T2:
            return avg + np.multiply.outer(c, self.h)
        if self.kind is FlowKind.T3:
            out = np.empty_like(u0)
            for idx, _ in self.blocks:
                out[..., idx] = np.mean(u0[..., idx], axis=-1, keepdims=True)
            return out
        # T1 and Strong: projection onto the kernel, span{1} or span{1, h}
        if self.h_is_stationary():
            return avg + np.multiply.outer(c, self.h)
        return avg


def evolve(kind, u0, w: Weight, t: float) -> np.ndarray:
    return DiffusionFlow(kind, w).evolve(u0, t)


def steady_state(kind, u0, w: Weight) -> np.ndarray:
    return DiffusionFlow(kind, w).steady_state(u0)


def _operator_matrix(A) -> np.ndarray:
    return A.matrix if isinstance(A, DiscreteOperator) else np.asarray(A, dtype=float)


def implicit_euler_step(u, A, h_step: float) -> np.ndarray:
    """Proximal step: argmin_v E(v) + ||v - u||^2 / (2 h), i.e. (I + h A) v = u."""
    if not h_step > 0:
        raise ValueError("step size must be positive")
    M = np.eye(_operator_matrix(A).shape[0]) + h_step * _operator_matrix(A)
    return np.linalg.solve(M, np.asarray(u, dtype=float).T).T


def minimizing_movement(u0, A, h_step: float, t_final: float) -> np.ndarray:
    """floor(t_final / h_step) implicit Euler steps from u0."""
    if not h_step > 0:
        raise ValueError("step size must be positive")
    if t_final < 0:
        raise ValueError("final time must be nonnegative")
    n_steps = int(math.floor(t_final / h_step * (1 + 1e-12)))
    u = np.asarray(u0, dtype=float).T.copy()
    if n_steps == 0:
        return u.T
    factor = cho_factor(np.eye(u.shape[0]) + h_step * _operator_matrix(A))
    for _ in range(n_steps):
        u = cho_solve(factor, u)
    return u.T
