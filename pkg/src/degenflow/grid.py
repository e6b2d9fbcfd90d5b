"""Periodic lattices on B = [-1, 1)^n and distances to the degeneration set."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Grid1D",
    "Grid2D",
    "GammaSet",
    "make_grid_1d",
    "make_grid_2d",
    "torus_distance_to_gamma",
    "distance_field",
    "ONE_D",
]

PERIOD = 2.0


@dataclass(frozen=True)
class Grid1D:
    """Node lattice x_i = i/m, i = -m..m-1, stored once per periodic node.

    Position ``p`` in a state vector corresponds to the lattice index
    ``i = p - m``.
    """

    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def size(self) -> int:
        return 2 * self.m

    @property
    def spacing(self) -> float:
        return 1.0 / self.m

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.m, self.m)

    @property
    def nodes(self) -> np.ndarray:
        return self.indices / self.m

    @property
    def is_even(self) -> bool:
        return self.m % 2 == 0

    def position(self, i: int) -> int:
        """Array position of lattice index ``i`` (wraps modulo 2m)."""
        return (i + self.m) % self.size

    @classmethod
    def from_size(cls, n_nodes: int) -> "Grid1D":
        if n_nodes < 2 or n_nodes % 2:
            raise ValueError(f"a periodic state needs an even number (>= 2) of nodes, got {n_nodes}")
        return cls(n_nodes // 2)


@dataclass(frozen=True)
class Grid2D:
    """Tensor product of two :class:`Grid1D` node sets (same m per axis)."""

    m: int

    def __post_init__(self):
        Grid1D(self.m)
        object.__setattr__(self, "m", int(self.m))

    @property
    def axis(self) -> Grid1D:
        return Grid1D(self.m)

    @property
    def shape(self) -> tuple[int, int]:
        return (2 * self.m, 2 * self.m)

    @property
    def spacing(self) -> float:
        return 1.0 / self.m

    @property
    def nodes(self) -> np.ndarray:
        return self.axis.nodes

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.nodes
        return np.meshgrid(x, x, indexing="ij")


@dataclass(frozen=True)
class GammaSet:
    """Degeneration set: the two points {-1/2, 1/2} or a circle in the square."""

    kind: str = "points"
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 0.5

    def __post_init__(self):
        if self.kind not in ("points", "circle"):
            raise ValueError(f"unknown Gamma kind {self.kind!r}")
        if self.kind == "circle":
            cx, cy = self.center
            r = self.radius
            if not 0 < r < 1:
                raise ValueError("circle radius must lie in (0, 1)")
            if not (-1 < cx - r and cx + r < 1 and -1 < cy - r and cy + r < 1):
                raise ValueError("circle must lie strictly inside [-1, 1)^2")
            object.__setattr__(self, "center", (float(cx), float(cy)))

    @property
    def dimension(self) -> int:
        return 1 if self.kind == "points" else 2

    @classmethod
    def one_d(cls) -> "GammaSet":
        return cls("points")

    @classmethod
    def circle(cls, center=(0.0, 0.0), radius: float = 0.5) -> "GammaSet":
        return cls("circle", tuple(center), float(radius))


ONE_D = GammaSet.one_d()


def make_grid_1d(m: int) -> Grid1D:
    return Grid1D(m)


def make_grid_2d(m: int) -> Grid2D:
    return Grid2D(m)


def _periodic_abs(d):
    d = np.abs(d) % PERIOD
    return np.minimum(d, PERIOD - d)


def torus_distance_to_gamma(x, gamma: GammaSet = ONE_D):
    """Distance on the flat torus of period 2 from ``x`` to ``gamma``.

    For the 1D set, ``x`` is a scalar or array of points. For a circle, the
    last axis of ``x`` holds the two coordinates.
    """
    x = np.asarray(x, dtype=float)
    if gamma.kind == "points":
        d = np.minimum(_periodic_abs(x - 0.5), _periodic_abs(x + 0.5))
    else:
        if x.shape[-1:] != (2,):
            raise ValueError("circle distance needs points with 2 coordinates on the last axis")
        dx = _periodic_abs(x[..., 0] - gamma.center[0])
        dy = _periodic_abs(x[..., 1] - gamma.center[1])
        # nearest periodic image of the center; the circle sits inside one cell
        d = np.abs(np.hypot(dx, dy) - gamma.radius)
    return d[()] if d.ndim == 0 else d


def distance_field(grid, gamma: GammaSet = ONE_D) -> np.ndarray:
    """Torus distance to ``gamma`` sampled at every node of ``grid``."""
    if isinstance(grid, Grid1D):
        if gamma.kind != "points":
            raise ValueError("a 1D grid needs the 1D degeneration set")
        return torus_distance_to_gamma(grid.nodes, gamma)
    X, Y = grid.mesh()
    return torus_distance_to_gamma(np.stack([X, Y], axis=-1), gamma)
