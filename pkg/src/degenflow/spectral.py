"""Eigen-decomposition of the discrete operator and the exact semigroup e^{-tA}."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .disc_ops import DiscreteOperator

__all__ = [
    "SpectralDecomposition",
    "eigendecompose",
    "semigroup_apply",
    "poincare_constant",
    "analyticity_bound",
]

SYMMETRY_TOL = 1e-12
KERNEL_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs (mu_k, phi_k), phi_k orthonormal in the d_m-weighted inner product.

    ``eigenvectors[:, k]`` is phi_k. The first ``kernel_dim`` eigenvalues are
    exactly zero and phi_0 is the normalized constant.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    kernel_dim: int
    spacing: float

    @property
    def size(self) -> int:
        return self.eigenvalues.size

    @property
    def gap(self) -> float:
        """Smallest eigenvalue above the kernel."""
        if self.kernel_dim >= self.size:
            raise ValueError("operator is identically zero; no spectral gap")
        return float(self.eigenvalues[self.kernel_dim])

    def coefficients(self, u) -> np.ndarray:
        return np.asarray(u, dtype=float) @ self.eigenvectors * self.spacing

    def synthesize(self, coef) -> np.ndarray:
        return np.asarray(coef) @ self.eigenvectors.T

    def kernel_projection(self, u) -> np.ndarray:
        k = self.kernel_dim
        return self.coefficients(u)[..., :k] @ self.eigenvectors[:, :k].T


def _orthonormal_kernel(Q: np.ndarray) -> np.ndarray:
    """Rotate an orthonormal kernel basis so its first vector is the constant."""
    n, k = Q.shape
    ones = np.full((n, 1), 1.0 / np.sqrt(n))
    if not np.isclose(np.linalg.norm(Q.T @ ones), 1.0, atol=1e-8):
        raise np.linalg.LinAlgError("constants are not in the kernel of the operator")
    basis, _ = np.linalg.qr(np.hstack([ones, Q]))
    basis = basis[:, :k]
    signs = np.sign(basis.sum(axis=0))
    signs[signs == 0] = 1.0
    basis = basis * signs
    basis[:, 0] = ones[:, 0]
    return basis


def eigendecompose(op, spacing: float | None = None) -> SpectralDecomposition:
    """Full decomposition of a symmetric PSD operator (DiscreteOperator or matrix + spacing)."""
    if isinstance(op, DiscreteOperator):
        A, spacing = op.matrix, op.spacing
    else:
        A = np.asarray(op, dtype=float)
        if spacing is None:
            raise ValueError("a bare matrix needs its grid spacing")
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A - A.T)) > SYMMETRY_TOL * scale:
        raise ValueError("operator is not symmetric")
    mu, V = np.linalg.eigh(A)
    tol = KERNEL_RTOL * max(float(mu[-1]), 0.0)
    if mu[0] < -max(tol, 1e-12):
        raise ValueError("operator is not positive semidefinite")
    kdim = int(np.count_nonzero(mu <= tol))
    mu = mu.copy()
    mu[:kdim] = 0.0
    if kdim:
        V = V.copy()
        V[:, :kdim] = _orthonormal_kernel(V[:, :kdim])
    phi = V / np.sqrt(spacing)
    mu.flags.writeable = False
    phi.flags.writeable = False
    return SpectralDecomposition(mu, phi, kdim, float(spacing))


def semigroup_apply(dec: SpectralDecomposition, t: float, u0) -> np.ndarray:
    """e^{-tA} u0 = sum_k exp(-mu_k t) <u0, phi_k> phi_k (rows of ``u0`` are independent states)."""
    if t < 0:
        raise ValueError("semigroup time must be nonnegative")
    coef = dec.coefficients(u0)
    return dec.synthesize(coef * np.exp(-dec.eigenvalues * t))


def poincare_constant(dec: SpectralDecomposition) -> float:
    """c with ||u||^2 <= c <A u, u> on the orthogonal complement of the kernel: 1/mu_gap."""
    return 1.0 / dec.gap


def analyticity_bound(dec: SpectralDecomposition, t_grid, n_samples: int = 32, seed: int = 0) -> float:
    """max over t and random unit u0 of ||t A e^{-tA} u0|| (bounded by 1/e)."""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0):
        raise ValueError("times must be positive")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((n_samples, dec.size))
    coef = dec.coefficients(u)
    coef /= np.linalg.norm(coef, axis=1, keepdims=True)
    # the basis is orthonormal, so norms are l2 norms of coefficients
    best = 0.0
    for t in t_grid:
        s = dec.eigenvalues * t
        vals = np.linalg.norm(coef * (s * np.exp(-s)), axis=1)
        best = max(best, float(vals.max()))
    return best
