"""scikit-learn style wrappers.

Rows of ``X`` are periodic states sampled on the 2m nodes of [-1, 1); the
number of columns fixes the grid at ``fit`` time.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .flows import DiffusionFlow, FlowKind, minimizing_movement
from .frac_kernel import MultiplierSpec, apply_multiplier
from .gamma_viscosity import make_mollifier, mollify
from .grid import Grid1D
from .weights import edge_diffusivity, power_weight, strong_weight

__all__ = ["DegenerateDiffusion", "FractionalSmoother", "EdgeDiffusivity", "Mollify"]


def _check_states(X, n_features=None):
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"X has {X.shape[1]} features, but the estimator was fitted with {n_features}")
    Grid1D.from_size(X.shape[1])
    return X


class DegenerateDiffusion(TransformerMixin, BaseEstimator):
    """Evolve states under one of the degenerate diffusion flows.

    Parameters
    ----------
    sigma : float
        Degeneracy exponent of the weight d(x, Gamma)^sigma (weak) or
        d(x, Gamma)^(1 + sigma) when ``flow="Strong"``.
    flow : {"T1", "T2", "T3", "Strong"}
    t : float
        Evolution time used by ``transform``. ``np.inf`` returns the
        closed-form steady state.
    h_step : float or None
        If set, integrate with implicit Euler (minimizing movements) instead
        of the exact spectral semigroup.
    """

    def __init__(self, sigma=0.5, flow="T1", t=1.0, h_step=None):
        self.sigma = sigma
        self.flow = flow
        self.t = t
        self.h_step = h_step

    def fit(self, X, y=None):
        X = _check_states(X)
        kind = FlowKind(self.flow)
        grid = Grid1D.from_size(X.shape[1])
        if kind is FlowKind.STRONG:
            weight = strong_weight(grid, self.sigma)
        else:
            weight = power_weight(grid, self.sigma)
        self.flow_ = DiffusionFlow(kind, weight)
        self.grid_ = grid
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "flow_")
        X = _check_states(X, self.n_features_in_)
        if self.t < 0:
            raise ValueError("t must be nonnegative")
        if np.isinf(self.t):
            return self.flow_.steady_state(X)
        if self.h_step is not None:
            if self.flow_.kind is not FlowKind.T1 and self.flow_.kind is not FlowKind.STRONG:
                raise ValueError("implicit Euler is available for the T1 and Strong flows")
            return minimizing_movement(X, self.flow_.operator, self.h_step, self.t)
        return self.flow_.evolve(X, self.t)

    def steady_state(self, X):
        check_is_fitted(self, "flow_")
        return self.flow_.steady_state(_check_states(X, self.n_features_in_))


class _Stateless(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        X = _check_states(X)
        self.n_features_in_ = X.shape[1]
        return self

    def _validated(self, X):
        check_is_fitted(self, "n_features_in_")
        return _check_states(X, self.n_features_in_)


class FractionalSmoother(_Stateless):
    """Row-wise N_eps = F^-1 |k|^-eps F (zero mode annihilated)."""

    def __init__(self, eps=0.5):
        self.eps = eps

    def transform(self, X):
        X = self._validated(X)
        spec = MultiplierSpec(self.eps, 1)
        return np.stack([apply_multiplier(row, spec) for row in X])


class EdgeDiffusivity(_Stateless):
    """Row-wise frozen edge-detector coefficient a_eps(u0)."""

    def __init__(self, eps=0.75):
        self.eps = eps

    def transform(self, X):
        X = self._validated(X)
        return np.stack([edge_diffusivity(row, self.eps).samples for row in X])


class Mollify(_Stateless):
    """Row-wise periodic convolution with the bump mollifier of the given scale."""

    def __init__(self, scale=16):
        self.scale = scale

    def transform(self, X):
        X = self._validated(X)
        mol = make_mollifier(Grid1D.from_size(X.shape[1]), self.scale)
        return mollify(X, mol)
