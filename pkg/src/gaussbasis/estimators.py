"""scikit-learn style wrappers around the functional core.

``FormationScalingRegressor`` fits the finite-size scaling law of ``-ln P``
against chain length. ``RotatedBasisAmplitudes`` maps batches of
configurations of a fixed Gaussian state to their amplitudes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .basis import BasisSpec, amplitude_phi, dual_for
from .scaling import classify, design_matrix, fit_scaling
from .state import GaussianState, amplitude_z

__all__ = ["FormationScalingRegressor", "RotatedBasisAmplitudes"]


class FormationScalingRegressor(RegressorMixin, BaseEstimator):
    """Least-squares fit of ``-ln P`` versus ``L``.

    Parameters
    ----------
    boundary : {"periodic", "open"}
        Selects the model ``γL + c_0 + c_1/L`` or ``γL + a ln L + b``.

    Attributes
    ----------
    fit_ : ScalingFit
    coef_ : ndarray of shape (3,)
    gamma_ : float
    s_or_a_ : float
        Boundary entropy ``s`` (periodic) or log coefficient ``a`` (open).
    stderr_ : ndarray of shape (3,)
    class_ : str
        Boundary-class label or ``"unresolved"``.
    """

    def __init__(self, boundary: str = "periodic"):
        self.boundary = boundary

    def fit(self, X, y):
        X, y = check_X_y(X, y, ensure_min_samples=1)
        if X.shape[1] != 1:
            raise ValueError("X must have a single column of chain lengths")
        self.fit_ = fit_scaling(X[:, 0], y, self.boundary)
        self.coef_ = np.array(self.fit_.coef)
        self.stderr_ = np.array(self.fit_.stderr)
        self.gamma_ = self.fit_.gamma
        self.s_or_a_ = self.fit_.s_or_a
        self.class_ = classify(self.fit_).label
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        X = check_array(X)
        return design_matrix(X[:, 0], self.boundary) @ self.coef_


class RotatedBasisAmplitudes(TransformerMixin, BaseEstimator):
    """Amplitudes of a fixed Gaussian state for batches of configurations.

    Parameters
    ----------
    state : GaussianState
    phi, alpha : float
        Basis angles. ``phi=None`` selects the occupation basis, in which
        case rows of ``X`` are 0/1 occupations instead of ±1 signs.
    alpha_sign : {-1, 1}
        Phase convention per ``-`` sign, see :func:`~gaussbasis.basis.amplitude_phi`.

    ``fit`` builds and caches the dual matrices; ``transform`` returns a
    complex column of amplitudes.
    """

    def __init__(self, state: GaussianState | None = None, phi: float | None = 0.0, alpha: float = 0.0, alpha_sign: int = -1):
        self.state = state
        self.phi = phi
        self.alpha = alpha
        self.alpha_sign = alpha_sign

    def fit(self, X=None, y=None):
        if not isinstance(self.state, GaussianState):
            raise TypeError("state must be a GaussianState")
        self.n_features_in_ = self.state.L
        if self.phi is not None:
            self.basis_ = BasisSpec(self.phi, self.alpha)
            self.dual_ = dual_for(self.state, self.phi)
        else:
            self.basis_ = None
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=np.int64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        if self.basis_ is None:
            out = [amplitude_z(self.state, row) for row in X]
        else:
            out = [amplitude_phi(self.state, row, self.basis_, self.alpha_sign) for row in X]
        return np.array(out, dtype=complex).reshape(-1, 1)
