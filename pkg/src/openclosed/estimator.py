"""Estimator-style wrapper around the disk-function computation."""
from __future__ import annotations

import inspect

import numpy as np

from . import load_input, pipeline
from .hypergeometric import disk_function
from .numeric_mirror import theta_eval


class NotFittedError(RuntimeError):
    pass


class DiskPotential:
    """Fit on a geometry, then evaluate the winding expansion W_k at numeric (q, x) points.

    Follows the get_params / set_params / fit / predict shape of scikit-learn estimators
    without depending on it.
    """

    def __init__(self, order=8, sector=0, theta_power=0):
        self.order = order
        self.sector = sector
        self.theta_power = theta_power

    def get_params(self, deep=True):
        names = inspect.signature(type(self).__init__).parameters
        return {k: getattr(self, k) for k in names if k != "self"}

    def set_params(self, **params):
        valid = self.get_params()
        for k, v in params.items():
            if k not in valid:
                raise ValueError(f"invalid parameter {k!r} for {type(self).__name__}")
            setattr(self, k, v)
        return self

    def fit(self, geometry, y=None):
        inp = load_input(geometry)
        self.fan3_, self.fan4_, self.charges_ = pipeline(inp)
        self.potential_ = disk_function(self.charges_, self.fan3_, self.fan4_,
                                        self.sector, self.order)
        self.n_features_in_ = self.potential_.n
        return self

    def _check_fitted(self):
        if not hasattr(self, "potential_"):
            raise NotFittedError("call fit before predict")

    def predict(self, X):
        """(x d/dx)^theta_power W at each row of X; rows are (q_1, ..., q_nL, x)."""
        self._check_fitted()
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        vals = np.array([theta_eval(self.potential_, row, self.theta_power) for row in X])
        return vals.real if np.all(vals.imag == 0) else vals

    def coefficients(self):
        self._check_fitted()
        return {tuple(str(x) for x in e): str(v) for e, _, v in self.potential_.items()}

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"
