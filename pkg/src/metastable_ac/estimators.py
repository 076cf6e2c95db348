"""scikit-learn style wrappers around the landscape, classifier and Arrhenius fit."""
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin
from sklearn.exceptions import NotFittedError

from .landscape import build_transition_graph, continue_to_gamma
from .simulate import arrhenius_fit, classify_configuration


class LandscapeEstimator(BaseEstimator):
    """Stationary points and transition graph of one ring.

    ``fit`` ignores its data; everything is determined by the parameters.
    After fitting, ``minima_`` and ``saddles_`` hold (continued) points and
    ``graph_`` the transition graph at gamma = 0.
    """

    def __init__(self, n=8, gamma=0.0, mode="orbits", step=0.01):
        self.n = n
        self.gamma = gamma
        self.mode = mode
        self.step = step

    def fit(self, X=None, y=None):
        graph = build_transition_graph(self.n, self.mode)
        if self.gamma:
            self.minima_ = [continue_to_gamma(p, self.gamma, step=self.step) for p in graph.minima]
            self.saddles_ = [continue_to_gamma(p, self.gamma, step=self.step) for p in graph.saddles]
        else:
            self.minima_, self.saddles_ = list(graph.minima), list(graph.saddles)
        self.graph_ = graph
        return self

    def transform(self, X):
        """Max-norm distance of each row of X to every fitted minimum."""
        if not hasattr(self, "minima_"):
            raise NotFittedError("LandscapeEstimator is not fitted")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        m = np.array([p.coords for p in self.minima_])
        return np.max(np.abs(X[:, None, :] - m[None, :, :]), axis=2)


class FamilyClassifier(BaseEstimator, ClassifierMixin):
    """Labels configurations as a +-1 word, a B_k family or 'transient'."""

    def __init__(self, gamma=0.0, b0_tol=0.3, family_tol=0.1):
        self.gamma = gamma
        self.b0_tol = b0_tol
        self.family_tol = family_tol

    def fit(self, X, y=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        if not hasattr(self, "n_features_in_"):
            raise NotFittedError("FamilyClassifier is not fitted")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.array([classify_configuration(x, self.gamma, self.b0_tol, self.family_tol).name
                         for x in X], dtype=object)


class ArrheniusRegressor(BaseEstimator, RegressorMixin):
    """Fits log(time) = intercept + slope / eps; X holds eps in one column."""

    def fit(self, X, y):
        eps = np.asarray(X, dtype=float).reshape(-1)
        self.slope_, self.intercept_ = arrhenius_fit(eps, y)
        return self

    def predict(self, X):
        if not hasattr(self, "slope_"):
            raise NotFittedError("ArrheniusRegressor is not fitted")
        eps = np.asarray(X, dtype=float).reshape(-1)
        return np.exp(self.intercept_ + self.slope_ / eps)
