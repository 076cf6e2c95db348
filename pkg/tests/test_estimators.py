import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from metastable_ac.estimators import ArrheniusRegressor, FamilyClassifier, LandscapeEstimator
from metastable_ac.landscape import representative


def test_landscape_estimator_transform():
    est = LandscapeEstimator(n=8).fit()
    x = representative(8, 0, "B").coords
    d = est.transform(x)
    assert d.shape == (1, len(est.minima_)) and d.min() == pytest.approx(0.0, abs=1e-12)
    assert clone(est).get_params() == est.get_params()
    with pytest.raises(NotFittedError):
        LandscapeEstimator().transform(x)


def test_landscape_estimator_continues_points():
    est = LandscapeEstimator(n=4, gamma=0.05, mode="full").fit()
    assert all(p.gamma == 0.05 for p in est.minima_ + est.saddles_)


def test_family_classifier():
    clf = FamilyClassifier().fit(np.zeros((1, 8)))
    X = np.vstack([representative(8, 0, "B").coords, representative(8, 1, "B").coords, np.zeros(8)])
    assert list(clf.predict(X)) == ["++++----", "B_1", "transient"]
    with pytest.raises(NotFittedError):
        FamilyClassifier().predict(X)


def test_arrhenius_regressor():
    eps = np.array([[0.1], [0.08], [0.06]])
    y = 3.0 * np.exp(0.5 / eps.ravel())
    r = ArrheniusRegressor().fit(eps, y)
    assert r.slope_ == pytest.approx(0.5)
    assert r.predict([[0.05]])[0] == pytest.approx(3.0 * np.exp(10.0))
    assert r.score(eps, y) == pytest.approx(1.0)
