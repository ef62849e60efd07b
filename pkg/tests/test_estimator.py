from math import factorial

import numpy as np
import pytest

from openclosed.estimator import DiskPotential, NotFittedError


def test_params_round_trip():
    est = DiskPotential(order=5)
    assert est.get_params() == {"order": 5, "sector": 0, "theta_power": 0}
    est.set_params(order=3, theta_power=1)
    assert est.order == 3 and est.theta_power == 1
    with pytest.raises(ValueError):
        est.set_params(depth=2)


def test_predict_requires_fit():
    with pytest.raises(NotFittedError):
        DiskPotential().predict([[0.1]])


def test_predict_matches_series():
    est = DiskPotential(order=8).fit("c3_f1")
    x = 0.01
    expected = sum((-1) ** d * factorial(2 * d - 1) / (d * factorial(d) ** 2) * x ** d
                   for d in range(1, 9))
    assert est.predict([[x]])[0] == pytest.approx(expected, rel=1e-12)
    assert est.coefficients()[("2",)] == "3/4"


def test_predict_shape_checked():
    est = DiskPotential(order=3).fit("kp2_f1")
    assert est.predict(np.array([[0.01, 0.02], [0.0, 0.01]])).shape == (2,)
    with pytest.raises(ValueError):
        est.predict([[0.1]])
