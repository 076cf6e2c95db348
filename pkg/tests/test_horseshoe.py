import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from metastable_ac.errors import InputError, NumericError
from metastable_ac.horseshoe import (LAMBDA_C, alpha_hat, check_domain, cubic_roots,
                                     horseshoe_inverse, horseshoe_map, newton_stationary,
                                     periodic_solutions)
from metastable_ac.model import _gradient

LAMS = st.floats(-0.38, 0.38)


@given(LAMS)
def test_cubic_roots_solve_the_cubic(lam):
    r = cubic_roots(lam)
    assert r[0] < r[1] < r[2]
    for a in r:
        assert abs(a**3 - a - lam) < 1e-12
    # Vieta: no quadratic term and product equals lambda
    assert abs(sum(r)) < 1e-12
    assert abs(r[0] * r[1] * r[2] - lam) < 1e-12


def test_critical_lambda_value():
    assert LAMBDA_C == pytest.approx(2 / (3 * math.sqrt(3)))
    with pytest.raises(InputError):
        cubic_roots(0.4)


@given(LAMS)
def test_alpha_hat_is_largest_root_of_abs_lambda(lam):
    assert alpha_hat(lam) == pytest.approx(cubic_roots(abs(lam))[2])


@given(st.floats(0.01, 0.2), st.floats(-0.3, 0.3), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_horseshoe_inverse_undoes_map(gamma, lam, x, y):
    u = horseshoe_map(gamma, lam, horseshoe_inverse(gamma, lam, (x, y)))
    assert u == pytest.approx((x, y), abs=1e-9)


def test_horseshoe_map_is_singular_at_zero_coupling():
    with pytest.raises(NumericError):
        horseshoe_map(0.0, 0.0, (0.0, 0.0))


def test_orbits_of_the_map_are_stationary_points():
    # a periodic orbit of T is a ring configuration with grad V = lambda 1
    gamma, lam = 0.05, 0.0
    x = newton_stationary(np.array([1.0, 1.0, -1.0, 0.0, -1.0]), gamma, lam)
    assert np.max(np.abs(_gradient(x, gamma) - lam)) < 1e-12
    pt = (x[1], x[0])
    # T expands errors by about 2/gamma per step, so only a few steps are compared
    for k in range(3):
        pt = horseshoe_map(gamma, lam, pt)
        assert pt[0] == pytest.approx(x[(k + 2) % 5], abs=1e-7)


def test_domain_membership():
    d = check_domain(0.05, 0.0)
    assert d.in_D and d.in_Dprime
    assert not check_domain(0.24, 0.3).in_D
    assert d.contains("+", 1.0) and d.contains("-", -1.0) and d.contains("0", 0.0)
    assert not d.contains("+", 0.5)
    with pytest.raises(InputError):
        check_domain(0.3, 0.0)


def test_sharp_strips_sit_inside_wide_strips():
    for gamma, lam in [(0.02, 0.0), (0.05, 0.1), (0.1, -0.2)]:
        d = check_domain(gamma, lam)
        for s in "-0+":
            lo, hi = d.sharp_strip_bounds[s]
            wlo, whi = d.strip_bounds[s]
            assert wlo - 1e-12 <= lo <= hi <= whi + 1e-12


def test_period_four_count():
    assert len(periodic_solutions(4, 0.05, 0.0)) == 81
