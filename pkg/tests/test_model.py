import math

import numpy as np
import pytest
from hypothesis import given, strategies as hst
from scipy.integrate import quad

from shrinkers import (AmbientConfig, GeodesicState, InitialData, ProfileCurve, Reference,
                       Termination, exact_solution, residual)

dims = hst.integers(min_value=2, max_value=10)


@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_radii(n):
    c = AmbientConfig(n)
    assert c.sphere_radius == pytest.approx(math.sqrt(2 * n), abs=1e-15)
    assert c.cylinder_radius == pytest.approx(math.sqrt(2 * (n - 1)), abs=1e-15)
    assert c.M1 == pytest.approx(c.cylinder_radius + 2.0)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_m1_solves_defining_integral(n):
    c = AmbientConfig(n)
    m = 2.0 * c.m1
    val, _ = quad(lambda t: t ** (-(n - 1)), m, 1.0, epsabs=1e-13, epsrel=1e-13)
    assert val == pytest.approx(2.0 / (math.sqrt(2.0 * (n - 1)) - 1.0), rel=1e-10)


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5, True, "2"])
def test_config_rejects_bad_dimension(bad):
    with pytest.raises((ValueError, TypeError)):
        AmbientConfig(bad)


def test_initial_data_validation():
    with pytest.raises(ValueError):
        InitialData.interior(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        InitialData.axis_start(-1.0)
    q = InitialData.axis_start(2.0)
    assert q.on_axis and q.alpha0 == math.pi / 2


@given(dims, hst.floats(min_value=0.0, max_value=1.0))
def test_sphere_is_exact_solution(n, u):
    c = AmbientConfig(n)
    s = u * math.pi * c.sphere_radius
    st = exact_solution(c, Reference.SPHERE, s)
    assert math.hypot(st.x, st.r) == pytest.approx(c.sphere_radius, rel=1e-14)
    if st.r > 1e-6:
        assert abs(residual(c, st, 1.0 / c.sphere_radius)) < 1e-10


@given(dims, hst.floats(min_value=1e-3, max_value=100.0))
def test_plane_and_cylinder_are_exact_solutions(n, s):
    c = AmbientConfig(n)
    for which in (Reference.PLANE, Reference.CYLINDER):
        st = exact_solution(c, which, s)
        assert abs(residual(c, st, 0.0)) < 1e-10


def test_sphere_arclength_range():
    c = AmbientConfig(2)
    with pytest.raises(ValueError):
        exact_solution(c, Reference.SPHERE, 10.0)


def test_residual_undefined_on_axis():
    with pytest.raises(ValueError):
        residual(AmbientConfig(2), GeodesicState(0.0, 1.0, 0.0, 0.0), 0.0)


def test_closure_defect_of_circle():
    th = np.linspace(0.0, 2 * math.pi, 9)
    c = ProfileCurve(AmbientConfig(2), th, np.cos(th), 3 + np.sin(th), th + math.pi / 2,
                     np.ones(9), (), Termination.START, Termination.CLOSED)
    assert c.closure_defect() < 1e-12
    assert c.is_closed and len(c) == 9
    assert c.state(0).tangent == pytest.approx((0.0, 1.0), abs=1e-15)
