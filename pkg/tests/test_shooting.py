import math

import numpy as np
import pytest

from shrinkers import (AmbientConfig, BracketError, EventKind, Family, IntegratorSettings,
                       Near, Termination, Topology, bracket_bisect, shoot)
from shrinkers.shooting import family_settings, mirror_curve
from shrinkers.verification import gauss_bonnet_closed

# regression constants at n = 2, computed by this package (bisection to 1e-12)
R_ANG = 0.437123967096806
NEAR_PLANE = [2.0, 0.8558154760510659, 0.393456561061088, 0.01083350781491026]
NEAR_TORUS = [math.sqrt(2.0), 0.8368423874491275, 0.7878661950241224]
NEAR_CYLINDER = [R_ANG, 0.8368423874486175, 1.0213102796190354]
REG_TOL = 1e-9
T_TOL = 1e-12


def test_angenent_torus(cfg2, torus2):
    r_ang, curve = torus2
    assert r_ang == pytest.approx(R_ANG, abs=REG_TOL)
    assert curve.is_closed and curve.closure_defect() < 1e-6
    # convex, between the axis and M1; it must cross the sphere (two compact
    # shrinkers meet), so r > sqrt(2n) at the top
    assert np.all(curve.r > 0.0) and np.all(curve.r < cfg2.M1)
    assert np.all(curve.kappa > 0.0)
    assert curve.r.max() > cfg2.sphere_radius
    # mirror symmetry: reflect x and compare against the curve as a point set
    pts = np.column_stack((curve.x, curve.r))
    ref = np.column_stack((-curve.x, curve.r))
    d = np.min(np.hypot(ref[:, None, 0] - pts[None, ::4, 0],
                        ref[:, None, 1] - pts[None, ::4, 1]), axis=1)
    assert np.max(d) < 0.02  # sample spacing of the thinned comparison set
    assert gauss_bonnet_closed(cfg2, curve) == pytest.approx(2 * math.pi, abs=1e-6)
    assert len(curve.events_of(EventKind.VERTICAL_TANGENT)) == 2


def _check_family(fam, expected, counts, topologies, decreasing):
    ts = fam.ts
    assert ts == pytest.approx(expected, abs=REG_TOL)
    assert [e.segment_count for e in fam.entries] == counts
    assert [e.topology for e in fam.entries] == topologies
    steps = np.diff(ts)
    assert np.all(steps < 0) if decreasing else np.all(steps > 0)


def test_near_plane(families2):
    fam = families2[Near.PLANE]
    assert fam.diagnostic is None
    _check_family(fam, NEAR_PLANE, [1, 2, 3, 4],
                  [Topology.SPHERE, Topology.PLANE, Topology.SPHERE, Topology.PLANE], True)
    assert [e.limit for e in fam.entries[1:]] == ["T+", "I-", "T+"]
    # Lambda[k](Q[t]) alternates (0,-), (0,+) just below t_k
    assert fam.entries[3].types == ("(0,-)", "(0,+)", "(0,-)", "(0,+)")
    assert fam.entries[0].curve.tail is Termination.AXIS_HIT


def test_near_torus_first_entries(families2):
    fam = families2[Near.ANGENENT_TORUS]
    _check_family(fam, NEAR_TORUS, [1, 3, 5],
                  [Topology.CYLINDER, Topology.SPHERE, Topology.CYLINDER], True)
    assert fam.r_ang == pytest.approx(R_ANG, abs=REG_TOL)


def test_near_torus_stops_at_third_entry(families2):
    # Lambda[3] keeps the type (0,-) on (r_Ang, t_2); see the decision notes
    fam = families2[Near.ANGENENT_TORUS]
    assert len(fam.entries) == 3
    assert "Lambda[3]" in fam.diagnostic


def test_near_cylinder(families2):
    fam = families2[Near.CYLINDER]
    assert fam.diagnostic is None
    _check_family(fam, NEAR_CYLINDER, [2, 3, 4],
                  [Topology.TORUS, Topology.SPHERE, Topology.TORUS], False)
    assert fam.entries[2].curve.is_closed


def test_cross_family_consistency(families2):
    # the first immersed sphere is reached from both sides of the cylinder scan
    a = families2[Near.ANGENENT_TORUS].entries[1].t
    b = families2[Near.CYLINDER].entries[1].t
    assert abs(a - b) < 1e-9


def _rebisect(cfg, st, family, k, t, predicate):
    return bracket_bisect(cfg, family_settings(st), family, k, t - 3.7e-4, t + 2.9e-4,
                          predicate=predicate, t_tol=T_TOL).t


@pytest.mark.parametrize("near,k,family,predicate", [
    (Near.PLANE, 1, Family.X_AXIS, "type"),
    (Near.PLANE, 2, Family.X_AXIS, "type"),
    (Near.PLANE, 3, Family.X_AXIS, "type"),
    (Near.ANGENENT_TORUS, 1, Family.R_AXIS, "type"),
    (Near.ANGENENT_TORUS, 2, Family.R_AXIS, "type"),
    (Near.CYLINDER, 1, Family.R_AXIS, "type"),
])
def test_bracket_independence(cfg2, st, families2, near, k, family, predicate):
    e = families2[near].entries[k]
    if near is Near.PLANE and k == 3:
        # t_3 is close to zero; keep the shifted bracket positive
        t2 = bracket_bisect(cfg2, family_settings(st), family, k, 0.5 * e.t, e.t + 2.9e-4,
                            t_tol=T_TOL).t
    else:
        t2 = _rebisect(cfg2, st, family, k, e.t, predicate)
    assert abs(t2 - e.t) <= 10 * T_TOL


def test_bracket_independence_perpendicular(cfg2, st, families2):
    e = families2[Near.CYLINDER].entries[2]
    t2 = _rebisect(cfg2, st, Family.R_AXIS, 2, e.t, "perpendicular")
    assert abs(t2 - e.t) <= 10 * T_TOL


def test_immersed_sphere(cfg2, immersed2):
    e = immersed2
    assert R_ANG < e.t < cfg2.cylinder_radius
    assert e.segment_count == 3 and e.topology is Topology.SPHERE
    c = e.curve
    assert c.head is Termination.AXIS_HIT and c.tail is Termination.AXIS_HIT
    assert abs(math.cos(c.alpha[0])) < 1e-6 and abs(math.cos(c.alpha[-1])) < 1e-6
    assert c.r[0] == 0.0 and c.r[-1] == 0.0


def test_same_class_raises(cfg2, st):
    with pytest.raises(BracketError):
        bracket_bisect(cfg2, st, Family.X_AXIS, 1, 1.0, 1.1)


def test_shoot_rejects_bad_parameters(cfg2, st):
    with pytest.raises(ValueError):
        shoot(cfg2, st, Family.X_AXIS, 0.0, 1)
    with pytest.raises(ValueError):
        shoot(cfg2, st, Family.R_AXIS, 1.0, -1)


def test_shot_on_the_cylinder(cfg2, st):
    shot = shoot(cfg2, st, Family.R_AXIS, cfg2.cylinder_radius, 1)
    assert np.all(shot.curve.r == cfg2.cylinder_radius)
    assert shot.topology is Topology.CYLINDER or shot.topology is None


def test_mirror_curve_symmetry(cfg2, st):
    shot = shoot(cfg2, st, Family.R_AXIS, 1.2, 2)
    c = shot.curve
    m = len(c)
    assert m % 2 == 1
    assert np.array_equal(c.x, -c.x[::-1])
    assert np.array_equal(c.r, c.r[::-1])
    assert np.array_equal(c.s, -c.s[::-1])
    idx = [s.index for s in shot.segments]
    assert idx == list(range(idx[0], idx[0] + len(idx)))
    assert -idx[0] == idx[-1]
