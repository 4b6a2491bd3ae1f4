import math

import numpy as np
import pytest
from hypothesis import given, strategies as hst

from shrinkers import (AmbientConfig, EndpointKind, HalfEntireKind, InitialData,
                       IntegratorSettings, admissible_limits, decompose, half_entire_kind,
                       integrate, integrate_both, segment_distance)


@pytest.fixture(scope="module")
def sphere2():
    c = AmbientConfig(2)
    return integrate(c, IntegratorSettings(), InitialData.axis_start(2.0))


def test_sphere_is_one_maximal_segment(sphere2):
    (seg,) = decompose(sphere2)
    assert seg.maximal and seg.degree == 0
    assert seg.type_label == "(0,-)"
    assert seg.left_end.kind is EndpointKind.AXIS_EXIT
    assert seg.right_end.kind is EndpointKind.AXIS_EXIT
    assert seg.orientation == -1
    assert np.all(np.diff(seg.x) > 0.0)
    r_sig, a_sig = seg.signature
    assert r_sig == pytest.approx(2.0, abs=1e-9)
    assert a_sig == pytest.approx(0.0, abs=1e-9)
    assert seg.extrema[0][0] == "max"
    he = half_entire_kind(AmbientConfig(2), seg)
    assert he.kind is HalfEntireKind.INNER_QUARTER_SPHERE or he.kind is \
        HalfEntireKind.OUTER_QUARTER_SPHERE


def test_inner_quarter_sphere_head():
    c = AmbientConfig(2)
    g = integrate(c, IntegratorSettings(), InitialData.axis_start(1.0), max_vertical=1)
    seg = decompose(g)[0]
    assert seg.right_end.kind is EndpointKind.AXIS_EXIT
    assert seg.left_end.kind is EndpointKind.VERTICAL_TANGENT
    he = half_entire_kind(c, seg)
    assert he.label == "I+"


def test_outer_quarter_sphere_head():
    c = AmbientConfig(2)
    g = integrate(c, IntegratorSettings(), InitialData.axis_start(3.0), max_vertical=1)
    he = half_entire_kind(c, decompose(g)[0])
    assert he.label == "O+"


def test_decompose_needs_two_samples(sphere2):
    from shrinkers import ProfileCurve
    one = ProfileCurve(sphere2.config, sphere2.s[:1], sphere2.x[:1], sphere2.r[:1],
                       sphere2.alpha[:1], sphere2.kappa[:1], (), sphere2.head, sphere2.tail)
    with pytest.raises(ValueError):
        decompose(one)


def test_segment_distance():
    c = AmbientConfig(2)
    st = IntegratorSettings(max_arclength=20.0)
    a = [g for g in decompose(integrate_both(c, st, InitialData.interior(0.0, 1.2, 0.0)))
         if g.signature is not None][0]
    b = [g for g in decompose(integrate_both(c, st, InitialData.interior(0.0, 1.3, 0.0)))
         if g.signature is not None][0]
    d = segment_distance(a, b)
    assert d == pytest.approx(abs(a.signature[0] - b.signature[0])
                              + abs(a.signature[1] - b.signature[1]))
    assert segment_distance(a, a) == 0.0


def test_limit_table():
    assert admissible_limits((0, 1)) == {"T-"}
    assert admissible_limits((0, -1)) == {"I-"}
    assert admissible_limits((1, 1)) == {"O-", "T-"}
    assert admissible_limits((1, -1)) == {"I-"}
    assert admissible_limits((2, 1)) == {"O-"}
    assert admissible_limits((2, -1)) == set()


@given(hst.sampled_from([(0, 1), (0, -1), (1, 1), (1, -1), (2, 1)]))
def test_limit_mirror_rule(tag):
    k, s = tag
    mirrored = (k, s * (-1) ** k)
    left = admissible_limits(mirrored, right_end_bounded=False)
    right = admissible_limits(tag, right_end_bounded=True)
    assert {lab[0] for lab in left} == {lab[0] for lab in right}
    assert all(lab.endswith("+") for lab in left)


@given(hst.integers(2, 3), hst.floats(0.2, 3.0), hst.floats(0.0, 2 * math.pi))
def test_degree_bound(n, r0, a0):
    c = AmbientConfig(n)
    g = integrate_both(c, IntegratorSettings(max_arclength=20.0),
                       InitialData.interior(0.0, r0, a0))
    for seg in decompose(g):
        if not seg.maximal:
            continue
        assert seg.degree <= 2
        if seg.degree == 2:
            assert seg.type_tag == (2, 1)
        for kind, _, r in seg.extrema:
            if kind == "max":
                assert r >= c.cylinder_radius - 1e-6
            else:
                assert r <= c.cylinder_radius + 1e-6
        if seg.signature is not None:
            assert seg.crossings == 1
            assert abs(seg.signature[1]) < math.pi / 2
