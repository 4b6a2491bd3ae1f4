import math
import os
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as hst

from shrinkers import AmbientConfig, InitialData, IntegratorSettings, integrate
from shrinkers.export import (curve_csv, curve_record, euler_characteristic, fmt, mesh_obj,
                              read_curve_csv, render_svg, revolve_mesh, write_atomic,
                              write_json)


@pytest.fixture(scope="module")
def sphere():
    return integrate(AmbientConfig(2), IntegratorSettings(), InitialData.axis_start(2.0))


@given(hst.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips(v):
    assert float(fmt(v)) == v


def test_csv_round_trip(tmp_path, sphere):
    p = tmp_path / "c.csv"
    write_atomic(str(p), curve_csv(sphere))
    t = read_curve_csv(str(p))
    for a, b in ((t.s, sphere.s), (t.x, sphere.x), (t.r, sphere.r), (t.alpha, sphere.alpha)):
        assert np.array_equal(a, b)
    assert p.read_text().splitlines()[0] == "s,x,r,alpha"


def test_csv_rejects_bad_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_curve_csv(str(p))


def test_svg_from_csv_is_identical(tmp_path, sphere):
    direct = render_svg(2, sphere.x, sphere.r)
    p = tmp_path / "c.csv"
    write_atomic(str(p), curve_csv(sphere))
    t = read_curve_csv(str(p))
    assert render_svg(2, t.x, t.r) == direct
    assert direct.startswith("<svg") and "stroke-dasharray" in direct
    assert direct.count("<polyline") == 1


def test_write_atomic_replaces_and_cleans_up(tmp_path):
    p = tmp_path / "sub" / "f.txt"
    write_atomic(str(p), "one")
    write_atomic(str(p), "two")
    assert p.read_text() == "two"
    assert os.listdir(p.parent) == ["f.txt"]


def test_json_is_sorted_and_finite(tmp_path):
    p = tmp_path / "j.json"
    write_json(str(p), {"b": np.float64(1.5), "a": [np.int64(2), float("nan")]})
    assert p.read_text() == '{\n  "a": [\n    2,\n    null\n  ],\n  "b": 1.5\n}\n'


def test_curve_record(sphere):
    rec = curve_record(sphere)
    assert rec["n"] == 2 and rec["head"] == "axis_hit" and rec["tail"] == "axis_hit"
    assert len(rec["segments"]) == 1
    assert rec["segments"][0]["type"] == "(0,-)"
    assert {e["kind"] for e in rec["events"]} >= {"r_axis_crossing", "axis_hit"}


def _closed_manifold(faces):
    edges = Counter()
    for a, b, c in faces:
        for p, q in ((a, b), (b, c), (c, a)):
            edges[(min(p, q), max(p, q))] += 1
    return set(edges.values()) == {2}


def test_sphere_mesh(sphere):
    verts, faces = revolve_mesh(sphere.x, sphere.r, 24)
    assert len(verts) == 2 + 24 * (len(sphere) - 2)
    assert euler_characteristic(len(verts), faces) == 2
    assert _closed_manifold(faces)
    assert np.allclose(np.linalg.norm(verts, axis=1), 2.0, atol=1e-7)


def test_torus_mesh(torus2):
    _, curve = torus2
    verts, faces = revolve_mesh(curve.x, curve.r, 16)
    assert euler_characteristic(len(verts), faces) == 0
    assert _closed_manifold(faces)


def test_open_profile_mesh_is_a_disc():
    x = np.linspace(1.0, 0.0, 20)
    r = np.sqrt(np.maximum(1.0 - x * x, 0.0))
    r[0] = 0.0
    verts, faces = revolve_mesh(x, r, 12)
    assert euler_characteristic(len(verts), faces) == 1


def test_mesh_obj_text():
    verts, faces = revolve_mesh([1.0, 0.0, -1.0], [0.0, 1.0, 0.0], 4)
    text = mesh_obj(verts, faces)
    lines = text.splitlines()
    assert sum(l.startswith("v ") for l in lines) == 6
    assert sum(l.startswith("f ") for l in lines) == 8
    assert "f 1 " in text


def test_mesh_rejects_bad_input():
    with pytest.raises(ValueError):
        revolve_mesh([0.0, 1.0], [1.0, 1.0], 2)
    with pytest.raises(ValueError):
        revolve_mesh([0.0], [1.0], 8)
