"""Deterministic file outputs: curve CSV, JSON records, SVG figures and OBJ meshes.

Every writer formats floats with 17 significant digits, so a CSV is a
lossless archive of the samples and re-reading it reproduces the same SVG
and OBJ bytes. Files are written to a temporary name and renamed into place.
"""

import json
import math
import os
import tempfile
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .model import AmbientConfig, ProfileCurve
from .segments import Segment, decompose

__all__ = [
    "CurveTable",
    "FigureStyle",
    "fmt",
    "write_atomic",
    "write_json",
    "curve_csv",
    "read_curve_csv",
    "segment_record",
    "curve_record",
    "render_svg",
    "revolve_mesh",
    "mesh_obj",
    "euler_characteristic",
]


def fmt(v: float) -> str:
    """17-significant-digit decimal, exact under float round-trip."""
    return format(float(v), ".17g")


def write_atomic(path: str, text: str) -> str:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    path = os.path.abspath(path)
    folder = os.path.dirname(path)
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path: str, obj) -> str:
    return write_atomic(path, json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n")


@dataclass(frozen=True, eq=False)
class CurveTable:
    """Samples read back from a curve CSV."""

    s: np.ndarray
    x: np.ndarray
    r: np.ndarray
    alpha: np.ndarray

    def __len__(self):
        return self.s.shape[0]


def curve_csv(curve) -> str:
    """CSV text with header ``s,x,r,alpha``."""
    lines = ["s,x,r,alpha"]
    for s, x, r, a in zip(curve.s, curve.x, curve.r, curve.alpha):
        lines.append(f"{fmt(s)},{fmt(x)},{fmt(r)},{fmt(a)}")
    return "\n".join(lines) + "\n"


def read_curve_csv(path: str) -> CurveTable:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "s,x,r,alpha":
            raise ValueError(f"{path}: expected header 's,x,r,alpha', got {header!r}")
        rows = [line.split(",") for line in fh if line.strip()]
    if not rows:
        raise ValueError(f"{path}: no samples")
    data = np.array([[float(v) for v in row] for row in rows], dtype=float)
    if data.shape[1] != 4:
        raise ValueError(f"{path}: every row needs four columns")
    return CurveTable(data[:, 0].copy(), data[:, 1].copy(), data[:, 2].copy(),
                      data[:, 3].copy())


def _end_record(end):
    d = {"kind": end.kind.value, "x": end.x, "r": end.r}
    if end.sigma is not None:
        d["sigma"] = end.sigma
    return d


def segment_record(seg: Segment) -> Dict:
    return {
        "index": seg.index,
        "lo": seg.lo,
        "hi": seg.hi,
        "orientation": seg.orientation,
        "degree": seg.degree,
        "type": seg.type_label,
        "maximal": seg.maximal,
        "signature": list(seg.signature) if seg.signature is not None else None,
        "left_end": _end_record(seg.left_end),
        "right_end": _end_record(seg.right_end),
        "crossings": seg.crossings,
        "extrema": [list(e) for e in seg.extrema],
    }


def curve_record(curve: ProfileCurve, first_index: int = 0,
                 extra: Optional[Dict] = None) -> Dict:
    """JSON sidecar: dimension, end kinds, events and segments."""
    segs = decompose(curve, first_index)
    rec = {
        "n": curve.config.n,
        "samples": len(curve),
        "head": curve.head.value,
        "tail": curve.tail.value,
        "events": [{"index": e.index, "kind": e.kind.value, "value": e.value,
                    "s": float(curve.s[e.index])} for e in curve.events],
        "segments": [segment_record(g) for g in segs],
    }
    if extra:
        rec.update(extra)
    return rec


@dataclass(frozen=True)
class FigureStyle:
    """Pixel size, margin and stroke widths of an SVG figure."""

    width: int = 800
    height: int = 440
    margin: int = 30
    curve_stroke: float = 1.5
    axis_stroke: float = 1.0
    reference_stroke: float = 0.8
    pad: float = 1.1


def _px(v):
    return f"{v:.3f}"


def render_svg(n: int, x: Sequence[float], r: Sequence[float],
               style: FigureStyle = FigureStyle()) -> str:
    """Upper half-plane figure: axes, dashed reference sphere and cylinder,
    and the curve as a polyline."""
    config = AmbientConfig(n)
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    R = config.sphere_radius
    C = config.cylinder_radius
    half = style.pad * max(R, float(np.max(np.abs(x))) if x.size else R)
    top = style.pad * max(R, C, float(np.max(r)) if r.size else R)
    w_in = style.width - 2 * style.margin
    h_in = style.height - 2 * style.margin
    scale = min(w_in / (2 * half), h_in / top)
    cx = style.width / 2
    base = style.height - style.margin

    def X(v):
        return cx + scale * v

    def Y(v):
        return base - scale * v

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.width}" '
        f'height="{style.height}" viewBox="0 0 {style.width} {style.height}">',
        f'<rect x="0" y="0" width="{style.width}" height="{style.height}" fill="white"/>',
        f'<line x1="{_px(X(-half))}" y1="{_px(base)}" x2="{_px(X(half))}" y2="{_px(base)}" '
        f'stroke="black" stroke-width="{style.axis_stroke}"/>',
        f'<line x1="{_px(cx)}" y1="{_px(base)}" x2="{_px(cx)}" y2="{_px(Y(top))}" '
        f'stroke="black" stroke-width="{style.axis_stroke}"/>',
        f'<path d="M {_px(X(R))} {_px(base)} A {_px(scale * R)} {_px(scale * R)} 0 0 0 '
        f'{_px(X(-R))} {_px(base)}" fill="none" stroke="gray" '
        f'stroke-width="{style.reference_stroke}" stroke-dasharray="6 4"/>',
        f'<line x1="{_px(X(-half))}" y1="{_px(Y(C))}" x2="{_px(X(half))}" y2="{_px(Y(C))}" '
        f'stroke="gray" stroke-width="{style.reference_stroke}" stroke-dasharray="6 4"/>',
    ]
    pts = " ".join(f"{_px(X(a))},{_px(Y(b))}" for a, b in zip(x, r))
    out.append(f'<polyline points="{pts}" fill="none" stroke="black" '
               f'stroke-width="{style.curve_stroke}" stroke-linejoin="round"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def revolve_mesh(x: Sequence[float], r: Sequence[float], samples: int,
                 axis_tol: float = 1e-8,
                 closed_tol: float = 1e-6) -> Tuple[np.ndarray, List[Tuple[int, int, int]]]:
    """Surface of revolution of a profile about the x-axis.

    Vertices are sample-major (all azimuths of sample 0, then sample 1, ...);
    a sample with r below ``axis_tol`` becomes a single vertex. A profile whose
    ends meet off the axis is wrapped around. Faces are triangles with
    0-based indices; triangles that collapse at an axis vertex are dropped.
    """
    if samples < 3:
        raise ValueError("at least three azimuthal samples are needed")
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    if x.size < 2:
        raise ValueError("a profile needs at least two samples")
    closed = (r[0] > axis_tol and math.hypot(x[-1] - x[0], r[-1] - r[0]) < closed_tol)
    if closed:
        x, r = x[:-1], r[:-1]
    th = 2.0 * math.pi * np.arange(samples) / samples
    ct, st = np.cos(th), np.sin(th)
    verts = []
    rings = []
    for xi, ri in zip(x, r):
        if ri < axis_tol:
            rings.append([len(verts)] * samples)
            verts.append((xi, 0.0, 0.0))
        else:
            base = len(verts)
            rings.append(list(range(base, base + samples)))
            verts.extend((xi, ri * c, ri * s) for c, s in zip(ct, st))
    faces = []
    pairs = [(i, i + 1) for i in range(len(rings) - 1)]
    if closed:
        pairs.append((len(rings) - 1, 0))
    for i, k in pairs:
        a, b = rings[i], rings[k]
        for j in range(samples):
            jn = (j + 1) % samples
            for tri in ((a[j], b[j], b[jn]), (a[j], b[jn], a[jn])):
                if len(set(tri)) == 3:
                    faces.append(tri)
    return np.array(verts, dtype=float), faces


def mesh_obj(verts: np.ndarray, faces: List[Tuple[int, int, int]]) -> str:
    lines = [f"v {fmt(a)} {fmt(b)} {fmt(c)}" for a, b, c in verts]
    lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in faces]
    return "\n".join(lines) + "\n"


def euler_characteristic(nverts: int, faces: List[Tuple[int, int, int]]) -> int:
    """V - E + F of a triangle mesh."""
    edges = set()
    for tri in faces:
        for p, q in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            edges.add((min(p, q), max(p, q)))
    return nverts - len(edges) + len(faces)
