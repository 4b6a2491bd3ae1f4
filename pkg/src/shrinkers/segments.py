"""Maximal graphical segments of a profile curve.

Between consecutive vertical tangents a profile curve is the graph r = u(x)
of a solution of

    u'' / (1 + u'^2) = x u'/2 - u/2 + (n-1)/u.

Each such piece, read in the direction of increasing x, is a segment. Its
degree counts the sign changes of u'' inside it and its type is the degree
together with the sign of u'' near the right end. Every complete segment
crosses the r-axis exactly once; the crossing height and angle form its
signature.

Along the curve u' = tan(alpha) and u'' = kappa / cos(alpha)^3 in either
traversal direction, so the sign of u'' is sign(kappa) * sign(cos(alpha)).
"""

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .model import AmbientConfig, EventKind, ProfileCurve, Termination

__all__ = [
    "EndpointKind",
    "Endpoint",
    "HalfEntireKind",
    "HalfEntire",
    "Segment",
    "decompose",
    "classify_end",
    "segment_distance",
    "half_entire_kind",
    "admissible_limits",
    "DEAD_BAND",
]

DEAD_BAND = 1e-9


class EndpointKind(enum.Enum):
    VERTICAL_TANGENT = "vertical_tangent"
    AXIS_EXIT = "axis_exit"
    TRUMPET_ESCAPE = "trumpet_escape"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class Endpoint:
    kind: EndpointKind
    x: float
    r: float
    sigma: Optional[float] = None

    @property
    def resolved(self):
        return self.kind is not EndpointKind.TRUNCATED


class HalfEntireKind(enum.Enum):
    INNER_QUARTER_SPHERE = "I"
    OUTER_QUARTER_SPHERE = "O"
    TRUMPET = "T"


@dataclass(frozen=True)
class HalfEntire:
    """Half-entire graph: kind, quadrant (+1 first, -1 second) and, for a
    trumpet, its asymptotic slope."""

    kind: HalfEntireKind
    quadrant: int
    sigma: Optional[float] = None

    @property
    def label(self):
        return self.kind.value + ("+" if self.quadrant > 0 else "-")


@dataclass(frozen=True, eq=False)
class Segment:
    """One maximal graphical piece of a curve, read with increasing x.

    ``lo`` and ``hi`` are the curve sample indices of its ends in the order of
    the parametrization; ``orientation`` is +1 when the parametrization runs
    towards increasing x. ``x``, ``r``, ``slope`` and ``upp`` (u'') are
    sampled in increasing-x order.
    """

    index: int
    lo: int
    hi: int
    orientation: int
    x: np.ndarray
    r: np.ndarray
    slope: np.ndarray
    upp: np.ndarray
    signature: Optional[Tuple[float, float]]
    degree: int
    right_sign: int
    left_end: Endpoint
    right_end: Endpoint
    ambiguous: bool = False
    crossings: int = 0
    extrema: Tuple[Tuple[str, float, float], ...] = field(default=())

    @property
    def maximal(self):
        return self.left_end.resolved and self.right_end.resolved

    @property
    def type_tag(self):
        return (self.degree, self.right_sign)

    @property
    def type_label(self):
        return f"({self.degree},{'+' if self.right_sign > 0 else '-'})"


def _sign_changes(v):
    s = np.sign(v[np.abs(v) > DEAD_BAND])
    if s.size < 2:
        return 0
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _trumpet_tail(seg_x, seg_r, slope, upp):
    """Trumpet test on the last 20% of an escaping run, mirrored to x > 0."""
    q = int(0.8 * seg_x.size)
    x = seg_x[q:]
    u = seg_r[q:]
    up = slope[q:]
    if x.size < 5:
        return None
    if x[-1] < 0:
        x, up = -x, -up
    psi = x * up - u
    ok = (np.all(upp[q:] > 0.0) and np.all(up > 0.0)
          and (np.all(np.diff(up) >= 0.0) or np.all(np.diff(up) <= 0.0))
          and (np.all(psi < 0.0) or np.all(psi > 0.0)))
    return float(abs(up[-1])) if ok else None


def classify_end(curve: ProfileCurve, idx: int, boundary: Termination, seg_x, seg_r,
                 slope, upp) -> Endpoint:
    """Kind of a segment end that is also an end of the sampled curve."""
    x = float(curve.x[idx])
    r = float(curve.r[idx])
    if boundary is Termination.AXIS_HIT:
        return Endpoint(EndpointKind.AXIS_EXIT, x, 0.0)
    if boundary is Termination.ESCAPE:
        sigma = _trumpet_tail(seg_x, seg_r, slope, upp)
        if sigma is not None:
            return Endpoint(EndpointKind.TRUMPET_ESCAPE, x, r, sigma)
    return Endpoint(EndpointKind.TRUNCATED, x, r)


def _extrema(curve, idx):
    out = []
    for e in curve.events_of(EventKind.HORIZONTAL_TANGENT):
        if idx[0] < e.index < idx[-1]:
            j = e.index
            # direction of travel in x does not change inside a segment, so the
            # sign change of dr/ds across the point tells max from min
            before = math.sin(curve.alpha[j - 1])
            after = math.sin(curve.alpha[j + 1])
            if curve.s[j + 1] - curve.s[j] == 0.0:
                continue
            if before > 0.0 >= after or before >= 0.0 > after:
                out.append(("max", float(curve.x[j]), float(curve.r[j])))
            elif before < 0.0 <= after or before <= 0.0 < after:
                out.append(("min", float(curve.x[j]), float(curve.r[j])))
    return tuple(out)


def decompose(curve: ProfileCurve, first_index: int = 0) -> List[Segment]:
    """Split a curve at its vertical tangents.

    Segment indices follow the parametrization; the first piece gets
    ``first_index`` (use a negative value when the curve extends backwards
    past the segment that contains s = 0).
    """
    m = len(curve)
    if m < 2:
        raise ValueError("a curve needs at least two samples")
    cuts = [e.index for e in curve.events_of(EventKind.VERTICAL_TANGENT)]
    bounds = [0] + [c for c in cuts if 0 < c < m - 1] + [m - 1]
    raxis = [e.index for e in curve.events_of(EventKind.R_AXIS_CROSSING)]
    vset = set(cuts)
    segs = []
    for j in range(len(bounds) - 1):
        lo, hi = bounds[j], bounds[j + 1]
        if hi <= lo:
            continue
        idx = np.arange(lo, hi + 1)
        inner = idx[1:-1] if idx.size > 2 else idx
        c = np.cos(curve.alpha[inner])
        orient = 1 if np.sum(c) >= 0.0 else -1
        order = idx if orient > 0 else idx[::-1]
        a = curve.alpha[order]
        ca = np.cos(a)
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = np.tan(a)
            upp = curve.kappa[order] / ca ** 3
        kin = curve.kappa[inner] * np.sign(np.cos(curve.alpha[inner]))
        degree = _sign_changes(kin)
        # sign of u'' near the right end
        kk = curve.kappa[order] * np.sign(ca)
        good = np.nonzero(np.abs(kk[1:-1]) > DEAD_BAND)[0]
        if good.size:
            right_sign = 1 if kk[1:-1][good[-1]] > 0 else -1
        else:
            right_sign = 1 if kk[-1] > 0 else -1
        seg_x = curve.x[order]
        seg_r = curve.r[order]

        def end_at(i):
            if i in vset:
                return Endpoint(EndpointKind.VERTICAL_TANGENT, float(curve.x[i]),
                                float(curve.r[i]))
            if i == 0 and curve.head is not Termination.START:
                return classify_end(curve, i, curve.head, seg_x[::-1], seg_r[::-1],
                                    slope[::-1], upp[::-1])
            if i == m - 1:
                return classify_end(curve, i, curve.tail, seg_x, seg_r, slope, upp)
            return Endpoint(EndpointKind.TRUNCATED, float(curve.x[i]), float(curve.r[i]))

        e_lo, e_hi = end_at(lo), end_at(hi)
        left, right = (e_lo, e_hi) if orient > 0 else (e_hi, e_lo)
        cross = [i for i in raxis if lo < i < hi]
        sig = None
        if len(cross) == 1 and left.resolved and right.resolved:
            i = cross[0]
            sig = (float(curve.r[i]), float(math.atan(math.tan(curve.alpha[i]))))
        ambiguous = False
        for i in (lo, hi):
            if 0 < i < m - 1 and abs(curve.kappa[i]) < DEAD_BAND:
                ambiguous = True
        segs.append(Segment(
            index=first_index + len(segs), lo=lo, hi=hi, orientation=orient,
            x=seg_x, r=seg_r, slope=slope, upp=upp, signature=sig, degree=degree,
            right_sign=right_sign, left_end=left, right_end=right, ambiguous=ambiguous,
            crossings=len(cross), extrema=_extrema(curve, idx)))
    return segs


def segment_distance(a: Segment, b: Segment) -> float:
    """|r_a - r_b| + |alpha_a - alpha_b| between signatures."""
    if a.signature is None or b.signature is None:
        raise ValueError("both segments need a signature")
    return abs(b.signature[0] - a.signature[0]) + abs(b.signature[1] - a.signature[1])


def half_entire_kind(config: AmbientConfig, seg: Segment) -> Optional[HalfEntire]:
    """Classify a segment that leaves the half-plane, or return None."""
    for end in (seg.right_end, seg.left_end):
        if end.kind is EndpointKind.AXIS_EXIT:
            q = 1 if end.x > 0 else -1
            kind = (HalfEntireKind.INNER_QUARTER_SPHERE if abs(end.x) < config.sphere_radius
                    else HalfEntireKind.OUTER_QUARTER_SPHERE)
            return HalfEntire(kind, q)
        if end.kind is EndpointKind.TRUMPET_ESCAPE:
            return HalfEntire(HalfEntireKind.TRUMPET, 1 if end.x > 0 else -1, end.sigma)
    return None


# limits of families whose right ends stay in a compact set
_LIMITS = {
    (0, 1): ("T",),
    (0, -1): ("I",),
    (1, 1): ("O", "T"),
    (1, -1): ("I",),
    (2, 1): ("O",),
}


def admissible_limits(tag, right_end_bounded=True):
    """Half-entire labels a family of segments of type ``tag`` may converge to.

    With the right ends bounded the limit leaves through the second quadrant.
    When instead the left ends stay bounded, the mirrored segments have type
    (k, s * (-1)^k) and the limit lies in the first quadrant.
    """
    k, s = tag
    if right_end_bounded:
        return {lab + "-" for lab in _LIMITS.get((k, s), ())}
    return {lab + "+" for lab in _LIMITS.get((k, s * (-1) ** k), ())}
