"""Shooting families, bisection on segment types and the three constructions.

Two one-parameter families of geodesics are used:

* ``X_AXIS``: Q[t], shot perpendicularly upward from (t, 0).
* ``R_AXIS``: Gamma[0, t, 0], shot horizontally from (0, t). These curves are
  symmetric under x -> -x, so only the forward half is integrated and the
  other half is its mirror image.

Whenever the type of a segment changes along a family, the family passes
through a half-entire graph. The constructions below locate those parameter
values by a grid scan followed by bisection on the segment type.
"""

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .integrator import IntegratorSettings, integrate
from .model import (AmbientConfig, Event, EventKind, InitialData, ProfileCurve,
                    Reference, Termination, exact_solution)
from .segments import (DEAD_BAND, EndpointKind, Endpoint, HalfEntire, HalfEntireKind,
                       Segment, admissible_limits, decompose, half_entire_kind)

__all__ = [
    "Family",
    "Near",
    "Topology",
    "TerminalKind",
    "Terminal",
    "ShotOutcome",
    "BisectionResult",
    "FamilyEntry",
    "ShrinkerFamily",
    "BracketError",
    "DepthError",
    "shoot",
    "bracket_bisect",
    "find_angenent_torus",
    "find_immersed_sphere",
    "build_family",
    "family_settings",
    "mirror_curve",
    "closed_orbit",
]


class Family(enum.Enum):
    X_AXIS = "x_axis"
    R_AXIS = "r_axis"


class Near(enum.Enum):
    PLANE = "plane"
    CYLINDER = "cylinder"
    ANGENENT_TORUS = "torus"


class Topology(enum.Enum):
    SPHERE = "S^n"
    PLANE = "R^n"
    CYLINDER = "R x S^(n-1)"
    TORUS = "S^1 x S^(n-1)"


class TerminalKind(enum.Enum):
    HALF_ENTIRE = "half_entire"
    CLOSED_PERPENDICULAR = "closed_perpendicular"
    EXHAUSTED = "exhausted"


class BracketError(ValueError):
    pass


class DepthError(RuntimeError):
    pass


@dataclass(frozen=True)
class Terminal:
    kind: TerminalKind
    index: Optional[int] = None
    half_entire: Optional[HalfEntire] = None


@dataclass(frozen=True, eq=False)
class ShotOutcome:
    family: Family
    t: float
    curve: ProfileCurve
    segments: Tuple[Segment, ...]
    terminal: Terminal

    def segment(self, k) -> Optional[Segment]:
        for g in self.segments:
            if g.index == k:
                return g
        return None

    def tag(self, k):
        g = self.segment(k)
        if g is None or not g.maximal:
            return None
        return g.type_tag

    @property
    def topology(self) -> Optional[Topology]:
        term = self.terminal
        if term.kind is TerminalKind.EXHAUSTED:
            return None
        if term.kind is TerminalKind.CLOSED_PERPENDICULAR:
            return Topology.SPHERE if self.family is Family.X_AXIS else Topology.TORUS
        if term.half_entire.kind is HalfEntireKind.TRUMPET:
            return Topology.PLANE if self.family is Family.X_AXIS else Topology.CYLINDER
        return Topology.SPHERE

    @property
    def segment_count(self) -> Optional[int]:
        term = self.terminal
        if term.kind is TerminalKind.EXHAUSTED:
            return None
        j = term.index
        if self.family is Family.X_AXIS:
            return j + 1
        if term.kind is TerminalKind.CLOSED_PERPENDICULAR:
            return 2 * j
        return 2 * j + 1


def family_settings(settings: IntegratorSettings) -> IntegratorSettings:
    """Tighter tolerances used while bisecting."""
    return settings.with_(rel_tol=min(settings.rel_tol, 1e-12),
                          abs_tol=min(settings.abs_tol, 1e-14))


def mirror_curve(half: ProfileCurve) -> ProfileCurve:
    """Whole curve of a geodesic that leaves the r-axis horizontally, built from
    its forward half by the reflection x -> -x (exact up to rounding)."""
    S, X, R, A, Kc = half.s, half.x, half.r, half.alpha, half.kappa
    m = S.shape[0]
    flip = {
        EventKind.VERTICAL_TANGENT: lambda v: -v,
        EventKind.CYLINDER_CROSSING: lambda v: -v,
        EventKind.SPHERE_CROSSING: lambda v: math.pi - v,
    }
    back = []
    for e in half.events:
        if e.index == 0:
            continue
        back.append(Event(m - 1 - e.index, e.kind, flip.get(e.kind, lambda v: v)(e.value)))
    back.sort(key=lambda e: e.index)
    fwd = [Event(e.index + m - 1, e.kind, e.value) for e in half.events if e.index > 0]
    # the start point is itself an r-axis crossing of the whole curve
    mid = [Event(m - 1, EventKind.R_AXIS_CROSSING, float(R[0]))]
    return ProfileCurve(
        half.config,
        np.concatenate((-S[::-1], S[1:])),
        np.concatenate((-X[::-1], X[1:])),
        np.concatenate((R[::-1], R[1:])),
        np.concatenate((-A[::-1], A[1:])),
        np.concatenate((Kc[::-1], Kc[1:])),
        tuple(back + mid + fwd), half.tail, half.tail)


def _cylinder_curve(config, settings):
    npts = int(math.ceil(settings.x_escape / settings.max_step)) + 1
    s = np.linspace(0.0, settings.x_escape, npts)
    pts = [exact_solution(config, Reference.CYLINDER, float(v)) for v in s]
    x = np.array([p.x for p in pts])
    half = ProfileCurve(config, s, x, np.full(npts, config.cylinder_radius),
                        np.zeros(npts), np.zeros(npts),
                        (Event(npts - 1, EventKind.TRUNCATED, float(x[-1])),),
                        Termination.START, Termination.ESCAPE)
    return mirror_curve(half)


def _terminal(config, family, segs, curve, k_max, perp_tol):
    if curve.tail is Termination.AXIS_HIT or curve.tail is Termination.ESCAPE:
        last = segs[-1]
        if last.index <= k_max:
            he = half_entire_kind(config, last) if curve.tail is Termination.ESCAPE else None
            if curve.tail is Termination.AXIS_HIT:
                if family is Family.X_AXIS and last.index == 0:
                    return Terminal(TerminalKind.CLOSED_PERPENDICULAR, 0)
                end = last.right_end if last.right_end.kind is EndpointKind.AXIS_EXIT \
                    else last.left_end
                if family is Family.X_AXIS and last.index > 0 or family is Family.R_AXIS:
                    he = _axis_kind(config, end)
            if he is not None:
                return Terminal(TerminalKind.HALF_ENTIRE, last.index, he)
    if family is Family.R_AXIS:
        for g in segs:
            if 1 <= g.index <= k_max and g.signature is not None \
                    and abs(g.signature[1]) < perp_tol:
                return Terminal(TerminalKind.CLOSED_PERPENDICULAR, g.index)
    return Terminal(TerminalKind.EXHAUSTED)


def _axis_kind(config, end):
    kind = (HalfEntireKind.INNER_QUARTER_SPHERE if abs(end.x) < config.sphere_radius
            else HalfEntireKind.OUTER_QUARTER_SPHERE)
    return HalfEntire(kind, 1 if end.x > 0 else -1)


def shoot(config: AmbientConfig, settings: IntegratorSettings, family: Family, t: float,
          k_max: int, perp_tol: float = 1e-6) -> ShotOutcome:
    """Integrate one member of a family far enough to classify Lambda[0..k_max].

    The terminal reports the first half-entire segment (the curve leaves
    through the axis or along a trumpet), a perpendicular r-axis crossing of
    Lambda[j], j >= 1 (R_AXIS only, a closed curve), or exhaustion.
    """
    family = Family(family)
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    if family is Family.X_AXIS:
        if not t > 0.0:
            raise ValueError("Q[t] needs t > 0; t = 0 is the plane")
        curve = integrate(config, settings, InitialData.axis_start(t),
                          max_vertical=k_max + 1)
        segs = decompose(curve, 0)
    else:
        if not t > 0.0:
            raise ValueError("Gamma[0, t, 0] needs t > 0")
        if t == config.cylinder_radius:
            curve = _cylinder_curve(config, settings)
        else:
            half = integrate(config, settings, InitialData.interior(0.0, t, 0.0),
                             max_vertical=k_max + 1)
            curve = mirror_curve(half)
        m = len(curve)
        inner = [e for e in curve.events_of(EventKind.VERTICAL_TANGENT) if 0 < e.index < m - 1]
        segs = decompose(curve, -(len(inner) // 2))
    fwd = [g for g in segs if g.index >= 0]
    term = _terminal(config, family, fwd, curve, k_max, perp_tol)
    return ShotOutcome(family, float(t), curve, tuple(segs), term)


@dataclass(frozen=True, eq=False)
class BisectionResult:
    """Outcome of a bisection: the bracket, the types on each side, and the
    half-entire kind of the limit (observed and as allowed by the types)."""

    t: float
    t_lo: float
    t_hi: float
    tag_lo: object
    tag_hi: object
    shot_lo: ShotOutcome
    shot_hi: ShotOutcome
    limit: Optional[HalfEntire] = None
    admissible: frozenset = frozenset()
    evaluations: int = 0


def _classifier(predicate, k):
    if predicate == "type":
        return lambda shot: shot.tag(k)
    if predicate == "perpendicular":
        def sgn(shot):
            g = shot.segment(k)
            if g is None or g.signature is None:
                return None
            return 1 if g.signature[1] > 0 else -1
        return sgn
    raise ValueError(f"unknown predicate {predicate!r}")


def _free_end(shot, k):
    """Index (in the parametrization) of the end of Lambda[k] away from Lambda[k-1]."""
    g = shot.segment(k)
    return g.hi if k >= 0 else g.lo


def _observe_limit(config, shot, k):
    """Half-entire kind suggested by how Lambda[k] of a near-limit shot ends."""
    g = shot.segment(k)
    if g is None:
        return None
    if shot.terminal.kind is TerminalKind.HALF_ENTIRE and shot.terminal.index == k:
        return shot.terminal.half_entire
    c = shot.curve
    lo, hi = g.lo, g.hi
    r = c.r[lo:hi + 1]
    x = c.x[lo:hi + 1]
    j = int(np.argmin(r))
    if r[j] < 1e-3:
        kind = (HalfEntireKind.INNER_QUARTER_SPHERE if abs(x[j]) < config.sphere_radius
                else HalfEntireKind.OUTER_QUARTER_SPHERE)
        return HalfEntire(kind, 1 if x[j] > 0 else -1)
    # trumpets can be steep, so the excursion is measured from the origin
    d = np.hypot(x, r)
    jx = int(np.argmax(d))
    if d[jx] > 5.0:
        return HalfEntire(HalfEntireKind.TRUMPET, 1 if x[jx] > 0 else -1)
    return None


_NO_SNAP = 1e-300


def bracket_bisect(config: AmbientConfig, settings: IntegratorSettings, family: Family,
                   k: int, t_lo: float, t_hi: float, predicate: str = "type",
                   t_tol: float = 1e-12, max_iter: int = 200) -> BisectionResult:
    """Bisect on the class of Lambda[k] between two parameters where it differs.

    ``predicate`` is ``"type"`` (the (degree, sign) tag) or ``"perpendicular"``
    (the sign of the signature angle, whose zero is a perpendicular r-axis
    crossing). Shots whose class matches neither end count with the upper end.
    """
    family = Family(family)
    classify = _classifier(predicate, k)
    kk = max(k, 0)
    # no snapping onto the axis while probing: near the boundary a snapped
    # shot would be classified by the snap band rather than by the curve
    settings = settings.with_(axis_match_tol=_NO_SNAP)
    s_lo = shoot(config, settings, family, t_lo, kk)
    s_hi = shoot(config, settings, family, t_hi, kk)
    c_lo, c_hi = classify(s_lo), classify(s_hi)
    if c_lo is None or c_hi is None:
        raise DepthError(f"Lambda[{k}] is not complete at a bracket end")
    if c_lo == c_hi:
        raise BracketError(f"Lambda[{k}] has the same class {c_lo} at both ends")
    lo, hi = float(t_lo), float(t_hi)
    evals = 2
    for _ in range(max_iter):
        if abs(hi - lo) <= t_tol:
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        s_mid = shoot(config, settings, family, mid, kk)
        evals += 1
        c = classify(s_mid)
        if c == c_lo:
            lo, s_lo = mid, s_mid
        else:
            hi, s_hi = mid, s_mid
    t = 0.5 * (lo + hi)
    limit = None
    adm = frozenset()
    if predicate == "type":
        limit = _observe_limit(config, s_lo, k)
        if limit is None:
            limit = _observe_limit(config, s_hi, k)
        bounded_right = _bounded_is_right(s_lo, k)
        adm = frozenset(admissible_limits(c_lo, bounded_right)) & \
            frozenset(admissible_limits(c_hi, bounded_right))
        if limit is None and len(adm) == 1:
            lab = next(iter(adm))
            limit = HalfEntire(HalfEntireKind(lab[0]), 1 if lab[1] == "+" else -1)
    return BisectionResult(t, lo, hi, c_lo, c_hi, s_lo, s_hi, limit, adm, evals)


def _bounded_is_right(shot, k):
    """Whether the end of Lambda[k] shared with Lambda[k-1] is its right end."""
    g = shot.segment(k)
    shared = g.lo if k >= 0 else g.hi
    # in increasing-x order the right end is the parametrization end when the
    # orientation is positive
    right = g.hi if g.orientation > 0 else g.lo
    return shared == right


def _scan(config, settings, family, k, ts, classify):
    out = []
    for t in ts:
        out.append(classify(shoot(config, settings, family, float(t), max(k, 0))))
    return out


def _first_flip(tags):
    base = None
    for i, c in enumerate(tags):
        if c is None:
            continue
        if base is None:
            base = (i, c)
            continue
        if c != base[1]:
            return base[0], i
        base = (i, c)
    return None


def _sig_angle(shot, k):
    g = shot.segment(k)
    return None if g is None or g.signature is None else g.signature[1]


def closed_orbit(config: AmbientConfig, settings: IntegratorSettings, t: float) -> ProfileCurve:
    """Integrate Gamma[0, t, 0] once around until it returns to its start."""
    st = settings.with_(closure_tol=max(settings.closure_tol, 1e-6))
    curve = integrate(config, st, InitialData.interior(0.0, t, 0.0), stop_on_closure=True)
    return curve


def find_angenent_torus(config: AmbientConfig, settings: IntegratorSettings = None,
                        resolution: float = 1e-3, t_tol: float = 1e-12):
    """Largest t below the cylinder radius where Lambda[1](Gamma[0, t, 0]) meets
    the r-axis perpendicularly, i.e. its top sits on the r-axis.

    Returns (r_Ang, closed curve). The scan walks down from the cylinder in
    steps of ``resolution`` until the signature angle of Lambda[1] changes sign.
    """
    settings = settings or IntegratorSettings()
    fs = family_settings(settings)
    classify = _classifier("perpendicular", 1)
    top = config.cylinder_radius - resolution
    ts = np.arange(top, 0.0, -resolution)
    prev = None
    bracket = None
    for t in ts:
        c = classify(shoot(config, settings, Family.R_AXIS, float(t), 1))
        if prev is not None and c is not None and prev[1] is not None and c != prev[1]:
            bracket = (float(t), prev[0])
            break
        prev = (float(t), c)
    if bracket is None:
        raise BracketError("no sign change of the Lambda[1] signature angle found")
    res = bracket_bisect(config, fs, Family.R_AXIS, 1, bracket[0], bracket[1],
                         predicate="perpendicular", t_tol=t_tol)
    curve = closed_orbit(config, fs, res.t)
    if not curve.is_closed:
        raise BracketError("the located orbit does not close")
    return res.t, curve


@dataclass(frozen=True, eq=False)
class FamilyEntry:
    k: int
    t: float
    curve: ProfileCurve
    topology: Topology
    segment_count: int
    bracket: Optional[Tuple[float, float]] = None
    limit: Optional[str] = None
    admissible: Tuple[str, ...] = ()
    types: Tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class ShrinkerFamily:
    near: Near
    config: AmbientConfig
    entries: Tuple[FamilyEntry, ...]
    r_ang: Optional[float] = None
    diagnostic: Optional[str] = None

    @property
    def ts(self):
        return [e.t for e in self.entries]


def _count_segments(curve: ProfileCurve) -> int:
    nv = len(curve.events_of(EventKind.VERTICAL_TANGENT))
    return nv if curve.is_closed else nv + 1


def _truncate_trumpet(curve: ProfileCurve, seg: Segment, at_tail: bool) -> ProfileCurve:
    """Cut a near-trumpet segment at its last inflection before it peels off."""
    lo, hi = seg.lo, seg.hi
    k = curve.kappa[lo:hi + 1] * np.sign(np.cos(curve.alpha[lo:hi + 1]))
    sg = np.sign(np.where(np.abs(k) > DEAD_BAND, k, 0.0))
    nz = np.nonzero(sg)[0]
    changes = [nz[i + 1] for i in range(nz.size - 1) if sg[nz[i]] != sg[nz[i + 1]]]
    if at_tail:
        cut = lo + (changes[-1] - 1 if changes else hi - lo)
        sl = slice(0, cut + 1)
    else:
        cut = lo + (changes[0] if changes else 0)
        sl = slice(cut, len(curve))
    n_keep = sl.stop - sl.start if sl.stop is not None else len(curve) - sl.start
    start = sl.start
    ev = [Event(e.index - start, e.kind, e.value) for e in curve.events
          if start <= e.index < start + n_keep and e.kind is not EventKind.AXIS_APPROACH]
    if at_tail:
        ev.append(Event(n_keep - 1, EventKind.TRUNCATED, float(curve.x[start + n_keep - 1])))
    else:
        ev.insert(0, Event(0, EventKind.TRUNCATED, float(curve.x[start])))
    return ProfileCurve(curve.config, curve.s[sl].copy(), curve.x[sl].copy(),
                        curve.r[sl].copy(), curve.alpha[sl].copy(), curve.kappa[sl].copy(),
                        tuple(ev),
                        curve.head if at_tail else Termination.ESCAPE,
                        Termination.ESCAPE if at_tail else curve.tail)


def _entry_curve(config, settings, family, res: BisectionResult, k):
    """Profile curve of the shrinker at a located boundary parameter."""
    lim = res.limit
    if lim is not None and lim.kind is HalfEntireKind.TRUMPET:
        # use the side whose Lambda[k] bends away through an inflection
        side = res.shot_hi if res.shot_hi.segment(k).degree > res.shot_lo.segment(k).degree \
            else res.shot_lo
        shot = shoot(config, settings, family, side.t, k)
        seg = shot.segment(k)
        curve = _truncate_trumpet(shot.curve, seg, at_tail=True)
        if family is Family.R_AXIS:
            neg = shot.segment(-k)
            # a cut at the tail leaves the head indices unchanged
            curve = _truncate_trumpet(curve, neg, at_tail=False)
        return curve
    shot = shoot(config, settings, family, res.t, k)
    return shot.curve


def _types(shot, k):
    return tuple(g.type_label for g in shot.segments if 0 <= g.index <= k)


def _entry_from_result(config, settings, family, k, res, topology):
    curve = _entry_curve(config, settings, family, res, k)
    return FamilyEntry(k=k, t=res.t, curve=curve, topology=topology,
                       segment_count=_count_segments(curve),
                       bracket=(res.t_lo, res.t_hi),
                       limit=res.limit.label if res.limit else None,
                       admissible=tuple(sorted(res.admissible)),
                       types=_types(res.shot_lo, k))


def _sphere_entry(config, settings):
    curve = integrate(config, settings, InitialData.axis_start(config.sphere_radius))
    return FamilyEntry(0, config.sphere_radius, curve, Topology.SPHERE, _count_segments(curve))


def _scan_bisect(config, settings, fs, family, k, ts, t_tol):
    classify = _classifier("type", k)
    tags = _scan(config, settings, family, k, ts, classify)
    flip = _first_flip(tags)
    if flip is None:
        raise BracketError(f"no type change of Lambda[{k}] on the scan grid")
    i, j = flip
    return bracket_bisect(config, fs, family, k, float(ts[i]), float(ts[j]), t_tol=t_tol)


def build_family(config: AmbientConfig, settings: IntegratorSettings = None,
                 near: Near = Near.PLANE, count: int = 3, resolution: float = 1e-3,
                 t_tol: float = 1e-12, r_ang: Optional[float] = None) -> ShrinkerFamily:
    """Run the inductive construction for ``count`` entries.

    PLANE
        Q[t]: t_0 = sqrt(2n); t_k is the first t > 0 (scanning upward from
        ``resolution``) where Lambda[k] changes type.
    ANGENENT_TORUS
        Gamma[0, t, 0]: t_0 = sqrt(2(n-1)); t_k is the first t > r_Ang where
        Lambda[k] changes type.
    CYLINDER
        Gamma[0, t, 0]: t_0 = r_Ang; t_{2N+1} is the largest t below the
        cylinder radius where Lambda[N+1] changes type and t_{2N} lies
        between t_{2N-1} and t_{2N+1} where Lambda[N+1] crosses the r-axis
        perpendicularly.
    """
    settings = settings or IntegratorSettings()
    fs = family_settings(settings)
    near = Near(near)
    if count < 1:
        raise ValueError("count must be at least 1")
    entries = []
    diag = None
    if near is Near.PLANE:
        entries.append(_sphere_entry(config, fs))
        try:
            for k in range(1, count):
                upper = entries[-1].t
                ts = np.arange(resolution, upper - 0.5 * resolution, resolution)
                res = _scan_bisect(config, settings, fs, Family.X_AXIS, k, ts, t_tol)
                topo = Topology.PLANE if k % 2 else Topology.SPHERE
                entries.append(_entry_from_result(config, fs, Family.X_AXIS, k, res, topo))
        except (BracketError, DepthError) as exc:
            diag = f"stopped at k = {len(entries)}: {exc}"
        return ShrinkerFamily(near, config, tuple(entries), None, diag)

    if r_ang is None:
        r_ang, torus = find_angenent_torus(config, settings, resolution, t_tol)
    else:
        torus = closed_orbit(config, fs, r_ang)

    if near is Near.ANGENENT_TORUS:
        entries.append(FamilyEntry(0, config.cylinder_radius,
                                   _cylinder_curve(config, settings),
                                   Topology.CYLINDER, 1))
        try:
            for k in range(1, count):
                upper = entries[-1].t
                ts = np.arange(r_ang + resolution, upper - 0.5 * resolution, resolution)
                res = _scan_bisect(config, settings, fs, Family.R_AXIS, k, ts, t_tol)
                topo = Topology.SPHERE if k % 2 else Topology.CYLINDER
                entries.append(_entry_from_result(config, fs, Family.R_AXIS, k, res, topo))
        except (BracketError, DepthError) as exc:
            diag = f"stopped at k = {len(entries)}: {exc}"
        return ShrinkerFamily(near, config, tuple(entries), r_ang, diag)

    # near the cylinder
    entries.append(FamilyEntry(0, r_ang, torus, Topology.TORUS, _count_segments(torus)))
    odd = {}
    try:
        lower = r_ang
        for N in range(0, count // 2 + 1):
            if 2 * N + 1 >= count + 1 and 2 * N >= count:
                break
            ts = np.arange(config.cylinder_radius - resolution, lower + 0.5 * resolution,
                           -resolution)
            res = _scan_bisect(config, settings, fs, Family.R_AXIS, N + 1, ts, t_tol)
            odd[2 * N + 1] = res
            if N >= 1 and 2 * N < count:
                lo_t = odd[2 * N - 1].t
                hi_t = res.t
                pr = _perpendicular_between(config, settings, fs, N + 1, lo_t, hi_t,
                                            resolution, t_tol)
                curve = closed_orbit(config, fs, pr.t)
                entries.append(FamilyEntry(2 * N, pr.t, curve, Topology.TORUS,
                                           _count_segments(curve),
                                           bracket=(pr.t_lo, pr.t_hi),
                                           types=_types(pr.shot_lo, N + 1)))
            if 2 * N + 1 < count:
                entries.append(_entry_from_result(config, fs, Family.R_AXIS, N + 1, res,
                                                  Topology.SPHERE))
                entries[-1] = _renumber(entries[-1], 2 * N + 1)
            lower = res.t
    except (BracketError, DepthError) as exc:
        diag = f"stopped at k = {len(entries)}: {exc}"
    entries.sort(key=lambda e: e.k)
    return ShrinkerFamily(near, config, tuple(entries), r_ang, diag)


def _renumber(entry, k):
    return FamilyEntry(k, entry.t, entry.curve, entry.topology, entry.segment_count,
                       entry.bracket, entry.limit, entry.admissible, entry.types)


def _perpendicular_between(config, settings, fs, k, lo_t, hi_t, resolution, t_tol):
    classify = _classifier("perpendicular", k)
    ts = np.arange(lo_t + resolution, hi_t, resolution)
    if ts.size < 2:
        ts = np.linspace(lo_t, hi_t, 9)[1:-1]
    tags = _scan(config, settings, Family.R_AXIS, k, ts, classify)
    flip = _first_flip(tags)
    if flip is None:
        raise BracketError(f"no perpendicular crossing of Lambda[{k}] found")
    i, j = flip
    return bracket_bisect(config, fs, Family.R_AXIS, k, float(ts[i]), float(ts[j]),
                          predicate="perpendicular", t_tol=t_tol)


def find_immersed_sphere(config: AmbientConfig, settings: IntegratorSettings = None,
                         r_ang: Optional[float] = None, resolution: float = 1e-3,
                         t_tol: float = 1e-12) -> FamilyEntry:
    """A parameter r_1 between r_Ang and the cylinder radius where
    Lambda[1](Gamma[0, r_1, 0]) is an inner quarter-sphere."""
    settings = settings or IntegratorSettings()
    fs = family_settings(settings)
    if r_ang is None:
        r_ang, _ = find_angenent_torus(config, settings, resolution, t_tol)
    ts = np.arange(config.cylinder_radius - resolution, r_ang, -resolution)
    res = _scan_bisect(config, settings, fs, Family.R_AXIS, 1, ts, t_tol)
    return _entry_from_result(config, fs, Family.R_AXIS, 1, res, Topology.SPHERE)
