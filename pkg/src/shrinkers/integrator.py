"""Event-driven integration of the profile-curve equation in arclength form.

The arclength system is regular everywhere except on the axis r = 0. Curves
that start on the axis are launched from a quartic Taylor series of the
r-graph x = f(r); curves that come back down to the axis are matched against
the same series at a moderate height and closed along it, because the
approach to the axis is unstable: a mismatch of the angle grows like
r^-(n-1) as r decreases.
"""

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernel as K
from .model import (AmbientConfig, Event, EventKind, GeodesicState, InitialData,
                    ProfileCurve, Termination)

__all__ = [
    "IntegratorSettings",
    "Direction",
    "IntegrationError",
    "step_rhs",
    "axis_series_coefficients",
    "axis_series_start",
    "integrate",
    "integrate_both",
]

_EV = {
    K.EV_VERTICAL: EventKind.VERTICAL_TANGENT,
    K.EV_AXIS_HIT: EventKind.AXIS_HIT,
    K.EV_RAXIS: EventKind.R_AXIS_CROSSING,
    K.EV_CYLINDER: EventKind.CYLINDER_CROSSING,
    K.EV_SPHERE: EventKind.SPHERE_CROSSING,
    K.EV_TRUNCATED: EventKind.TRUNCATED,
    K.EV_AXIS_APPROACH: EventKind.AXIS_APPROACH,
    K.EV_CLOSED: EventKind.CLOSED,
    K.EV_HORIZONTAL: EventKind.HORIZONTAL_TANGENT,
}

_STATUS = {
    K.ST_AXIS_HIT: Termination.AXIS_HIT,
    K.ST_ARCLENGTH: Termination.ARCLENGTH,
    K.ST_ESCAPE: Termination.ESCAPE,
    K.ST_CLOSED: Termination.CLOSED,
    K.ST_DEPTH: Termination.DEPTH,
}


@dataclass(frozen=True)
class IntegratorSettings:
    """Tolerances and limits for one integration.

    rel_tol, abs_tol
        Error tolerances of the Dormand-Prince 5(4) pair.
    axis_eps
        A curve whose height falls below this is reported as hitting the axis.
    series_step
        Height at which an axis start hands over from the series to the solver.
    max_arclength
        Arclength budget per direction.
    x_escape
        Runs with |x| beyond this are truncated (trumpet candidates).
    max_step
        Largest arclength step.
    max_turn
        Largest change of alpha per step. Keeps the chord of every step within
        1e-6 relative of its arclength.
    axis_match_radius
        Height at which a descending curve is compared with the axis series.
    axis_match_tol
        Largest angle mismatch at that height for closing onto the axis.
    closure_tol
        Largest (r, alpha mod 2 pi) mismatch when detecting a closed curve.
    max_steps
        Hard cap on solver steps per integration.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    axis_eps: float = 1e-8
    series_step: float = 1e-3
    max_arclength: float = 200.0
    x_escape: float = 50.0
    max_step: float = 0.01
    max_turn: float = 3e-3
    axis_match_radius: float = 0.25
    axis_match_tol: float = 1e-6
    closure_tol: float = 1e-6
    max_steps: int = 5_000_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "axis_eps", "series_step", "max_arclength",
                     "x_escape", "max_step", "max_turn", "axis_match_radius",
                     "axis_match_tol", "closure_tol", "max_steps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.series_step > self.axis_eps:
            raise ValueError("series_step must exceed axis_eps")
        if not self.axis_match_radius > self.axis_eps:
            raise ValueError("axis_match_radius must exceed axis_eps")

    def with_(self, **kw):
        return replace(self, **kw)


class Direction(enum.Enum):
    FORWARD = 1
    BACKWARD = -1


class IntegrationError(RuntimeError):
    """The solver could not continue; ``last_state`` is the last accepted point."""

    def __init__(self, message, last_state):
        super().__init__(message)
        self.last_state = last_state


def step_rhs(config: AmbientConfig, state: GeodesicState):
    """(dx/ds, dr/ds, dalpha/ds) at an interior point."""
    if not state.r > 0.0:
        raise ValueError("the equation is singular on the axis; use axis_series_start")
    return K.rhs(float(config.n), state.x, state.r, state.alpha)


def axis_series_coefficients(config: AmbientConfig, x0: float):
    """(f''(0), f''''(0)) of the r-graph x = f(r) leaving the axis at x0.

    >>> axis_series_coefficients(AmbientConfig(2), 2.0)
    (-0.5, -0.375)
    """
    n = config.n
    f2 = -x0 / (2.0 * n)
    f4 = -(3.0 / (4.0 * n * (n + 2))) * (x0 ** 3 / n ** 2 + x0)
    return f2, f4


def axis_series_start(config: AmbientConfig, x0: float, h: float) -> GeodesicState:
    """State at height h on the curve leaving the axis perpendicularly at x0."""
    if not x0 > 0.0:
        raise ValueError("axis start needs x0 > 0")
    if not h > 0.0:
        raise ValueError("series height must be positive")
    c2, c4 = K.series_coeffs(float(config.n), float(x0))
    x = x0 + c2 * h * h + c4 * h ** 4
    fp = 2.0 * c2 * h + 4.0 * c4 * h ** 3
    s = K.series_arclength(float(config.n), float(x0), float(h))
    return GeodesicState(s, x, h, math.pi / 2 - math.atan(fp))


def _run(config, st, s0, x0, r0, a0, stop_on_closure, max_vertical=-1):
    out = K.integrate_kernel(
        float(config.n), float(s0), float(x0), float(r0), float(a0),
        st.rel_tol, st.abs_tol, st.max_step, st.max_turn, st.max_arclength,
        st.x_escape, st.axis_eps, st.axis_match_radius, st.axis_match_tol,
        st.closure_tol, bool(stop_on_closure), int(st.max_steps), int(max_vertical))
    S, X, R, A, Kc, ei, ek, ev, status, last = out
    if status not in _STATUS:
        why = "step size underflow" if status == K.ST_UNDERFLOW else "step budget exhausted"
        raise IntegrationError(f"integration stopped: {why} near (x, r) = "
                               f"({last[1]:.6g}, {last[2]:.6g})",
                               GeodesicState(*map(float, last)))
    events = [Event(int(i), _EV[int(k)], float(v)) for i, k, v in zip(ei, ek, ev)]
    return S, X, R, A, Kc, events, _STATUS[status]


def integrate(config: AmbientConfig, settings: IntegratorSettings, init: InitialData,
              direction: Direction = Direction.FORWARD,
              stop_on_closure: bool = False, max_vertical: int = -1) -> ProfileCurve:
    """Integrate from ``init`` in one direction until the axis, an escape, the
    arclength budget or (if requested) a return to the starting r-axis state.

    A backward run is the forward run of the reversed tangent; the result is
    reported in the original orientation, so its arclength runs from -L to 0
    and it ends at the initial point. A non-negative ``max_vertical`` stops
    the run at that many vertical tangents.
    """
    direction = Direction(direction)
    n = float(config.n)
    if init.on_axis:
        if direction is Direction.BACKWARD:
            raise ValueError("an axis start only continues into r > 0 (forward)")
        st0 = axis_series_start(config, init.x0, settings.series_step)
        S, X, R, A, Kc, events, term = _run(config, settings, st0.s, st0.x, st0.r,
                                           st0.alpha, False, max_vertical)
        # prepend the axis point itself
        S = np.concatenate(([0.0], S))
        X = np.concatenate(([init.x0], X))
        R = np.concatenate(([0.0], R))
        A = np.concatenate(([math.pi / 2], A))
        Kc = np.concatenate(([init.x0 / (2.0 * n)], Kc))
        events = [Event(e.index + 1, e.kind, e.value) for e in events]
        return ProfileCurve(config, S, X, R, A, Kc, tuple(events), Termination.AXIS_HIT, term)

    if direction is Direction.FORWARD:
        S, X, R, A, Kc, events, term = _run(config, settings, 0.0, init.x0, init.r0,
                                           init.alpha0, stop_on_closure, max_vertical)
        return ProfileCurve(config, S, X, R, A, Kc, tuple(events), Termination.START, term)

    S, X, R, A, Kc, events, term = _run(config, settings, 0.0, init.x0, init.r0,
                                       init.alpha0 + math.pi, stop_on_closure, max_vertical)
    m = S.shape[0]
    rev = [Event(m - 1 - e.index, e.kind, e.value) for e in events]
    rev.sort(key=lambda e: e.index)
    return ProfileCurve(config, -S[::-1], X[::-1].copy(), R[::-1].copy(),
                        A[::-1] - math.pi, -Kc[::-1], tuple(rev), term, Termination.START)


def integrate_both(config: AmbientConfig, settings: IntegratorSettings,
                   init: InitialData) -> ProfileCurve:
    """The whole geodesic through an interior point: backward and forward runs
    joined at the initial point (s = 0)."""
    if init.on_axis:
        return integrate(config, settings, init)
    bw = integrate(config, settings, init, Direction.BACKWARD)
    fw = integrate(config, settings, init, Direction.FORWARD)
    m = len(bw)
    events = [e for e in bw.events] + [Event(e.index + m - 1, e.kind, e.value)
                                      for e in fw.events if e.index > 0]
    return ProfileCurve(
        config,
        np.concatenate((bw.s, fw.s[1:])),
        np.concatenate((bw.x, fw.x[1:])),
        np.concatenate((bw.r, fw.r[1:])),
        np.concatenate((bw.alpha, fw.alpha[1:])),
        np.concatenate((bw.kappa, fw.kappa[1:])),
        tuple(events), bw.head, fw.tail)
