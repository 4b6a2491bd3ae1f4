"""Domain types and exact reference solutions.

A rotationally symmetric self-shrinker in R^{n+1} is generated by a profile
curve in the upper half-plane {(x, r) : r > 0}. Parametrized by Euclidean
arclength with tangent (cos(alpha), sin(alpha)), the curve is a profile curve
exactly when

    alpha' = (x/2) sin(alpha) + ((n-1)/r - r/2) cos(alpha).

Three solutions are known in closed form: the round sphere of radius
sqrt(2n), the plane x = 0 and the cylinder r = sqrt(2(n-1)).
"""

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

__all__ = [
    "AmbientConfig",
    "GeodesicState",
    "InitialData",
    "EventKind",
    "Event",
    "Termination",
    "ProfileCurve",
    "Reference",
    "exact_solution",
    "residual",
]


def _m1(n):
    # solve int_{m}^{1} t^{-(n-1)} dt = 1/c with c = (sqrt(2(n-1)) - 1)/2, then halve
    c = 0.5 * (math.sqrt(2.0 * (n - 1)) - 1.0)
    if n == 2:
        m = math.exp(-1.0 / c)
    else:
        m = (1.0 + (n - 2) / c) ** (-1.0 / (n - 2))
    return 0.5 * m


@dataclass(frozen=True)
class AmbientConfig:
    """Dimension of the shrinker and the radii derived from it.

    ``m1`` and ``M1`` are conservative brackets for r-axis crossings: an
    r-graph that is horizontal at some height crosses the r-axis above
    ``m1`` or below ``M1`` in the situations where the bounds apply.
    """

    n: int = 2
    sphere_radius: float = field(init=False)
    cylinder_radius: float = field(init=False)
    m1: float = field(init=False)
    M1: float = field(init=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "sphere_radius", math.sqrt(2.0 * self.n))
        object.__setattr__(self, "cylinder_radius", math.sqrt(2.0 * (self.n - 1)))
        object.__setattr__(self, "m1", _m1(self.n))
        object.__setattr__(self, "M1", self.cylinder_radius + 2.0)


@dataclass(frozen=True)
class GeodesicState:
    """Point on an arclength-parametrized profile curve; alpha is unwrapped."""

    s: float
    x: float
    r: float
    alpha: float

    @property
    def tangent(self):
        return (math.cos(self.alpha), math.sin(self.alpha))


@dataclass(frozen=True)
class InitialData:
    """Either an interior start Gamma[x0, r0, alpha0] or a perpendicular
    start Q[x0] on the axis r = 0."""

    kind: str
    x0: float
    r0: float = 0.0
    alpha0: float = math.pi / 2

    @classmethod
    def interior(cls, x0, r0, alpha0):
        if not r0 > 0.0:
            raise ValueError(f"interior start needs r0 > 0, got {r0!r}")
        return cls("interior", float(x0), float(r0), float(alpha0))

    @classmethod
    def axis_start(cls, x0):
        if not x0 > 0.0:
            raise ValueError(f"axis start needs x0 > 0, got {x0!r}")
        return cls("axis", float(x0), 0.0, math.pi / 2)

    @property
    def on_axis(self):
        return self.kind == "axis"


class EventKind(enum.Enum):
    VERTICAL_TANGENT = "vertical_tangent"
    HORIZONTAL_TANGENT = "horizontal_tangent"
    AXIS_HIT = "axis_hit"
    R_AXIS_CROSSING = "r_axis_crossing"
    CYLINDER_CROSSING = "cylinder_crossing"
    SPHERE_CROSSING = "sphere_crossing"
    TRUNCATED = "truncated"
    AXIS_APPROACH = "axis_approach"
    CLOSED = "closed"


@dataclass(frozen=True)
class Event:
    """Located event: sample index, kind and a kind-specific value.

    The value is x for vertical tangents and cylinder crossings, r for r-axis
    crossings and horizontal tangents, the polar angle for sphere crossings, the mismatch with the
    axis series for approaches and axis hits, the closure defect for closed
    curves and the arclength or x reached for truncations.
    """

    index: int
    kind: EventKind
    value: float


class Termination(enum.Enum):
    AXIS_HIT = "axis_hit"
    ARCLENGTH = "arclength"
    ESCAPE = "escape"
    CLOSED = "closed"
    DEPTH = "depth"
    START = "start"


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """Densely sampled, arclength-ordered profile curve.

    Samples are stored column-wise; ``kappa`` is the Euclidean curvature
    d(alpha)/ds at each sample. ``head`` and ``tail`` describe how the two
    ends of the sampled curve came about.
    """

    config: AmbientConfig
    s: np.ndarray
    x: np.ndarray
    r: np.ndarray
    alpha: np.ndarray
    kappa: np.ndarray
    events: Tuple[Event, ...]
    head: Termination
    tail: Termination

    def __len__(self):
        return self.s.shape[0]

    def state(self, i):
        return GeodesicState(float(self.s[i]), float(self.x[i]), float(self.r[i]),
                             float(self.alpha[i]))

    @property
    def samples(self) -> List[GeodesicState]:
        return [self.state(i) for i in range(len(self))]

    def events_of(self, kind):
        return [e for e in self.events if e.kind is kind]

    @property
    def axis_hits(self):
        return self.events_of(EventKind.AXIS_HIT)

    @property
    def is_closed(self):
        return self.tail is Termination.CLOSED

    def closure_defect(self) -> Optional[float]:
        """|end - start| in (x, r) plus the angle mismatch mod 2 pi."""
        d = math.hypot(self.x[-1] - self.x[0], self.r[-1] - self.r[0])
        da = (self.alpha[-1] - self.alpha[0] + math.pi) % (2 * math.pi) - math.pi
        return d + abs(da)


class Reference(enum.Enum):
    SPHERE = "sphere"
    PLANE = "plane"
    CYLINDER = "cylinder"


def exact_solution(config: AmbientConfig, which: Reference, s: float) -> GeodesicState:
    """Arclength parametrization of a reference solution.

    The sphere starts on the axis at (sqrt(2n), 0) heading in +r and is
    defined for s in [0, pi sqrt(2n)]; the plane runs up x = 0 from r = 0
    and the cylinder runs along r = sqrt(2(n-1)) from x = 0.

    >>> exact_solution(AmbientConfig(2), Reference.CYLINDER, 5.0)
    GeodesicState(s=5.0, x=5.0, r=1.4142135623730951, alpha=0.0)
    """
    which = Reference(which)
    if which is Reference.SPHERE:
        R = config.sphere_radius
        if not 0.0 <= s <= math.pi * R:
            raise ValueError(f"sphere arclength must lie in [0, {math.pi * R}], got {s!r}")
        th = s / R
        return GeodesicState(s, R * math.cos(th), R * math.sin(th), th + math.pi / 2)
    if which is Reference.PLANE:
        return GeodesicState(s, 0.0, s, math.pi / 2)
    return GeodesicState(s, s, config.cylinder_radius, 0.0)


def residual(config: AmbientConfig, state: GeodesicState, alpha_dot: float) -> float:
    """alpha_dot minus the right-hand side of the geodesic equation."""
    if not state.r > 0.0:
        raise ValueError(f"residual is undefined at r = {state.r!r}")
    n = config.n
    a = state.alpha
    return alpha_dot - (0.5 * state.x * math.sin(a)
                        + ((n - 1) / state.r - 0.5 * state.r) * math.cos(a))
