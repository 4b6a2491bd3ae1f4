"""Numerical checks of identities satisfied by profile curves.

Every check returns plain numbers; the ``*_report`` helpers and suites wrap
them into CheckReport records that the command line writes out as JSON.
"""

import math
import warnings
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp

from .integrator import IntegratorSettings, integrate
from .model import (AmbientConfig, EventKind, GeodesicState, InitialData, ProfileCurve,
                    Reference, Termination, exact_solution, residual)

__all__ = [
    "CheckReport",
    "VerificationError",
    "gauss_bonnet_closed",
    "is_simple",
    "legendre_start",
    "legendre_linearization",
    "legendre_taylor",
    "quarter_sphere_curve",
    "quarter_sphere_intersections",
    "quarter_sphere_signature",
    "mean_convexity_margin",
    "graph_ode_residuals",
    "polar_residual",
    "exact_residuals",
    "linearization_consistency",
    "SUITES",
    "run_suite",
]

# graph equations are evaluated only where the graph slope stays below this
SLOPE_CAP = 2.0
# samples kept away from segment ends for the third-derivative equations
EDGE_SKIP = 10
# half width of the polynomial fits used for d(kappa)/ds
_HALF = 5


class VerificationError(ValueError):
    pass


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one numerical check.

    ``expected`` is a number or a closed interval ``(lo, hi)``; a check with a
    number passes when ``|measured - expected| <= tolerance``.
    """

    name: str
    passed: bool
    measured: float
    expected: Union[float, Tuple[float, float]]
    tolerance: float

    @classmethod
    def near(cls, name, measured, expected, tolerance):
        ok = bool(abs(measured - expected) <= tolerance)
        return cls(name, ok, float(measured), float(expected), float(tolerance))

    @classmethod
    def within(cls, name, measured, lo, hi):
        ok = bool(lo <= measured <= hi)
        return cls(name, ok, float(measured), (float(lo), float(hi)), 0.0)

    def to_dict(self):
        d = asdict(self)
        if isinstance(self.expected, tuple):
            d["expected"] = list(self.expected)
        return d


# -- Gauss-Bonnet -------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(6)


def _segments_cross(p, q, a, b):
    """Proper intersection of segment pq with each segment a[i]b[i]."""
    def orient(u, v, w):
        return (v[..., 0] - u[..., 0]) * (w[..., 1] - u[..., 1]) - \
            (v[..., 1] - u[..., 1]) * (w[..., 0] - u[..., 0])
    d1 = orient(a, b, p)
    d2 = orient(a, b, q)
    d3 = orient(p, q, a)
    d4 = orient(p, q, b)
    return (d1 * d2 < 0.0) & (d3 * d4 < 0.0)


def is_simple(x, r) -> bool:
    """Whether the closed polygon through the points has no self-crossings."""
    pts = np.column_stack((x, r))
    keep = np.concatenate(([True], np.any(np.diff(pts, axis=0) != 0.0, axis=1)))
    pts = pts[keep]
    if np.array_equal(pts[0], pts[-1]):
        pts = pts[:-1]
    m = pts.shape[0]
    if m < 3:
        return False
    a = pts
    b = np.roll(pts, -1, axis=0)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    for i in range(m - 2):
        j0 = i + 2
        j1 = m if i > 0 else m - 1
        if j0 >= j1:
            continue
        sl = slice(j0, j1)
        box = ((lo[sl, 0] <= hi[i, 0]) & (hi[sl, 0] >= lo[i, 0])
               & (lo[sl, 1] <= hi[i, 1]) & (hi[sl, 1] >= lo[i, 1]))
        if not np.any(box):
            continue
        idx = np.nonzero(box)[0] + j0
        if np.any(_segments_cross(a[i], b[i], a[idx], b[idx])):
            return False
    return True


def gauss_bonnet_closed(config: AmbientConfig, curve: ProfileCurve,
                        corners: Sequence[float] = (), closure_tol: float = 1e-6) -> float:
    """Integral of 1 + (n-1)/r^2 over the region bounded by a closed curve.

    Green's theorem turns the area integral into the boundary integral of
    -(r - (n-1)/r) dx. Each edge between samples is the cubic Hermite
    interpolant of the two end points and their unit tangents, integrated
    with 6-point Gauss-Legendre. The result is for the positively oriented
    boundary whatever the direction of the samples.

    Corners are allowed when their angles are passed in ``corners``; the
    tangent is then only required to match at the closing point if there are
    none. For a region bounded by geodesics the value equals 2 pi minus the
    sum of the exterior corner angles.
    """
    x, r, a, s = curve.x, curve.r, curve.alpha, curve.s
    gap = math.hypot(x[-1] - x[0], r[-1] - r[0])
    if not corners:
        gap += abs((a[-1] - a[0] + math.pi) % (2.0 * math.pi) - math.pi)
    if not gap < closure_tol:
        raise VerificationError(f"curve is not closed (defect {gap:.3g})")
    if not np.all(r > 0.0):
        raise VerificationError("region must lie in r > 0")
    if not is_simple(x, r):
        raise VerificationError("boundary intersects itself")
    n = config.n
    h = np.diff(s)
    x0, x1 = x[:-1], x[1:]
    r0, r1 = r[:-1], r[1:]
    tx0, tx1 = np.cos(a[:-1]) * h, np.cos(a[1:]) * h
    tr0, tr1 = np.sin(a[:-1]) * h, np.sin(a[1:]) * h
    total = 0.0
    for tau, w in zip(0.5 * (_GL_NODES + 1.0), 0.5 * _GL_WEIGHTS):
        h00 = 2 * tau ** 3 - 3 * tau ** 2 + 1
        h10 = tau ** 3 - 2 * tau ** 2 + tau
        h01 = -2 * tau ** 3 + 3 * tau ** 2
        h11 = tau ** 3 - tau ** 2
        d00 = 6 * tau ** 2 - 6 * tau
        d10 = 3 * tau ** 2 - 4 * tau + 1
        d01 = -d00
        d11 = 3 * tau ** 2 - 2 * tau
        rr = h00 * r0 + h10 * tr0 + h01 * r1 + h11 * tr1
        dx = d00 * x0 + d10 * tx0 + d01 * x1 + d11 * tx1
        total += w * float(np.sum(-(rr - (n - 1) / rr) * dx))
    # closing chord (length below closure_tol)
    rm = 0.5 * (r[0] + r[-1])
    total += -(rm - (n - 1) / rm) * (x[0] - x[-1])
    area = 0.5 * float(np.sum(x[:-1] * r[1:] - x[1:] * r[:-1]) + x[-1] * r[0] - x[0] * r[-1])
    return total if area > 0.0 else -total


# -- Legendre linearization --------------------------------------------------

def legendre_start(n: int, order: int = 4) -> np.ndarray:
    """Derivatives w(1), w'(1), ..., w^(order)(1) of the solution of
    (1 - xi^2) w'' = n xi w' - 2 n w with w(1) = 1.

    Differentiating k times and setting xi = 1 gives
    (n + 2k) w^(k+1)(1) = -(k(k-1) + n(k-2)) w^(k)(1).

    >>> legendre_start(2, 3).tolist()
    [1.0, 2.0, 1.0, -0.3333333333333333]
    """
    d = [1.0]
    for k in range(order):
        d.append(-(k * (k - 1) + n * (k - 2)) / (n + 2 * k) * d[-1])
    return np.array(d)


def legendre_taylor(n: int, xi: float, order: int = 4) -> Tuple[float, float]:
    """Taylor polynomial about xi = 1 of w and dw/dxi."""
    d = legendre_start(n, order)
    h = xi - 1.0
    w = sum(d[k] * h ** k / math.factorial(k) for k in range(order + 1))
    wp = sum(d[k] * h ** (k - 1) / math.factorial(k - 1) for k in range(1, order + 1))
    return w, wp


def _legendre_rhs(n):
    def f(xi, y):
        return [y[1], (n * xi * y[1] - 2.0 * n * y[0]) / (1.0 - xi * xi)]
    return f


def legendre_linearization(config: AmbientConfig, start: float = 1e-3,
                           rtol: float = 1e-12, atol: float = 1e-14) -> Tuple[float, float]:
    """(w(0), dw/dxi(0)) for the linearization of the polar profile equation
    about the sphere, written in xi = cos(phi).

    The singular point xi = 1 is left on the quartic Taylor polynomial at
    xi = 1 - ``start``; the rest is an 8th-order Dormand-Prince run.
    """
    n = config.n
    w0, wp0 = legendre_taylor(n, 1.0 - start)
    sol = solve_ivp(_legendre_rhs(n), (1.0 - start, 0.0), [w0, wp0], method="DOP853",
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise VerificationError(f"Legendre integration failed: {sol.message}")
    return float(sol.y[0, -1]), float(sol.y[1, -1])


# -- quarter spheres ----------------------------------------------------------

def quarter_sphere_curve(config: AmbientConfig, x0: float,
                         settings: Optional[IntegratorSettings] = None) -> ProfileCurve:
    """Q[x0] from the axis up to its first r-axis crossing (or, failing that,
    its first vertical tangent)."""
    settings = settings or IntegratorSettings()
    curve = integrate(config, settings, InitialData.axis_start(x0), max_vertical=1)
    cross = curve.events_of(EventKind.R_AXIS_CROSSING)
    if not cross:
        return curve
    return _head(curve, cross[0].index)


def _head(curve, stop):
    m = stop + 1
    ev = tuple(e for e in curve.events if e.index < m)
    return ProfileCurve(curve.config, curve.s[:m].copy(), curve.x[:m].copy(),
                        curve.r[:m].copy(), curve.alpha[:m].copy(), curve.kappa[:m].copy(),
                        ev, curve.head, Termination.ARCLENGTH)


def _check_x0(config, x0):
    if not x0 > 0.0:
        raise ValueError("x0 must be positive")
    if abs(x0 - config.sphere_radius) < 1e-12:
        raise ValueError("x0 = sqrt(2n) is the sphere itself")


def quarter_sphere_intersections(config: AmbientConfig, x0: float,
                                 settings: Optional[IntegratorSettings] = None) -> int:
    """Number of crossings of the sphere x^2 + r^2 = 2n by Q[x0] before its
    first r-axis crossing."""
    _check_x0(config, x0)
    curve = quarter_sphere_curve(config, x0, settings)
    return len(curve.events_of(EventKind.SPHERE_CROSSING))


def quarter_sphere_signature(config: AmbientConfig, x0: float,
                             settings: Optional[IntegratorSettings] = None):
    """(r, alpha) at the first r-axis crossing of Q[x0], alpha in (-pi/2, pi/2)."""
    _check_x0(config, x0)
    curve = quarter_sphere_curve(config, x0, settings)
    cross = curve.events_of(EventKind.R_AXIS_CROSSING)
    if not cross:
        raise VerificationError(f"Q[{x0}] reaches no r-axis crossing")
    i = cross[0].index
    return float(curve.r[i]), float(math.atan(math.tan(curve.alpha[i])))


# -- mean convexity and graph equations ---------------------------------------

def mean_convexity_margin(curve: ProfileCurve) -> float:
    """max of Psi = x u' - u over a curve that is a single graph r = u(x).

    Samples with a vertical tangent (axis end points) are left out; there
    Psi is unbounded.
    """
    c = np.cos(curve.alpha)
    inner = np.abs(c) > 1e-9
    if np.count_nonzero(inner) < 2:
        raise VerificationError("curve has no graphical samples")
    sg = np.sign(c[inner])
    if not (np.all(sg > 0) or np.all(sg < 0)):
        raise VerificationError("curve is not a graph over the x-axis")
    up = np.tan(curve.alpha[inner])
    psi = curve.x[inner] * up - curve.r[inner]
    return float(np.max(psi))


def _split_pieces(curve):
    cuts = [e.index for e in curve.events_of(EventKind.VERTICAL_TANGENT)]
    bounds = [0] + [c for c in cuts if 0 < c < len(curve) - 1] + [len(curve) - 1]
    return [(bounds[j], bounds[j + 1]) for j in range(len(bounds) - 1)]


def _local_derivative(s, v, half=_HALF, deg=8):
    """dv/ds by least-squares polynomial fits on sliding windows."""
    m = s.shape[0]
    out = np.full(m, np.nan)
    for i in range(half, m - half):
        ss = s[i - half:i + half + 1] - s[i]
        scale = max(abs(ss[0]), abs(ss[-1]))
        if scale == 0.0:
            continue
        p = np.polynomial.polynomial.polyfit(ss / scale, v[i - half:i + half + 1], deg)
        out[i] = p[1] / scale
    return out


def graph_ode_residuals(curve: ProfileCurve) -> float:
    """Largest residual of the graph forms of the profile equation.

    Where |tan(alpha)| <= 2 the curve is read as r = u(x) and checked against
    u''/(1+u'^2) = x u'/2 - u/2 + (n-1)/u and its x-derivative; where
    |cot(alpha)| <= 2 it is read as x = f(r) and checked against
    f''/(1+f'^2) = (r/2 - (n-1)/r) f' - f/2 and its r-derivative.
    u' = tan(alpha), u'' = kappa / cos(alpha)^3 and the third derivatives
    use d(kappa)/ds from local polynomial fits.
    """
    n = curve.config.n
    worst = 0.0
    used = False
    for lo, hi in _split_pieces(curve):
        if hi - lo < 2 * (EDGE_SKIP + _HALF) + 4:
            warnings.warn(f"graph piece [{lo}, {hi}] too short for finite differences")
            continue
        sl = slice(lo, hi + 1)
        s, x, r = curve.s[sl], curve.x[sl], curve.r[sl]
        a, k = curve.alpha[sl], curve.kappa[sl]
        ok = r > 0.0
        c, sn = np.cos(a), np.sin(a)
        dk = _local_derivative(s, k)
        # the fitting window must stay EDGE_SKIP samples clear of the ends too
        inner = np.zeros(s.shape[0], bool)
        inner[EDGE_SKIP + _HALF:-(EDGE_SKIP + _HALF)] = True
        inner &= np.isfinite(dk)

        gx = ok & (np.abs(c) * SLOPE_CAP >= np.abs(sn))
        if np.any(gx):
            up = sn[gx] / c[gx]
            upp = k[gx] / c[gx] ** 3
            q = 1.0 + up * up
            res = upp / q - (x[gx] * up / 2 - r[gx] / 2 + (n - 1) / r[gx])
            worst = max(worst, float(np.max(np.abs(res))))
            used = True
            g3 = gx & inner
            if np.any(g3):
                cc, ss_, kk = c[g3], sn[g3], k[g3]
                up = ss_ / cc
                upp = kk / cc ** 3
                uppp = dk[g3] / cc ** 4 + 3.0 * kk * kk * ss_ / cc ** 5
                q = 1.0 + up * up
                res = uppp / q - (2 * up * upp ** 2 / q ** 2 + x[g3] * upp / 2
                                  - (n - 1) / r[g3] ** 2 * up)
                worst = max(worst, float(np.max(np.abs(res))))

        gr = ok & (np.abs(sn) * SLOPE_CAP >= np.abs(c))
        if np.any(gr):
            fp = c[gr] / sn[gr]
            fpp = -k[gr] / sn[gr] ** 3
            q = 1.0 + fp * fp
            rr = r[gr]
            res = fpp / q - ((rr / 2 - (n - 1) / rr) * fp - x[gr] / 2)
            worst = max(worst, float(np.max(np.abs(res))))
            used = True
            g3 = gr & inner
            if np.any(g3):
                cc, ss_, kk, rr = c[g3], sn[g3], k[g3], r[g3]
                fp = cc / ss_
                fpp = -kk / ss_ ** 3
                fppp = -dk[g3] / ss_ ** 4 + 3.0 * kk * kk * cc / ss_ ** 5
                q = 1.0 + fp * fp
                res = fppp / q - (2 * fp * fpp ** 2 / q ** 2 + (rr / 2 - (n - 1) / rr) * fpp
                                  + (n - 1) / rr ** 2 * fp)
                worst = max(worst, float(np.max(np.abs(res))))
    if not used:
        raise VerificationError("no piece of the curve could be checked")
    return worst


def polar_residual(curve: ProfileCurve, phi_margin: float = 0.05) -> float:
    """Largest residual of the polar form rho(phi) of the profile equation.

    Only samples where phi stays at least ``phi_margin`` away from 0 and pi
    and the curve is transversal to the rays (|dphi/ds| > 1e-3) are used.
    """
    n = curve.config.n
    x, r, a, k = curve.x, curve.r, curve.alpha, curve.kappa
    c, sn = np.cos(a), np.sin(a)
    rho = np.hypot(x, r)
    phi = np.arctan2(r, x)
    A = (x * c + r * sn) / rho          # d rho / ds
    B = (x * sn - r * c) / rho ** 2     # d phi / ds
    dA = (1.0 + k * (r * c - x * sn) - A * A) / rho
    dB = A * (k - 2.0 * B) / rho
    use = (phi > phi_margin) & (phi < math.pi - phi_margin) & (np.abs(B) > 1e-3)
    if not np.any(use):
        raise VerificationError("no samples usable in polar form")
    rho, phi, A, B, dA, dB = rho[use], phi[use], A[use], B[use], dA[use], dB[use]
    rp = A / B
    rpp = (dA * B - A * dB) / B ** 3
    rhs = (rp ** 2 + (rho ** 2 + rp ** 2) * (n - rho ** 2 / 2
                                             - (n - 1) * rp / (rho * np.tan(phi)))) / rho
    return float(np.max(np.abs(rpp - rhs)))


def exact_residuals(config: AmbientConfig, which: Reference, count: int = 1000,
                    seed: int = 0) -> float:
    """max |residual| of the profile equation along a reference solution at
    ``count`` random arclength values."""
    rng = np.random.default_rng(seed)
    which = Reference(which)
    worst = 0.0
    if which is Reference.SPHERE:
        L = math.pi * config.sphere_radius
        ss = rng.uniform(0.0, L, count)
        rate = 1.0 / config.sphere_radius
    else:
        ss = rng.uniform(0.01, 50.0, count)
        rate = 0.0
    for s in ss:
        st = exact_solution(config, which, float(s))
        if st.r <= 0.0:
            continue
        worst = max(worst, abs(residual(config, st, rate)))
    return worst


def linearization_consistency(config: AmbientConfig, eps: Sequence[float] = (4e-3, 2e-3, 1e-3),
                              settings: Optional[IntegratorSettings] = None):
    """Difference quotients (r_sig(Q[sqrt(2n)+e]) - sqrt(2n))/e against w(0).

    Returns (w(0), quotients, errors, observed order); the order is the mean
    of log2 of successive error ratios for halving ``eps``.
    """
    settings = settings or IntegratorSettings(rel_tol=1e-12, abs_tol=1e-14)
    w0, _ = legendre_linearization(config)
    R = config.sphere_radius
    quot = []
    for e in eps:
        r_sig, _ = quarter_sphere_signature(config, R + e, settings)
        quot.append((r_sig - R) / e)
    err = [abs(q - w0) for q in quot]
    rates = [math.log(err[i] / err[i + 1], eps[i] / eps[i + 1]) for i in range(len(err) - 1)
             if err[i + 1] > 0.0]
    order = float(np.mean(rates)) if rates else float("nan")
    return w0, quot, err, order


# -- suites -------------------------------------------------------------------

def _suite_residuals(config, settings):
    out = []
    for which in Reference:
        out.append(CheckReport.near(f"residual/{which.value}",
                                    exact_residuals(config, which), 0.0, 1e-10))
    R = config.sphere_radius
    sphere = integrate(config, settings, InitialData.axis_start(R))
    out.append(CheckReport.near("graph/sphere", graph_ode_residuals(sphere), 0.0, 1e-7))
    out.append(CheckReport.near("polar/sphere", polar_residual(sphere), 0.0, 1e-7))
    gamma = integrate(config, settings.with_(max_arclength=20.0),
                      InitialData.interior(0.0, 1.7, 0.3))
    out.append(CheckReport.near("graph/interior", graph_ode_residuals(gamma), 0.0, 1e-6))
    out.append(CheckReport.within("psi/sphere", mean_convexity_margin(sphere), -math.inf, 0.0))
    outer = quarter_sphere_curve(config, R + 1.0, settings)
    out.append(CheckReport.within("psi/outer", mean_convexity_margin(outer), -math.inf, 0.0))
    return out


def _suite_legendre(config, settings):
    out = []
    n = config.n
    d = legendre_start(n, 3)
    out.append(CheckReport.near("legendre/w2", d[2], 2.0 * n / (n + 2), 1e-12))
    out.append(CheckReport.near("legendre/w3", d[3], -4.0 * n / ((n + 2) * (n + 4)), 1e-12))
    w0, wp0 = legendre_linearization(config)
    out.append(CheckReport.within("legendre/w(0)", w0, -math.inf, 0.0))
    out.append(CheckReport.within("legendre/w'(0)", wp0, 0.0, math.inf))
    _, _, _, order = linearization_consistency(config, settings=settings.with_(
        rel_tol=1e-12, abs_tol=1e-14))
    out.append(CheckReport.near("legendre/first-order", order, 1.0, 0.25))
    return out


def _suite_quarter_spheres(config, settings, count=50):
    out = []
    R = config.sphere_radius
    inner = np.linspace(0.05 * R, R - 0.02, count)
    outer = np.linspace(R + 0.02, R + 1.5, count)
    bad_count = 0
    bad_sig = 0
    for x0 in inner:
        if quarter_sphere_intersections(config, float(x0), settings) != 1:
            bad_count += 1
        r_sig, a_sig = quarter_sphere_signature(config, float(x0), settings)
        if not (r_sig > R and a_sig < 0.0):
            bad_sig += 1
    for x0 in outer:
        if quarter_sphere_intersections(config, float(x0), settings) != 1:
            bad_count += 1
        r_sig, a_sig = quarter_sphere_signature(config, float(x0), settings)
        if not (r_sig < R and a_sig > 0.0):
            bad_sig += 1
    out.append(CheckReport.near("quarter/one-crossing-failures", bad_count, 0, 0))
    out.append(CheckReport.near("quarter/signature-failures", bad_sig, 0, 0))
    return out


def _suite_gauss_bonnet(config, settings):
    from .shooting import find_angenent_torus
    out = []
    _, torus = find_angenent_torus(config, settings)
    out.append(CheckReport.near("gauss-bonnet/torus", gauss_bonnet_closed(config, torus),
                                2.0 * math.pi, 1e-3))
    rc = config.cylinder_radius
    rad = 0.1
    th = np.linspace(0.0, 2.0 * math.pi, 2001)
    circle = ProfileCurve(config, rad * th, rad * np.cos(th), rc + rad * np.sin(th),
                          th + math.pi / 2, np.full(th.shape, 1.0 / rad), (),
                          Termination.START, Termination.CLOSED)
    # exact: the integral of (n-1)/r^2 over a disc of radius a centred at
    # height c is 2 pi (n-1) (c / sqrt(c^2 - a^2) - 1)
    exact = math.pi * rad ** 2 + 2.0 * math.pi * (config.n - 1) * (
        rc / math.sqrt(rc * rc - rad * rad) - 1.0)
    out.append(CheckReport.near("gauss-bonnet/disc", gauss_bonnet_closed(config, circle),
                                exact, 1e-10))
    return out


SUITES = {
    "residuals": _suite_residuals,
    "legendre": _suite_legendre,
    "quarter-spheres": _suite_quarter_spheres,
    "gauss-bonnet": _suite_gauss_bonnet,
}


def run_suite(config: AmbientConfig, name: str = "all",
              settings: Optional[IntegratorSettings] = None) -> List[CheckReport]:
    """Run one named suite, or all of them in a fixed order."""
    settings = settings or IntegratorSettings()
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(SUITES[key](config, settings))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return SUITES[name](config, settings)
