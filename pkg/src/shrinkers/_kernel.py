"""Compiled Dormand-Prince 5(4) kernel for the arclength geodesic system.

State is ``(x, r, alpha)`` with ``x' = cos(alpha)``, ``r' = sin(alpha)`` and
``alpha' = (x/2) sin(alpha) + ((n-1)/r - r/2) cos(alpha)``.

Event roots are located by bisection on the step fraction, re-taking the
Runge-Kutta step from the left end of the accepted step each time, so the
continuous extension has the full order of the method.
"""

import numpy as np
from numba import njit

# event kinds
EV_VERTICAL = 0
EV_AXIS_HIT = 1
EV_RAXIS = 2
EV_CYLINDER = 3
EV_SPHERE = 4
EV_TRUNCATED = 5
EV_AXIS_APPROACH = 6
EV_CLOSED = 7
EV_HORIZONTAL = 8

# termination status
ST_RUNNING = 0
ST_AXIS_HIT = 1
ST_ARCLENGTH = 2
ST_ESCAPE = 3
ST_CLOSED = 4
ST_UNDERFLOW = 5
ST_MAX_STEPS = 6
ST_DEPTH = 7

_NEV = 6  # located event functions: vertical, r-axis, cylinder, sphere, approach, horizontal

# Dormand-Prince 5(4) tableau
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                           49.0 / 176.0, -5103.0 / 18656.0)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4, E5, E6, E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


@njit(cache=True)
def rhs(n, x, r, a):
    c = np.cos(a)
    s = np.sin(a)
    return c, s, 0.5 * x * s + ((n - 1.0) / r - 0.5 * r) * c


@njit(cache=True)
def dp_step(n, x, r, a, h):
    """One Dormand-Prince step. Returns (x, r, a, ex, er, ea, ok)."""
    k1x, k1r, k1a = rhs(n, x, r, a)
    r2 = r + h * A21 * k1r
    if r2 <= 0.0:
        return x, r, a, 0.0, 0.0, 0.0, False
    k2x, k2r, k2a = rhs(n, x + h * A21 * k1x, r2, a + h * A21 * k1a)
    r3 = r + h * (A31 * k1r + A32 * k2r)
    if r3 <= 0.0:
        return x, r, a, 0.0, 0.0, 0.0, False
    k3x, k3r, k3a = rhs(n, x + h * (A31 * k1x + A32 * k2x), r3,
                        a + h * (A31 * k1a + A32 * k2a))
    r4 = r + h * (A41 * k1r + A42 * k2r + A43 * k3r)
    if r4 <= 0.0:
        return x, r, a, 0.0, 0.0, 0.0, False
    k4x, k4r, k4a = rhs(n, x + h * (A41 * k1x + A42 * k2x + A43 * k3x), r4,
                        a + h * (A41 * k1a + A42 * k2a + A43 * k3a))
    r5 = r + h * (A51 * k1r + A52 * k2r + A53 * k3r + A54 * k4r)
    if r5 <= 0.0:
        return x, r, a, 0.0, 0.0, 0.0, False
    k5x, k5r, k5a = rhs(n, x + h * (A51 * k1x + A52 * k2x + A53 * k3x + A54 * k4x), r5,
                        a + h * (A51 * k1a + A52 * k2a + A53 * k3a + A54 * k4a))
    r6 = r + h * (A61 * k1r + A62 * k2r + A63 * k3r + A64 * k4r + A65 * k5r)
    if r6 <= 0.0:
        return x, r, a, 0.0, 0.0, 0.0, False
    k6x, k6r, k6a = rhs(n, x + h * (A61 * k1x + A62 * k2x + A63 * k3x + A64 * k4x + A65 * k5x),
                        r6,
                        a + h * (A61 * k1a + A62 * k2a + A63 * k3a + A64 * k4a + A65 * k5a))
    xn = x + h * (B1 * k1x + B3 * k3x + B4 * k4x + B5 * k5x + B6 * k6x)
    rn = r + h * (B1 * k1r + B3 * k3r + B4 * k4r + B5 * k5r + B6 * k6r)
    an = a + h * (B1 * k1a + B3 * k3a + B4 * k4a + B5 * k5a + B6 * k6a)
    if rn <= 0.0:
        return x, r, a, 0.0, 0.0, 0.0, False
    k7x, k7r, k7a = rhs(n, xn, rn, an)
    ex = h * (E1 * k1x + E3 * k3x + E4 * k4x + E5 * k5x + E6 * k6x + E7 * k7x)
    er = h * (E1 * k1r + E3 * k3r + E4 * k4r + E5 * k5r + E6 * k6r + E7 * k7r)
    ea = h * (E1 * k1a + E3 * k3a + E4 * k4a + E5 * k5a + E6 * k6a + E7 * k7a)
    return xn, rn, an, ex, er, ea, True


@njit(cache=True)
def series_coeffs(n, x_axis):
    """Even Taylor coefficients of x = f(r) at the axis: x_axis + c2 r^2 + c4 r^4."""
    f2 = -x_axis / (2.0 * n)
    f4 = -(3.0 / (4.0 * n * (n + 2.0))) * (x_axis ** 3 / (n * n) + x_axis)
    return f2 / 2.0, f4 / 24.0


CLOSE_ORDER = 8  # closing series runs through r^(2 * CLOSE_ORDER)

# Gauss-Legendre nodes and weights on [0, 1] for series arclengths
_GL_T = 0.5 * (np.polynomial.legendre.leggauss(8)[0] + 1.0)
_GL_W = 0.5 * np.polynomial.legendre.leggauss(8)[1]


@njit(cache=True)
def series_poly(n, x_axis, order):
    """Power-series coefficients F[j] of r^j for the r-graph x = f(r) leaving
    the axis perpendicularly at x_axis, through r^(2 * order).

    Multiplying the r-graph equation by r gives
    r f'' = (1 + f'^2) ((r^2/2 - (n-1)) f' - r f / 2), and the coefficient of
    r^(p-1) fixes F[p] from the lower ones: p (p + n - 2) F[p] = rest.
    """
    P = 2 * order + 1
    F = np.zeros(P)
    F[0] = x_axis
    for k in range(1, order + 1):
        p = 2 * k
        m = p - 1
        # f' and its square up to r^m
        D = np.zeros(P)
        for j in range(P - 1):
            D[j] = (j + 1) * F[j + 1]
        Q = np.zeros(P)
        Q[0] = 1.0
        for i in range(m + 1):
            for j in range(m + 1 - i):
                Q[i + j] += D[i] * D[j]
        # (r^2/2 - (n-1)) f' - r f / 2, with F[p] still zero
        T = np.zeros(P)
        for j in range(m + 1):
            t = -(n - 1.0) * D[j]
            if j >= 2:
                t += 0.5 * D[j - 2]
            if j >= 1:
                t -= 0.5 * F[j - 1]
            T[j] = t
        rest = 0.0
        for i in range(m + 1):
            rest += Q[i] * T[m - i]
        F[p] = rest / (p * (p + n - 2.0))
    return F


@njit(cache=True)
def poly_eval(F, r):
    v = 0.0
    for j in range(F.shape[0] - 1, -1, -1):
        v = v * r + F[j]
    return v


@njit(cache=True)
def poly_slope(F, r):
    v = 0.0
    for j in range(F.shape[0] - 1, 0, -1):
        v = v * r + j * F[j]
    return v


@njit(cache=True)
def poly_arclength(F, h):
    """Arclength of x = f(r) for r in [0, h]."""
    tot = 0.0
    for q in range(_GL_T.shape[0]):
        fp = poly_slope(F, h * _GL_T[q])
        tot += _GL_W[q] * np.sqrt(1.0 + fp * fp)
    return h * tot


@njit(cache=True)
def axis_foot(n, x, r):
    """Axis point x* whose closing series passes through (x, r).

    Returns (x*, coefficients). The map x* -> f(r) has slope 1 + O(r^2), so
    a secant iteration converges in a few steps.
    """
    xa = x
    Fa = series_poly(n, xa, CLOSE_ORDER)
    ga = poly_eval(Fa, r) - x
    xb = x - ga
    Fb = series_poly(n, xb, CLOSE_ORDER)
    gb = poly_eval(Fb, r) - x
    for _ in range(30):
        if gb == 0.0 or gb == ga:
            break
        xc = xb - gb * (xb - xa) / (gb - ga)
        xa, ga = xb, gb
        xb = xc
        Fb = series_poly(n, xb, CLOSE_ORDER)
        gb = poly_eval(Fb, r) - x
        if abs(xb - xa) < 1e-16 * (1.0 + abs(xb)):
            break
    return xb, Fb


@njit(cache=True)
def series_arclength(n, x_axis, h):
    c2, c4 = series_coeffs(n, x_axis)
    a = 2.0 * c2
    b = 4.0 * c4
    return h + a * a * h ** 3 / 6.0 + (a * b / 5.0 - a ** 4 / 40.0) * h ** 5


@njit(cache=True)
def wrap_angle(d):
    return d - 2.0 * np.pi * np.floor((d + np.pi) / (2.0 * np.pi))


@njit(cache=True)
def approach_defect(n, x, r, a):
    """Angle between the heading and the descending axis-series geodesic
    through (x, r). Returns (defect, x*, series coefficients)."""
    xs, F = axis_foot(n, x, r)
    fp = poly_slope(F, r)
    a_pred = np.arctan2(-1.0, -fp)
    return wrap_angle(a - a_pred), xs, F


@njit(cache=True)
def _event_values(n, x, r, a, rc2, rs2, r_match):
    g0 = np.cos(a)
    g1 = x
    g2 = r * r - rc2
    g3 = x * x + r * r - rs2
    g4 = r - r_match
    g5 = np.sin(a)
    return g0, g1, g2, g3, g4, g5


@njit(cache=True)
def _grow(arr, m):
    out = np.empty(max(2 * arr.shape[0], m), dtype=arr.dtype)
    out[: arr.shape[0]] = arr
    return out


@njit(cache=True)
def integrate_kernel(n, s0, x0, r0, a0, rel_tol, abs_tol, max_step, max_turn,
                     s_max, x_escape, axis_eps, r_match, axis_match_tol,
                     closure_tol, stop_on_closure, max_steps, max_vertical):
    """Integrate from (s0, x0, r0, a0) until a terminal condition.

    Returns (S, X, R, A, K, ev_idx, ev_kind, ev_val, status, last).
    ``K`` is the curvature d(alpha)/ds at each sample. A non-negative
    ``max_vertical`` stops the run at that many vertical tangents. ``last`` holds the
    last valid state (s, x, r, a) when ``status`` signals a failure.
    """
    cap = 4096
    S = np.empty(cap)
    X = np.empty(cap)
    R = np.empty(cap)
    A = np.empty(cap)
    K = np.empty(cap)
    ecap = 256
    EI = np.empty(ecap, dtype=np.int64)
    EK = np.empty(ecap, dtype=np.int64)
    EV = np.empty(ecap)
    rc2 = 2.0 * (n - 1.0)
    rs2 = 2.0 * n
    on_raxis = abs(x0) < 1e-14

    m = 0
    ne = 0
    s = s0
    x = x0
    r = r0
    a = a0
    _, _, k = rhs(n, x, r, a)
    S[0] = s
    X[0] = x
    R[0] = r
    A[0] = a
    K[0] = k
    m = 1
    status = ST_RUNNING
    last = np.array([s, x, r, a])

    h = min(max_step, 1e-3 * max(r, 1e-6))
    if abs(k) > 0.0:
        h = min(h, max_turn / abs(k))
    steps = 0
    nvert = 0
    while status == ST_RUNNING:
        steps += 1
        if steps > max_steps:
            status = ST_MAX_STEPS
            break
        h = min(h, max_step)
        if abs(k) > 0.0:
            h = min(h, max_turn / abs(k))
        # land exactly on the arclength budget
        h = min(h, s0 + s_max - s)
        if h < 1e-14 * (1.0 + abs(s)):
            status = ST_UNDERFLOW
            break
        xn, rn, an, ex, er, ea, ok = dp_step(n, x, r, a, h)
        if not ok:
            h *= 0.25
            continue
        sx = abs_tol + rel_tol * max(abs(x), abs(xn))
        sr = abs_tol + rel_tol * max(abs(r), abs(rn))
        sa = abs_tol + rel_tol  # alpha is unwrapped; keep its scale absolute
        err = np.sqrt(((ex / sx) ** 2 + (er / sr) ** 2 + (ea / sa) ** 2) / 3.0)
        # near the axis the error scale must follow r itself
        if rn < 1e-3:
            err = max(err, abs(er) / (rel_tol * min(r, rn) + 1e-300))
        if err > 1.0:
            h *= max(0.1, min(0.5, 0.9 * err ** -0.2))
            continue
        if abs(an - a) > 1.25 * max_turn:
            h *= max_turn / abs(an - a)
            continue
        # accepted step [s, s + h]
        ga = _event_values(n, x, r, a, rc2, rs2, r_match)
        gb = _event_values(n, xn, rn, an, rc2, rs2, r_match)
        # collect roots in this step, ordered by step fraction
        nroot = 0
        th = np.zeros(_NEV)
        kinds = np.zeros(_NEV, dtype=np.int64)
        for j in range(_NEV):
            if (ga[j] > 0.0 and gb[j] <= 0.0) or (ga[j] < 0.0 and gb[j] >= 0.0):
                if j == 4 and not (ga[j] > 0.0 and gb[j] <= 0.0):
                    continue  # only descending crossings approach the axis
                lo = 0.0
                hi = 1.0
                glo = ga[j]
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    xm, rm, am, _, _, _, okm = dp_step(n, x, r, a, mid * h)
                    gm = _event_values(n, xm, rm, am, rc2, rs2, r_match)[j]
                    if not okm:
                        break
                    if (gm > 0.0) == (glo > 0.0) and gm != 0.0:
                        lo = mid
                        glo = gm
                    else:
                        hi = mid
                    if hi - lo < 1e-15:
                        break
                th[nroot] = hi
                kinds[nroot] = j
                nroot += 1
        order = np.argsort(th[:nroot])
        terminated = False
        for q in range(nroot):
            j = kinds[order[q]]
            tq = th[order[q]]
            xe, re_, ae, _, _, _, oke = dp_step(n, x, r, a, tq * h)
            if not oke:
                continue
            se = s + tq * h
            if m >= S.shape[0]:
                S = _grow(S, m + 1)
                X = _grow(X, m + 1)
                R = _grow(R, m + 1)
                A = _grow(A, m + 1)
                K = _grow(K, m + 1)
            # coincident events share one sample
            dup = se - S[m - 1] < 1e-12
            if dup:
                m -= 1
                xe = X[m]
                re_ = R[m]
                ae = A[m]
                se = S[m]
            else:
                _, _, ke = rhs(n, xe, re_, ae)
                S[m] = se
                X[m] = xe
                R[m] = re_
                A[m] = ae
                K[m] = ke
            if ne + 2 >= EI.shape[0]:
                EI = _grow(EI, ne + 3)
                EK = _grow(EK, ne + 3)
                EV = _grow(EV, ne + 3)
            if j == 0:
                EI[ne] = m
                EK[ne] = EV_VERTICAL
                EV[ne] = xe
                ne += 1
                nvert += 1
            elif j == 1:
                EI[ne] = m
                EK[ne] = EV_RAXIS
                EV[ne] = re_
                ne += 1
            elif j == 2:
                EI[ne] = m
                EK[ne] = EV_CYLINDER
                EV[ne] = xe
                ne += 1
            elif j == 3:
                EI[ne] = m
                EK[ne] = EV_SPHERE
                EV[ne] = np.arctan2(re_, xe)
                ne += 1
            elif j == 5:
                EI[ne] = m
                EK[ne] = EV_HORIZONTAL
                EV[ne] = re_
                ne += 1
            else:
                d, xs, F = approach_defect(n, xe, re_, ae)
                EI[ne] = m
                EK[ne] = EV_AXIS_APPROACH
                EV[ne] = d
                ne += 1
            m += 1
            if j == 1 and stop_on_closure and on_raxis and se - s0 > 1e-6:
                dr = abs(re_ - r0)
                da = abs(wrap_angle(ae - a0))
                if dr + da < closure_tol:
                    EI[ne] = m - 1
                    EK[ne] = EV_CLOSED
                    EV[ne] = dr + da
                    ne += 1
                    status = ST_CLOSED
                    terminated = True
                    break
            if j == 0 and max_vertical >= 0 and nvert >= max_vertical:
                status = ST_DEPTH
                terminated = True
                break
            if j == 4:
                d, xs, F = approach_defect(n, xe, re_, ae)
                if abs(d) < axis_match_tol:
                    # close onto the axis along the series solution
                    a_end = ae + wrap_angle(-0.5 * np.pi - ae)
                    l_e = poly_arclength(F, re_)
                    turn = abs(a_end - ae)
                    nfill = max(8, int(np.ceil(l_e / max_step)),
                                int(np.ceil(2.0 * turn / max_turn)))
                    if m + nfill + 1 >= S.shape[0]:
                        S = _grow(S, m + nfill + 2)
                        X = _grow(X, m + nfill + 2)
                        R = _grow(R, m + nfill + 2)
                        A = _grow(A, m + nfill + 2)
                        K = _grow(K, m + nfill + 2)
                    for q2 in range(1, nfill):
                        rq = re_ * (1.0 - q2 / nfill)
                        fp = poly_slope(F, rq)
                        aq = ae + wrap_angle(np.arctan2(-1.0, -fp) - ae)
                        S[m] = se + l_e - poly_arclength(F, rq)
                        X[m] = poly_eval(F, rq)
                        R[m] = rq
                        A[m] = aq
                        K[m] = rhs(n, X[m], rq, aq)[2]
                        m += 1
                    S[m] = se + l_e
                    X[m] = xs
                    R[m] = 0.0
                    A[m] = a_end
                    K[m] = -xs / (2.0 * n)  # limit of alpha' on the descending series
                    EI[ne] = m
                    EK[ne] = EV_AXIS_HIT
                    EV[ne] = d
                    ne += 1
                    m += 1
                    status = ST_AXIS_HIT
                    terminated = True
                    break
        if terminated:
            break
        s = s + h
        x = xn
        r = rn
        a = an
        _, _, k = rhs(n, x, r, a)
        if m >= S.shape[0]:
            S = _grow(S, m + 1)
            X = _grow(X, m + 1)
            R = _grow(R, m + 1)
            A = _grow(A, m + 1)
            K = _grow(K, m + 1)
        if s - S[m - 1] < 1e-12:
            m -= 1  # an event landed on the step end; keep the step state
        S[m] = s
        X[m] = x
        R[m] = r
        A[m] = a
        K[m] = k
        m += 1
        last[0] = s
        last[1] = x
        last[2] = r
        last[3] = a
        if ne + 2 >= EI.shape[0]:
            EI = _grow(EI, ne + 3)
            EK = _grow(EK, ne + 3)
            EV = _grow(EV, ne + 3)
        if r < axis_eps:
            EI[ne] = m - 1
            EK[ne] = EV_AXIS_HIT
            EV[ne] = np.cos(a)
            ne += 1
            status = ST_AXIS_HIT
        elif s0 + s_max - s <= 1e-13 * (1.0 + abs(s)):
            EI[ne] = m - 1
            EK[ne] = EV_TRUNCATED
            EV[ne] = s
            ne += 1
            status = ST_ARCLENGTH
        elif abs(x) > x_escape:
            EI[ne] = m - 1
            EK[ne] = EV_TRUNCATED
            EV[ne] = x
            ne += 1
            status = ST_ESCAPE
        # step-size update
        if err > 0.0:
            h *= min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            h *= 5.0
    return (S[:m].copy(), X[:m].copy(), R[:m].copy(), A[:m].copy(), K[:m].copy(),
            EI[:ne].copy(), EK[:ne].copy(), EV[:ne].copy(), status, last)

