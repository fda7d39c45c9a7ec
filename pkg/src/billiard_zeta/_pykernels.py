"""Pure-Python/numpy reference implementation of the hot kernels.

The chain functional is the total length of a broken line visiting a
sequence of circles at boundary angles ``t``, optionally closed
(periodic), started from a point or a linear phase, and ended at a point.
"""
import math

import numpy as np

NONE, POINT, PHASE = 0, 1, 2


def _segment(px, py, qx, qy):
    dx, dy = qx - px, qy - py
    L = math.hypot(dx, dy)
    return L, dx / L, dy / L


def chain_terms(cx, cy, r, t, cyclic, start_kind, sax, say, end_kind, ebx, eby):
    """Value, gradient and dense Hessian of the chain functional."""
    m = len(t)
    ct = np.cos(t)
    st = np.sin(t)
    x = cx + r * ct
    y = cy + r * st
    E = 0.0
    g = np.zeros(m)
    H = np.zeros((m, m))

    def pair(i, j):
        nonlocal E
        L, ux, uy = _segment(x[i], y[i], x[j], y[j])
        E += L
        # tangents and normals
        tix, tiy = -st[i], ct[i]
        tjx, tjy = -st[j], ct[j]
        ati = ux * tix + uy * tiy
        atj = ux * tjx + uy * tjy
        ani = ux * ct[i] + uy * st[i]
        anj = ux * ct[j] + uy * st[j]
        g[i] += -r[i] * ati
        g[j] += r[j] * atj
        H[i, i] += r[i] ** 2 * (1.0 - ati * ati) / L + r[i] * ani
        H[j, j] += r[j] ** 2 * (1.0 - atj * atj) / L - r[j] * anj
        c = -r[i] * r[j] * ((tix * tjx + tiy * tjy) - ati * atj) / L
        H[i, j] += c
        H[j, i] += c

    for i in range(m - 1):
        pair(i, i + 1)
    if cyclic:
        pair(m - 1, 0)
    else:
        if start_kind == POINT:
            L, ux, uy = _segment(sax, say, x[0], y[0])
            E += L
            at = -ux * st[0] + uy * ct[0]
            an = ux * ct[0] + uy * st[0]
            g[0] += r[0] * at
            H[0, 0] += r[0] ** 2 * (1.0 - at * at) / L - r[0] * an
        elif start_kind == PHASE:
            # phase <x0, e>
            E += x[0] * sax + y[0] * say
            g[0] += r[0] * (-st[0] * sax + ct[0] * say)
            H[0, 0] += -r[0] * (ct[0] * sax + st[0] * say)
        if end_kind == POINT:
            i = m - 1
            L, ux, uy = _segment(x[i], y[i], ebx, eby)
            E += L
            at = -ux * st[i] + uy * ct[i]
            an = ux * ct[i] + uy * st[i]
            g[i] += -r[i] * at
            H[i, i] += r[i] ** 2 * (1.0 - at * at) / L + r[i] * an
    return E, g, H


def chain_value(cx, cy, r, t, cyclic, start_kind, sax, say, end_kind, ebx, eby):
    m = len(t)
    x = cx + r * np.cos(t)
    y = cy + r * np.sin(t)
    seg = np.hypot(np.diff(x), np.diff(y))
    E = math.fsum(seg)
    if cyclic:
        E += math.hypot(x[0] - x[-1], y[0] - y[-1])
    else:
        if start_kind == POINT:
            E += math.hypot(x[0] - sax, y[0] - say)
        elif start_kind == PHASE:
            E += x[0] * sax + y[0] * say
        if end_kind == POINT:
            E += math.hypot(ebx - x[m - 1], eby - y[m - 1])
    return E


def solve_chain(cx, cy, r, t0, cyclic, start_kind, sax, say, end_kind, ebx, eby,
                tol=1e-12, maxiter=200):
    """Minimise the chain functional by damped Newton.

    Returns ``(t, value, residual, iterations, converged)``.
    """
    cx = np.asarray(cx, float)
    cy = np.asarray(cy, float)
    r = np.asarray(r, float)
    t = np.array(t0, dtype=float)
    args = (cyclic, start_kind, sax, say, end_kind, ebx, eby)
    it = 0
    converged = False
    while it < maxiter:
        E, g, H = chain_terms(cx, cy, r, t, *args)
        res = float(np.max(np.abs(g)))
        if res <= tol:
            converged = True
            break
        it += 1
        try:
            d = np.linalg.solve(H, -g)
            slope = float(g @ d)
            if not np.all(np.isfinite(d)) or slope >= 0.0:
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            d = -g
            slope = -float(g @ g)
        big = float(np.max(np.abs(d)))
        if big > 0.5:
            d *= 0.5 / big
            slope *= 0.5 / big
        if res < 1e-6:
            t = t + d
            continue
        step = 1.0
        while step > 1e-14:
            tn = t + step * d
            if chain_value(cx, cy, r, tn, *args) <= E + 1e-4 * step * slope:
                break
            step *= 0.5
        else:
            break
        t = tn
    E, g, _ = chain_terms(cx, cy, r, t, *args)
    res = float(np.max(np.abs(g)))
    return t, E, res, it, converged or res <= tol


def front_chain(px, py, cx, cy, r, kappa0, rho):
    """Propagate a front along the points ``p`` with reflections.

    Point ``k`` reflects on the circle ``(cx[k], cy[k], r[k])`` when
    ``r[k] > 0``; a non-positive radius marks a pass-through point.  The
    front leaves ``p[0]`` with curvature ``kappa0``.  Returns arrays of
    incoming curvature, outgoing curvature, incidence cosine, and the
    per-flight log factors ``-rho*log(1 + d*kappa)`` (length ``n-1``).
    """
    n = len(px)
    kin = np.zeros(n)
    kout = np.zeros(n)
    cos = np.ones(n)
    logs = np.zeros(max(n - 1, 0))
    kout[0] = kappa0
    kin[0] = kappa0
    for k in range(1, n):
        d = math.hypot(px[k] - px[k - 1], py[k] - py[k - 1])
        a = 1.0 + d * kout[k - 1]
        logs[k - 1] = -rho * math.log(a)
        kin[k] = kout[k - 1] / a
        if r[k] > 0.0:
            ux = (px[k] - px[k - 1]) / d
            uy = (py[k] - py[k - 1]) / d
            nx = (px[k] - cx[k]) / r[k]
            ny = (py[k] - cy[k]) / r[k]
            c = -(ux * nx + uy * ny)
            cos[k] = c
            kout[k] = kin[k] + 2.0 / (r[k] * c)
        else:
            kout[k] = kin[k]
    return kin, kout, cos, logs
