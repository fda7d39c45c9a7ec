# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled chain solver and front propagation.

Same contract as ``_pykernels``; the Hessian is stored as a (cyclic)
tridiagonal band and solved in O(m).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, hypot, log, fabs, sqrt, isfinite

cnp.import_array()

cdef enum:
    NONE = 0
    POINT = 1
    PHASE = 2


cdef double _terms(double[::1] cx, double[::1] cy, double[::1] r, double[::1] t,
                   bint cyclic, int sk, double sax, double say,
                   int ek, double ebx, double eby,
                   double[::1] g, double[::1] hd, double[::1] hl, double* hc,
                   double[::1] ct, double[::1] st, double[::1] x, double[::1] y,
                   bint want_derivs) nogil:
    cdef Py_ssize_t m = t.shape[0], i, j, k, npair
    cdef double E = 0.0, L, ux, uy, ati, atj, ani, anj, c
    for i in range(m):
        ct[i] = cos(t[i])
        st[i] = sin(t[i])
        x[i] = cx[i] + r[i] * ct[i]
        y[i] = cy[i] + r[i] * st[i]
        if want_derivs:
            g[i] = 0.0
            hd[i] = 0.0
            hl[i] = 0.0
    hc[0] = 0.0
    npair = m if cyclic else m - 1
    for k in range(npair):
        i = k
        j = k + 1 if k + 1 < m else 0
        ux = x[j] - x[i]
        uy = y[j] - y[i]
        L = hypot(ux, uy)
        E += L
        if not want_derivs:
            continue
        ux /= L
        uy /= L
        ati = -ux * st[i] + uy * ct[i]
        atj = -ux * st[j] + uy * ct[j]
        ani = ux * ct[i] + uy * st[i]
        anj = ux * ct[j] + uy * st[j]
        g[i] += -r[i] * ati
        g[j] += r[j] * atj
        hd[i] += r[i] * r[i] * (1.0 - ati * ati) / L + r[i] * ani
        hd[j] += r[j] * r[j] * (1.0 - atj * atj) / L - r[j] * anj
        c = -r[i] * r[j] * ((st[i] * st[j] + ct[i] * ct[j]) - ati * atj) / L
        if j == i + 1:
            hl[i] += c
        elif m == 2:
            hl[0] += c
        else:
            hc[0] += c
    if not cyclic:
        if sk == POINT:
            ux = x[0] - sax
            uy = y[0] - say
            L = hypot(ux, uy)
            E += L
            if want_derivs:
                ux /= L
                uy /= L
                ati = -ux * st[0] + uy * ct[0]
                ani = ux * ct[0] + uy * st[0]
                g[0] += r[0] * ati
                hd[0] += r[0] * r[0] * (1.0 - ati * ati) / L - r[0] * ani
        elif sk == PHASE:
            E += x[0] * sax + y[0] * say
            if want_derivs:
                g[0] += r[0] * (-st[0] * sax + ct[0] * say)
                hd[0] += -r[0] * (ct[0] * sax + st[0] * say)
        if ek == POINT:
            i = m - 1
            ux = ebx - x[i]
            uy = eby - y[i]
            L = hypot(ux, uy)
            E += L
            if want_derivs:
                ux /= L
                uy /= L
                ati = -ux * st[i] + uy * ct[i]
                ani = ux * ct[i] + uy * st[i]
                g[i] += -r[i] * ati
                hd[i] += r[i] * r[i] * (1.0 - ati * ati) / L + r[i] * ani
    return E


cdef bint _thomas(Py_ssize_t m, double[::1] a, double[::1] b, double[::1] c,
                  double[::1] rhs, double[::1] out, double[::1] cp) nogil:
    # a: sub, b: diag, c: super (a[i] couples i to i-1)
    cdef Py_ssize_t i
    cdef double den
    if fabs(b[0]) < 1e-300:
        return False
    cp[0] = c[0] / b[0]
    out[0] = rhs[0] / b[0]
    for i in range(1, m):
        den = b[i] - a[i] * cp[i - 1]
        if fabs(den) < 1e-300:
            return False
        cp[i] = c[i] / den if i < m - 1 else 0.0
        out[i] = (rhs[i] - a[i] * out[i - 1]) / den
    for i in range(m - 2, -1, -1):
        out[i] -= cp[i] * out[i + 1]
    return True


cdef bint _solve(Py_ssize_t m, bint cyclic, double[::1] hd, double[::1] hl,
                 double hc, double[::1] g, double[::1] d,
                 double[::1] a, double[::1] b, double[::1] c, double[::1] rhs,
                 double[::1] z, double[::1] u, double[::1] cp) nogil:
    cdef Py_ssize_t i
    cdef double gam, fac, vz, vy
    for i in range(m):
        a[i] = hl[i - 1] if i > 0 else 0.0
        c[i] = hl[i] if i < m - 1 else 0.0
        b[i] = hd[i]
        rhs[i] = -g[i]
    if m == 1:
        if fabs(b[0]) < 1e-300:
            return False
        d[0] = rhs[0] / b[0]
        return True
    if not cyclic or m == 2 or hc == 0.0:
        return _thomas(m, a, b, c, rhs, d, cp)
    # Sherman-Morrison for the corner entries
    gam = -b[0]
    b[0] -= gam
    b[m - 1] -= hc * hc / gam
    if not _thomas(m, a, b, c, rhs, d, cp):
        return False
    for i in range(m):
        u[i] = 0.0
    u[0] = gam
    u[m - 1] = hc
    if not _thomas(m, a, b, c, u, z, cp):
        return False
    vy = d[0] + hc / gam * d[m - 1]
    vz = z[0] + hc / gam * z[m - 1]
    if fabs(1.0 + vz) < 1e-300:
        return False
    fac = vy / (1.0 + vz)
    for i in range(m):
        d[i] -= fac * z[i]
    return True


def solve_chain(cx, cy, r, t0, bint cyclic, int start_kind, double sax, double say,
                int end_kind, double ebx, double eby, double tol=1e-12,
                int maxiter=200):
    """Minimise the chain functional by damped Newton.

    Returns ``(t, value, residual, iterations, converged)``.
    """
    cdef double[::1] vcx = np.ascontiguousarray(cx, dtype=np.float64)
    cdef double[::1] vcy = np.ascontiguousarray(cy, dtype=np.float64)
    cdef double[::1] vr = np.ascontiguousarray(r, dtype=np.float64)
    tarr = np.array(t0, dtype=np.float64)
    cdef double[::1] t = tarr
    cdef Py_ssize_t m = t.shape[0], i
    work = np.empty((17, m), dtype=np.float64)
    cdef double[::1] g = work[0], hd = work[1], hl = work[2]
    cdef double[::1] ct = work[3], st = work[4], x = work[5], y = work[6]
    cdef double[::1] d = work[7], a = work[8], b = work[9], c = work[10]
    cdef double[::1] rhs = work[11], z = work[12], u = work[13], cp = work[14]
    cdef double[::1] tn = work[15], dummy = work[16]
    cdef double hc = 0.0, E, En, res, slope, big, step
    cdef int it = 0
    cdef bint ok, converged = False
    with nogil:
        while it < maxiter:
            E = _terms(vcx, vcy, vr, t, cyclic, start_kind, sax, say, end_kind,
                       ebx, eby, g, hd, hl, &hc, ct, st, x, y, True)
            res = 0.0
            for i in range(m):
                if fabs(g[i]) > res:
                    res = fabs(g[i])
            if res <= tol:
                converged = True
                break
            it += 1
            ok = _solve(m, cyclic, hd, hl, hc, g, d, a, b, c, rhs, z, u, cp)
            slope = 0.0
            if ok:
                for i in range(m):
                    if not isfinite(d[i]):
                        ok = False
                    slope += g[i] * d[i]
                if slope >= 0.0:
                    ok = False
            if not ok:
                slope = 0.0
                for i in range(m):
                    d[i] = -g[i]
                    slope -= g[i] * g[i]
            big = 0.0
            for i in range(m):
                if fabs(d[i]) > big:
                    big = fabs(d[i])
            if big > 0.5:
                for i in range(m):
                    d[i] *= 0.5 / big
                slope *= 0.5 / big
            if res < 1e-6:
                for i in range(m):
                    t[i] += d[i]
                continue
            step = 1.0
            ok = False
            while step > 1e-14:
                for i in range(m):
                    tn[i] = t[i] + step * d[i]
                En = _terms(vcx, vcy, vr, tn, cyclic, start_kind, sax, say,
                            end_kind, ebx, eby, dummy, dummy, dummy, &hc,
                            ct, st, x, y, False)
                if En <= E + 1e-4 * step * slope:
                    ok = True
                    break
                step *= 0.5
            if not ok:
                break
            for i in range(m):
                t[i] = tn[i]
        E = _terms(vcx, vcy, vr, t, cyclic, start_kind, sax, say, end_kind,
                   ebx, eby, g, hd, hl, &hc, ct, st, x, y, True)
        res = 0.0
        for i in range(m):
            if fabs(g[i]) > res:
                res = fabs(g[i])
    return tarr, E, res, it, bool(converged or res <= tol)


def front_chain(px, py, cx, cy, r, double kappa0, double rho):
    """Propagate a front along the points ``p`` with reflections.

    See ``_pykernels.front_chain``.
    """
    cdef double[::1] vpx = np.ascontiguousarray(px, dtype=np.float64)
    cdef double[::1] vpy = np.ascontiguousarray(py, dtype=np.float64)
    cdef double[::1] vcx = np.ascontiguousarray(cx, dtype=np.float64)
    cdef double[::1] vcy = np.ascontiguousarray(cy, dtype=np.float64)
    cdef double[::1] vr = np.ascontiguousarray(r, dtype=np.float64)
    cdef Py_ssize_t n = vpx.shape[0], k
    kin_a = np.zeros(n)
    kout_a = np.zeros(n)
    cos_a = np.ones(n)
    logs_a = np.zeros(max(n - 1, 0))
    cdef double[::1] kin = kin_a, kout = kout_a, cs = cos_a, logs = logs_a
    cdef double dd, aa, ux, uy, nx, ny, cc
    kin[0] = kappa0
    kout[0] = kappa0
    with nogil:
        for k in range(1, n):
            ux = vpx[k] - vpx[k - 1]
            uy = vpy[k] - vpy[k - 1]
            dd = hypot(ux, uy)
            aa = 1.0 + dd * kout[k - 1]
            logs[k - 1] = -rho * log(aa)
            kin[k] = kout[k - 1] / aa
            if vr[k] > 0.0:
                nx = (vpx[k] - vcx[k]) / vr[k]
                ny = (vpy[k] - vcy[k]) / vr[k]
                cc = -(ux * nx + uy * ny) / dd
                cs[k] = cc
                kout[k] = kin[k] + 2.0 / (vr[k] * cc)
            else:
                kout[k] = kin[k]
    return kin_a, kout_a, cos_a, logs_a
