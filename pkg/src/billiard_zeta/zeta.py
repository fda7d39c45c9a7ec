"""Dynamical zeta function over a periodic-orbit table: log series, Euler
product, zeros by the argument principle and the two-obstacle lattice."""
from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import brentq

TWO_PI = 2.0 * math.pi
# irrational split offset keeps subdivision cuts off lattice points
_SPLIT = 0.5 + 0.0137 * (math.sqrt(2.0) - 1.0)


@dataclass
class ZetaZero:
    s: complex
    residual: float  # |D(s)|
    multiplicity: int
    n_max: int
    stability: float  # distance to the matching zero of the shorter table
    iterations: int = 0

    @property
    def re(self):
        return self.s.real

    @property
    def im(self):
        return self.s.imag


@dataclass
class ZeroSearch:
    zeros: list
    suspect: list  # boxes (re0, re1, im0, im1) that could not be resolved

    def __iter__(self):
        return iter(self.zeros)

    def __len__(self):
        return len(self.zeros)

    def locations(self):
        return np.array([z.s for z in self.zeros], dtype=complex)


def _arrays(table):
    if hasattr(table, "arrays"):
        return table.arrays()
    T = np.array([o.T for o in table])
    d = np.array([o.delta for o in table])
    s = np.array([o.sign for o in table], dtype=float)
    return T, d, s


def _fsum_complex(terms):
    terms = np.asarray(terms, dtype=complex)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def zeta_log(s, table, m_max=40):
    """Truncated log series ``sum_m 1/m sum_gamma sign^m exp(m u_gamma)``."""
    T, d, sg = _arrays(table)
    if T.size == 0:
        return 0j
    u = -complex(s) * T + d
    terms = []
    for g in range(T.size):
        for m in range(1, m_max + 1):
            terms.append(sg[g] ** m * np.exp(m * u[g]) / m)
    return _fsum_complex(terms)


def euler_product(s, table):
    """``D(s) = prod_gamma (1 - sign_gamma exp(-s T_gamma + delta_gamma))``.

    ``s`` may be an array.
    """
    T, d, sg = _arrays(table)
    s_arr = np.asarray(s, dtype=complex)
    if T.size == 0:
        return np.ones_like(s_arr) if s_arr.ndim else complex(1.0)
    u = -s_arr[..., None] * T + d
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.prod(1.0 - sg * np.exp(u), axis=-1)
    return out if s_arr.ndim else complex(out)


def log_derivative(s, table):
    """``D'(s)/D(s)``."""
    T, d, sg = _arrays(table)
    w = sg * np.exp(-complex(s) * T + d)
    with np.errstate(divide="ignore", invalid="ignore"):
        return complex(np.sum(T * w / (1.0 - w)))


def euler_derivative(s, table):
    """``D'(s)`` by prefix/suffix products (finite at zeros)."""
    T, d, sg = _arrays(table)
    if T.size == 0:
        return 0j
    w = sg * np.exp(-complex(s) * T + d)
    fac = 1.0 - w
    pre = np.concatenate([[1.0 + 0j], np.cumprod(fac)[:-1]])
    suf = np.concatenate([np.cumprod(fac[::-1])[::-1][1:], [1.0 + 0j]])
    return complex(np.sum(pre * suf * T * w))


def factor_lattice(table, window, merge=1e-9):
    """Exact zeros of the truncated product inside ``window``.

    Every Euler factor vanishes on the vertical lattice
    ``(delta + i(2 pi k + pi r)) / T``.  Used as an independent oracle.
    """
    re0, re1, im0, im1 = window
    pts = []
    for o in table:
        re = o.delta / o.T
        if not (re0 < re < re1):
            continue
        shift = math.pi if o.r else 0.0
        kmin = math.ceil((im0 * o.T - shift) / TWO_PI)
        kmax = math.floor((im1 * o.T - shift) / TWO_PI)
        for k in range(kmin, kmax + 1):
            im = (TWO_PI * k + shift) / o.T
            if im0 < im < im1:
                pts.append(complex(re, im))
    pts.sort(key=lambda z: (round(z.imag, 9), z.real))
    merged = []
    for z in pts:
        for i, (w, c) in enumerate(merged):
            if abs(w - z) < merge:
                merged[i] = (w, c + 1)
                break
        else:
            merged.append((z, 1))
    return merged


def pseudo_pole_lattice(scene, k_range, table=None):
    """Leading two-obstacle lattice ``delta/T - i pi k / d``."""
    if scene.kappa0 != 2:
        raise ValueError("the pseudo-pole lattice needs exactly two obstacles")
    from .orbits import find_orbit
    orb = find_orbit(scene, (1, 2)) if table is None else table.orbits[0]
    d = orb.T / 2.0
    return np.array([complex(orb.delta / orb.T, -math.pi * k / d) for k in k_range])


# argument principle -------------------------------------------------------

def _factors(s, T, d, sg):
    u = -np.asarray(s, dtype=complex)[:, None] * T + d
    return 1.0 - sg * np.exp(u)


def _edge_winding(a, b, T, d, sg, n0=16, max_pts=40000):
    """Total argument change of D along the segment a->b.

    Per-factor phase increments are summed; the sampling is refined until
    every increment is below 0.5 rad.  Returns ``None`` when a zero sits
    on (or numerically at) the edge.
    """
    # phase speed of a factor is at most T|w|/|1-w| per unit length
    n = max(n0, int(abs(b - a) * float(np.max(T)) * 2.0))
    while n <= max_pts:
        s = a + (b - a) * np.linspace(0.0, 1.0, n + 1)
        fac = _factors(s, T, d, sg)
        if np.min(np.abs(fac)) < 1e-12:
            return None
        inc = np.diff(np.angle(fac), axis=0)
        inc = (inc + math.pi) % TWO_PI - math.pi
        if np.max(np.abs(inc)) < 0.5:
            return float(math.fsum(inc.ravel()))
        n *= 4
    return None


def winding_number(box, table_arrays):
    re0, re1, im0, im1 = box
    T, d, sg = table_arrays
    corners = [complex(re0, im0), complex(re1, im0), complex(re1, im1), complex(re0, im1)]
    total = 0.0
    for k in range(4):
        w = _edge_winding(corners[k], corners[(k + 1) % 4], T, d, sg)
        if w is None:
            return None
        total += w
    c = total / TWO_PI
    if abs(c - round(c)) > 0.05:
        return None
    return int(round(c))


def newton_zero(s0, table, multiplicity=1, tol=1e-15, maxiter=60):
    """Newton iteration ``s -= m D/D'`` via the log-derivative."""
    s = complex(s0)
    for it in range(1, maxiter + 1):
        ld = log_derivative(s, table)
        if not np.isfinite(ld):
            return s, it
        if ld == 0:
            return complex(math.nan, math.nan), it
        step = multiplicity / ld
        s -= step
        if not np.isfinite(s):
            return complex(math.nan, math.nan), it
        if abs(step) <= tol * max(1.0, abs(s)):
            return s, it
    return s, maxiter


def find_zeros(window, table, tol=1e-14, min_size=1e-6, max_depth=60,
               stability_table=None, resolve_size=0.05):
    """Zeros of the truncated Euler product inside ``window``.

    Parameters
    ----------
    window : (re0, re1, im0, im1)
    table : orbit table
    tol : relative Newton step tolerance
    min_size : boxes smaller than this with several zeros are refined
        with multiplicity-aware Newton
    stability_table : optional shorter table for the stability column;
        defaults to the table truncated one word length shorter
    """
    re0, re1, im0, im1 = (float(v) for v in window)
    arrays = _arrays(table)
    n_max = max((o.m for o in table), default=0)
    if arrays[0].size == 0:
        return ZeroSearch([], [])
    if stability_table is None and hasattr(table, "truncated") and n_max > 1:
        stability_table = table.truncated(n_max - 1)
    zeros, suspect = [], []
    box0 = (re0, re1, im0, im1)
    scale = max(re1 - re0, im1 - im0)
    for k in range(1, 6):
        if winding_number(box0, arrays) is not None:
            break
        # outer boundary runs through a zero: nudge it outward
        eps = scale * 1e-6 * k * math.sqrt(2.0)
        box0 = (re0 - eps, re1 + eps * 0.7, im0 - eps * 1.3, im1 + eps * 0.9)
    stack = [(box0, 0)]
    while stack:
        box, depth = stack.pop()
        c = winding_number(box, arrays)
        if c is None:
            if depth >= max_depth:
                suspect.append(box)
                continue
            stack.extend((b, depth + 1) for b in _split(box))
            continue
        if c == 0:
            continue
        size = max(box[1] - box[0], box[3] - box[2])
        if (c == 1 and size < resolve_size) or size < min_size:
            z = _refine(box, c, table, tol)
            if z is None:
                if depth >= max_depth:
                    suspect.append(box)
                else:
                    stack.extend((b, depth + 1) for b in _split(box))
                continue
            zeros.append(z)
            continue
        if depth >= max_depth:
            suspect.append(box)
            continue
        stack.extend((b, depth + 1) for b in _split(box))
    zeros.sort(key=lambda z: (round(z.s.imag, 10), z.s.real))
    locs = np.array([z.s for z in zeros], dtype=complex)
    for k, z in enumerate(zeros):
        z.n_max = n_max
        w = _stability_target(z, stability_table)
        if w is None:
            continue
        # one-to-one matching: another zero closer to w claims it
        d = np.abs(locs - w)
        d[k] = np.inf
        if d.size and d.min() < abs(w - z.s):
            continue
        z.stability = float(abs(w - z.s))
    return ZeroSearch(zeros, sorted(suspect))


def _split(box):
    re0, re1, im0, im1 = box
    if re1 - re0 >= im1 - im0:
        m = re0 + _SPLIT * (re1 - re0)
        return [(re0, m, im0, im1), (m, re1, im0, im1)]
    m = im0 + _SPLIT * (im1 - im0)
    return [(re0, re1, im0, m), (re0, re1, m, im1)]


def _refine(box, mult, table, tol):
    re0, re1, im0, im1 = box
    centre = complex(0.5 * (re0 + re1), 0.5 * (im0 + im1))
    s, its = newton_zero(centre, table, mult, tol=tol)
    pad = 0.5 * max(re1 - re0, im1 - im0)
    if not (re0 - pad <= s.real <= re1 + pad and im0 - pad <= s.imag <= im1 + pad):
        return None
    res = abs(euler_product(s, table))
    return ZetaZero(s, float(res), int(mult), 0, float("nan"), its)


def _stability_target(z, short, radius=1e-3):
    """Zero of the shorter table reached by Newton from ``z`` (None when
    there is no counterpart within ``radius``)."""
    if short is None or len(short) == 0:
        return None
    s, _ = newton_zero(z.s, short, z.multiplicity)
    if not np.isfinite(s) or abs(euler_product(s, short)) > 1e-8 or abs(s - z.s) > radius:
        return None
    return s


# abscissa from orbit sums ----------------------------------------------------

def orbit_sum(table, n, tau):
    """``S_n(tau) = sum_{|gamma| divides n} |gamma| exp((n/|gamma|)(-tau T + delta))``."""
    terms = [o.m * math.exp((n // o.m) * (-tau * o.T + o.delta))
             for o in table if n % o.m == 0]
    return math.fsum(terms)


def growth_rate(table, tau, n=None):
    """Per-step growth ``(S_n / S_{n-2})^(1/2)`` of the orbit sums."""
    n = max(o.m for o in table) if n is None else n
    if n % 2 and all(o.m % 2 == 0 for o in table):
        n -= 1
    return math.sqrt(orbit_sum(table, n, tau) / orbit_sum(table, n - 2, tau))


def zeta_abscissa(table, n=None, bracket=(-5.0, 5.0), xtol=1e-14):
    """Real ``tau`` at which the orbit-sum growth rate crosses 1."""
    f = lambda tau: math.log(growth_rate(table, tau, n))  # noqa: E731
    return brentq(f, *bracket, xtol=xtol, rtol=4 * np.finfo(float).eps)


__all__ = [
    "ZetaZero", "ZeroSearch", "zeta_log", "euler_product", "euler_derivative",
    "log_derivative", "find_zeros", "factor_lattice", "pseudo_pole_lattice",
    "winding_number", "newton_zero", "orbit_sum", "growth_rate", "zeta_abscissa",
]
