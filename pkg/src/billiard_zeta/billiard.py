"""Ray dynamics outside the obstacles and realization of symbolic words as
billiard segments.

A word is realized by making the total optical length stationary in the
boundary angles of its reflection points.  Three closure rules are
supported:

``Periodic``
    the broken line closes up (periodic orbits);
``FixedEnds``
    the first/last points are pinned, either at given boundary angles on
    the first/last obstacles or at external anchor points;
``FrontLaunched``
    the path starts from an incoming plane wave ``<x, e>`` on the first
    obstacle and optionally ends at an external point.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from .geometry import GeometryError
from .symbolic import Word

GRAZE_TOL = 1e-12


class SolverError(RuntimeError):
    """Non-convergence of the segment solver; carries the best iterate."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class _Escape:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Escape"

    def __bool__(self):
        return False


Escape = _Escape()


@dataclass(frozen=True)
class PhasePoint:
    obstacle: int
    point: np.ndarray
    direction: np.ndarray

    def validate(self, scene, tol=1e-10):
        d = scene.disk(self.obstacle)
        nu = (np.asarray(self.point) - d.center) / d.radius
        if abs(np.hypot(*nu) - 1.0) > tol:
            raise GeometryError("phase point is not on its obstacle")
        if float(nu @ self.direction) <= 0.0:
            raise GeometryError("direction is not strictly outgoing")
        return self


@dataclass
class TraceResult:
    itinerary: Word
    points: list
    flight_lengths: list
    escaped: bool


def reflect(u, nu):
    u = np.asarray(u, float)
    nu = np.asarray(nu, float)
    return u - 2.0 * float(u @ nu) * nu


def first_intersection(origin, direction, scene, exclude=None):
    """Nearest forward hit ``(index, point, length)`` or ``Escape``.

    Grazing hits (entry cosine below 1e-12) are treated as misses.
    """
    o = np.asarray(origin, float)
    d = np.asarray(direction, float)
    d = d / math.hypot(d[0], d[1])
    best = None
    for k, disk in enumerate(scene.obstacles, start=1):
        oc = o - disk.center
        cc = float(oc @ oc) - disk.radius ** 2
        if cc < -1e-9 * disk.radius ** 2:
            raise GeometryError(f"origin lies inside obstacle {k}")
        if k == exclude:
            continue
        b = float(oc @ d)
        disc = b * b - cc
        if disc <= 0.0:
            continue
        s = -b - math.sqrt(disc)
        if s <= 1e-12:
            continue
        p = o + s * d
        nu = (p - disk.center) / disk.radius
        if -float(d @ nu) < GRAZE_TOL:
            continue
        if best is None or s < best[2]:
            best = (k, p, s)
    return best if best is not None else Escape


def billiard_map(p, scene):
    hit = first_intersection(p.point, p.direction, scene, exclude=p.obstacle)
    if hit is Escape:
        return Escape
    k, q, _ = hit
    disk = scene.disk(k)
    nu = _unit(q - np.asarray(disk.center))
    return PhasePoint(k, q, reflect(p.direction, nu))


def trace(p, scene, n_max):
    itinerary = [p.obstacle]
    points = [np.asarray(p.point, float)]
    lengths = []
    escaped = False
    cur = p
    for _ in range(n_max):
        hit = first_intersection(cur.point, cur.direction, scene, exclude=cur.obstacle)
        if hit is Escape:
            escaped = True
            break
        k, q, s = hit
        disk = scene.disk(k)
        nu = _unit(q - np.asarray(disk.center))
        cur = PhasePoint(k, q, reflect(cur.direction, nu))
        itinerary.append(k)
        points.append(q)
        lengths.append(s)
    if escaped and not lengths:
        itinerary = itinerary[:1]
    return TraceResult(Word(itinerary), points, lengths, escaped)


# closures -----------------------------------------------------------------

@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class FixedEnds:
    """Pinned ends.

    ``start_angle``/``end_angle`` pin the first/last reflection at the
    given boundary angle of its obstacle.  ``start_point``/``end_point``
    add external anchors before/after the word instead.
    """
    start_angle: float = None
    end_angle: float = None
    start_point: tuple = None
    end_point: tuple = None


@dataclass(frozen=True)
class FrontLaunched:
    """Launch from the plane-wave phase ``<x, e>`` on the first obstacle."""
    direction: tuple
    end_point: tuple = None


@dataclass
class SegmentResult:
    word: Word
    points: np.ndarray  # reflection points, one per symbol
    angles: np.ndarray
    value: float  # stationary value of the functional
    residual: float
    iterations: int
    converged: bool
    start: np.ndarray = None  # external start anchor if any
    end: np.ndarray = None  # external end anchor if any
    closure: object = field(default=None, repr=False)

    @property
    def flights(self):
        """Flight lengths between consecutive reflection points."""
        return np.hypot(*np.diff(self.points, axis=0).T)

    def path(self):
        """Reflection points with external anchors attached."""
        pts = [self.points]
        if self.start is not None:
            pts.insert(0, self.start[None, :])
        if self.end is not None:
            pts.append(self.end[None, :])
        return np.vstack(pts)


def _unit(v):
    n = math.hypot(v[0], v[1])
    return v / n if n > 0 else v


def seed_angles(centers, prev_dirs, next_dirs):
    """Bisector angles toward the neighbouring targets."""
    out = np.empty(len(centers))
    for i in range(len(centers)):
        b = prev_dirs[i] + next_dirs[i]
        if math.hypot(*b) < 1e-8:
            b = prev_dirs[i]
        out[i] = math.atan2(b[1], b[0])
    return out


def _seed(centers, cyclic, start_pt, start_dir, end_pt):
    m = len(centers)
    prev_dirs, next_dirs = [], []
    for i in range(m):
        c = centers[i]
        if i > 0:
            pv = _unit(centers[i - 1] - c)
        elif cyclic:
            pv = _unit(centers[-1] - c)
        elif start_pt is not None:
            pv = _unit(start_pt - c)
        elif start_dir is not None:
            pv = -_unit(np.asarray(start_dir, float))
        else:
            pv = None
        if i < m - 1:
            nx = _unit(centers[i + 1] - c)
        elif cyclic:
            nx = _unit(centers[0] - c)
        elif end_pt is not None:
            nx = _unit(end_pt - c)
        else:
            nx = None
        if pv is None:
            pv = nx
        if nx is None:
            nx = pv
        prev_dirs.append(pv)
        next_dirs.append(nx)
    return seed_angles(centers, prev_dirs, next_dirs)


def segment_for_word(scene, word, closure=None, tol=1e-12, maxiter=200,
                     seed=None, strict=True):
    """Realize ``word`` as a billiard segment under ``closure``.

    Returns a :class:`SegmentResult`; raises :class:`SolverError` when
    Newton does not reach ``tol`` (unless ``strict`` is false).
    """
    closure = Periodic() if closure is None else closure
    w = Word(word)
    m = len(w)
    if m == 0:
        raise ValueError("empty word")
    idx = np.asarray(w, dtype=int) - 1
    if idx.max() >= scene.kappa0:
        raise ValueError(f"word {tuple(w)} uses symbols beyond kappa0={scene.kappa0}")
    centers = scene.centers[idx]
    radii = scene.radii[idx]
    cyclic = isinstance(closure, Periodic)
    start = end = None
    sk, sa, ek, eb = kernels.NONE, (0.0, 0.0), kernels.NONE, (0.0, 0.0)
    lo, hi = 0, m
    pinned_t = {}
    if cyclic:
        if m < 2 or w[0] == w[-1]:
            raise ValueError("periodic closure needs a cyclically admissible word")
    elif isinstance(closure, FixedEnds):
        if closure.start_angle is not None:
            pinned_t[0] = float(closure.start_angle)
            lo = 1
        elif closure.start_point is not None:
            start = np.asarray(closure.start_point, float)
        if closure.end_angle is not None:
            pinned_t[m - 1] = float(closure.end_angle)
            hi = m - 1
        elif closure.end_point is not None:
            end = np.asarray(closure.end_point, float)
    elif isinstance(closure, FrontLaunched):
        e = np.asarray(closure.direction, float)
        sk, sa = kernels.PHASE, (e[0], e[1])
        if closure.end_point is not None:
            end = np.asarray(closure.end_point, float)
    else:
        raise TypeError(f"unknown closure {closure!r}")

    pts_pinned = {i: centers[i] + radii[i] * np.array([math.cos(a), math.sin(a)])
                  for i, a in pinned_t.items()}
    if 0 in pts_pinned:
        sk, sa = kernels.POINT, tuple(pts_pinned[0])
    elif start is not None:
        sk, sa = kernels.POINT, tuple(start)
    if m - 1 in pts_pinned and hi == m - 1:
        ek, eb = kernels.POINT, tuple(pts_pinned[m - 1])
    elif end is not None:
        ek, eb = kernels.POINT, tuple(end)

    t = np.zeros(m)
    for i, a in pinned_t.items():
        t[i] = a
    if hi > lo:
        if seed is not None:
            t0 = np.asarray(seed, float)[lo:hi]
        else:
            sp = np.asarray(sa) if sk == kernels.POINT else None
            sd = np.asarray(sa) if sk == kernels.PHASE else None
            ep = np.asarray(eb) if ek == kernels.POINT else None
            t0 = _seed(centers[lo:hi], cyclic, sp, sd, ep)
        tf, val, res, its, ok = kernels.solve_chain(
            centers[lo:hi, 0], centers[lo:hi, 1], radii[lo:hi], t0, cyclic,
            sk, sa[0], sa[1], ek, eb[0], eb[1], tol, maxiter)
        t[lo:hi] = tf
    else:
        # everything pinned: the value is the broken-line length
        val, res, its, ok = None, 0.0, 0, True
    pts = centers + radii[:, None] * np.column_stack([np.cos(t), np.sin(t)])
    if val is None:
        val = float(np.hypot(*np.diff(pts, axis=0).T).sum())
    result = SegmentResult(w, pts, t, float(val), float(res), int(its), bool(ok),
                           start, end, closure)
    if not ok and strict:
        raise SolverError(
            f"segment solver did not converge for word {w.label()} "
            f"(residual {res:.3e} after {its} iterations)", result)
    return result


def incidence_cosines(scene, word, points, start=None, end=None, cyclic=False):
    """Cosine of the reflection angle at each point (nan where undefined)."""
    w = list(word)
    m = len(w)
    out = np.full(m, np.nan)
    for i in range(m):
        if i > 0:
            prev = points[i - 1]
        elif cyclic:
            prev = points[-1]
        elif start is not None:
            prev = start
        else:
            continue
        d = scene.disk(w[i])
        u = _unit(points[i] - prev)
        nu = (points[i] - d.center) / d.radius
        out[i] = -float(u @ nu)
    return out


def check_segment(scene, result, cyclic=None):
    """Verify a realized segment is a genuine unobstructed billiard path.

    Every flight must leave and enter its obstacles transversally and miss
    every other obstacle.
    """
    cyclic = isinstance(result.closure, Periodic) if cyclic is None else cyclic
    path = list(result.points)
    syms = list(result.word)
    if cyclic:
        path = path + [path[0]]
        syms = syms + [syms[0]]
    for a in range(len(path) - 1):
        p, q = path[a], path[a + 1]
        dvec = _unit(q - p)
        hit = first_intersection(p, dvec, scene, exclude=syms[a])
        if hit is Escape or hit[0] != syms[a + 1]:
            return False
        if abs(hit[2] - math.hypot(*(q - p))) > 1e-8:
            return False
    return True


def reverse_segment(result):
    """Same geometric segment traversed backwards."""
    return result.word.reversed(), result.points[::-1].copy()


def shadowing_pairs(scene, n_pairs=100, length=30, seed=0, spread=0.4, tol=1e-12):
    """Deviations between periodic and pinned-end realizations of the same
    random word; returns an ``(n_pairs, length)`` array of ``|x_i - y_i|``."""
    from .realize import end_angles
    from .symbolic import random_word

    rng = np.random.default_rng(seed)
    out = np.empty((n_pairs, length))
    for k in range(n_pairs):
        w = random_word(scene.kappa0, length, rng)
        while w[0] == w[-1]:
            w = random_word(scene.kappa0, length, rng)
        x = segment_for_word(scene, w, Periodic(), tol=tol)
        t0, t1 = end_angles(scene, w)
        t0 += rng.uniform(-spread, spread)
        t1 += rng.uniform(-spread, spread)
        y = segment_for_word(scene, w, FixedEnds(start_angle=t0, end_angle=t1), tol=tol)
        out[k] = np.hypot(*(x.points - y.points).T)
    return out


def fit_shadowing(dev, floor=1e-10):
    """Global ``(C, alpha)`` with ``dev_i <= C (alpha^i + alpha^(m-1-i)) + floor``.

    ``alpha`` is fitted to the two-sided envelope above ``floor``; ``C`` is
    the smallest constant making the bound hold for every row.
    """
    dev = np.atleast_2d(dev)
    m = dev.shape[1]
    prof = dev.max(axis=0)
    half = m // 2
    env = np.maximum(prof[:half], prof[::-1][:half])
    keep = env > floor
    if keep.sum() < 2:
        return 0.0, 0.0
    slope = np.polyfit(np.arange(half)[keep], np.log(env[keep]), 1)[0]
    alpha = float(np.exp(slope))
    i = np.arange(m)
    basis = alpha ** i + alpha ** (m - 1 - i)
    C = float(np.max(np.maximum(dev - floor, 0.0) / basis))
    return C, alpha


__all__ = [
    "shadowing_pairs", "fit_shadowing",
    "reflect", "first_intersection", "billiard_map", "trace", "PhasePoint",
    "TraceResult", "Escape", "Periodic", "FixedEnds", "FrontLaunched",
    "SegmentResult", "segment_for_word", "SolverError", "check_segment",
    "incidence_cosines", "reverse_segment",
]
