"""Primitive periodic rays: location, period, expanding eigenvalue and
zeta weights."""
from dataclasses import dataclass, field
import math

import numpy as np

from .billiard import Periodic, SolverError, reflect, segment_for_word
from .parallel import pmap
from .symbolic import CyclicWord, enumerate_primitive_cycles


class MonodromyMismatch(ArithmeticError):
    """The two eigenvalue routes disagree beyond the hard threshold."""


@dataclass
class PeriodicOrbit:
    word: CyclicWord
    points: np.ndarray
    T: float
    m: int
    r: int
    lam: float
    delta: float
    residual: float
    lam_fd: float = float("nan")
    flights: np.ndarray = field(default=None, repr=False)
    curvatures: np.ndarray = field(default=None, repr=False)

    @property
    def sign(self):
        return -1 if self.r else 1

    @property
    def label(self):
        return self.word.label()


def curvature_cycle(flights, radii, cosines, tol=1e-14, maxiter=10000):
    """Periodic outgoing curvatures of the front map around a cycle.

    ``flights[i]`` is the flight from reflection ``i`` to ``i+1``;
    ``radii``/``cosines`` describe reflection ``i``.
    """
    m = len(flights)
    k = np.zeros(m)
    kap = 0.0
    for _ in range(maxiter):
        old = k.copy()
        for i in range(m):
            j = (i + 1) % m
            kap = kap / (1.0 + flights[i] * kap)
            kap = kap + 2.0 / (radii[j] * cosines[j])
            k[j] = kap
        if np.max(np.abs(k - old)) <= tol * max(1.0, np.max(np.abs(k))):
            break
    return k


def lambda_curvature(flights, kappa):
    return float(np.prod(1.0 + np.asarray(flights) * np.asarray(kappa)))


def _cycle_geometry(scene, word, points):
    m = len(word)
    nxt = np.roll(points, -1, axis=0)
    flights = np.hypot(*(nxt - points).T)
    radii = scene.radii[np.asarray(word) - 1]
    cos = np.empty(m)
    for i in range(m):
        p = points[i - 1]
        u = (points[i] - p) / np.hypot(*(points[i] - p))
        nu = (points[i] - scene.centers[word[i] - 1]) / radii[i]
        cos[i] = -float(u @ nu)
    return flights, radii, cos


def _hit_disk(o, d, c, r):
    oc = o - c
    b = float(oc @ d)
    disc = b * b - (float(oc @ oc) - r * r)
    if disc <= 0:
        raise ArithmeticError("ray misses the target disk")
    return o + (-b - math.sqrt(disc)) * d


def bounce_map(scene, a, b, t, p):
    """One bounce from obstacle ``a`` to ``b`` in (angle, tangential
    direction component) coordinates."""
    ca = scene.centers[a - 1]
    ra = scene.radii[a - 1]
    n = np.array([math.cos(t), math.sin(t)])
    tau = np.array([-n[1], n[0]])
    v = p * tau + math.sqrt(max(0.0, 1.0 - p * p)) * n
    cb = scene.centers[b - 1]
    rb = scene.radii[b - 1]
    x = _hit_disk(ca + ra * n, v, cb, rb)
    nu = (x - cb) / rb
    v = reflect(v, nu)
    return math.atan2(nu[1], nu[0]), float(v @ np.array([-nu[1], nu[0]]))


def _coords(scene, k, x, nxt):
    nu = (x - scene.centers[k - 1]) / scene.radii[k - 1]
    v = (nxt - x) / np.hypot(*(nxt - x))
    return math.atan2(nu[1], nu[0]), float(v @ np.array([-nu[1], nu[0]]))


def lambda_fd(scene, word, points, h=1e-7):
    """Dominant eigenvalue modulus of the period map.

    The Jacobian of every bounce is taken by central differences with
    step ``h`` and the period Jacobian is their product.
    """
    m = len(word)
    J = np.eye(2)
    for i in range(m):
        a, b = word[i], word[(i + 1) % m]
        t0, p0 = _coords(scene, a, points[i], points[(i + 1) % m])
        Ji = np.empty((2, 2))
        for col, (dt, dp) in enumerate(((h, 0.0), (0.0, h))):
            fa = bounce_map(scene, a, b, t0 + dt, p0 + dp)
            fb = bounce_map(scene, a, b, t0 - dt, p0 - dp)
            Ji[0, col] = math.remainder(fa[0] - fb[0], 2 * math.pi) / (2 * h)
            Ji[1, col] = (fa[1] - fb[1]) / (2 * h)
        J = Ji @ J
    return float(np.max(np.abs(np.linalg.eigvals(J))))


def find_orbit(scene, word, tol=1e-12, check_fd=True, agree=1e-6, hard=1e-4):
    """Locate the periodic ray for a cyclic word and compute its weights."""
    cw = CyclicWord(word)
    seg = segment_for_word(scene, cw, Periodic(), tol=tol)
    pts = seg.points
    flights, radii, cos = _cycle_geometry(scene, cw, pts)
    kap = curvature_cycle(flights, radii, cos)
    lam = lambda_curvature(flights, kap)
    lam_fd = float("nan")
    if check_fd:
        lam_fd = lambda_fd(scene, cw, pts)
        rel = abs(lam_fd - lam) / lam
        if rel > hard:
            raise MonodromyMismatch(
                f"eigenvalue routes disagree for {cw.label()}: {lam} vs {lam_fd}")
    m = len(cw)
    return PeriodicOrbit(cw, pts, float(math.fsum(flights)), m, m % 2, lam,
                         -0.5 * math.log(lam), seg.residual, lam_fd, flights, kap)


def monodromy_eig(orbit, scene):
    """Both eigenvalue routes and their relative disagreement."""
    flights, radii, cos = _cycle_geometry(scene, orbit.word, orbit.points)
    lam = lambda_curvature(flights, curvature_cycle(flights, radii, cos))
    fd = lambda_fd(scene, orbit.word, orbit.points)
    rel = abs(fd - lam) / lam
    if rel > 1e-4:
        raise MonodromyMismatch(f"eigenvalue routes disagree: {lam} vs {fd}")
    return {"lambda": lam, "lambda_fd": fd, "rel_diff": rel}


@dataclass
class OrbitTable:
    orbits: list
    failures: list
    n_max: int

    def __iter__(self):
        return iter(self.orbits)

    def __len__(self):
        return len(self.orbits)

    def truncated(self, n):
        """Sub-table of orbits with word length at most ``n``."""
        return OrbitTable([o for o in self.orbits if o.m <= n], [], n)

    def arrays(self):
        """(T, delta, sign) arrays for vectorised evaluation."""
        T = np.array([o.T for o in self.orbits])
        d = np.array([o.delta for o in self.orbits])
        s = np.array([o.sign for o in self.orbits], dtype=float)
        return T, d, s


def _solve_one(args):
    scene, word, tol, check_fd = args
    try:
        return find_orbit(scene, word, tol=tol, check_fd=check_fd)
    except (SolverError, ArithmeticError) as exc:
        return exc


def orbit_table(scene, n_max, tol=1e-12, check_fd=True, jobs=1):
    """All primitive periodic orbits with word length up to ``n_max``."""
    cycles = enumerate_primitive_cycles(scene.kappa0, n_max)
    words = [w for n in sorted(cycles) for w in cycles[n]]
    results = pmap(_solve_one, [(scene, w, tol, check_fd) for w in words], jobs=jobs)
    orbits, failures = [], []
    for w, res in zip(words, results):
        if isinstance(res, Exception):
            failures.append((w, str(res)))
        else:
            orbits.append(res)
    orbits.sort(key=lambda o: (o.m, tuple(o.word)))
    return OrbitTable(orbits, failures, n_max)


__all__ = [
    "PeriodicOrbit", "OrbitTable", "find_orbit", "monodromy_eig", "orbit_table",
    "curvature_cycle", "lambda_fd", "MonodromyMismatch",
]
