"""Disk obstacles, boundary data and the no-eclipse condition."""
from dataclasses import dataclass
import itertools
import math

import numpy as np


class GeometryError(ValueError):
    """Invalid scene or off-boundary query."""


@dataclass(frozen=True)
class Disk:
    center: tuple
    radius: float

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        if len(c) != 2:
            raise GeometryError("disk center must be a 2D point")
        object.__setattr__(self, "center", c)
        r = float(self.radius)
        if not (r > 0.0 and math.isfinite(r)):
            raise GeometryError(f"disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "radius", r)


@dataclass(frozen=True)
class EclipseReport:
    """Outcome of the no-eclipse test with per-triple clearances."""
    ok: bool
    triples: tuple  # (i, j, k, clearance) with 1-based indices

    def __bool__(self):
        return self.ok

    @property
    def violations(self):
        return tuple(t for t in self.triples if t[3] <= 0.0)


class Scene:
    """Ordered collection of disjoint disks (indices 1..kappa0).

    Parameters
    ----------
    obstacles : sequence of Disk
    check_h : bool
        When true (default) the no-eclipse condition is enforced.
    """

    def __init__(self, obstacles, check_h=True):
        obs = tuple(o if isinstance(o, Disk) else Disk(*o) for o in obstacles)
        if len(obs) < 2:
            raise GeometryError("a scene needs at least two obstacles")
        self.obstacles = obs
        self.centers = np.array([o.center for o in obs], dtype=float)
        self.radii = np.array([o.radius for o in obs], dtype=float)
        self.gap = min_gap(self)
        if self.gap <= 0.0:
            raise GeometryError("obstacles overlap or touch")
        self.eclipse = check_no_eclipse(self)
        if check_h and not self.eclipse.ok:
            v = self.eclipse.violations[0]
            raise GeometryError(
                f"no-eclipse condition fails: disk {v[2]} meets the hull of {v[0]},{v[1]}")

    @property
    def kappa0(self):
        return len(self.obstacles)

    def __len__(self):
        return len(self.obstacles)

    def __repr__(self):
        return f"Scene(kappa0={self.kappa0}, gap={self.gap:.6g})"

    def disk(self, i):
        """Obstacle with 1-based index ``i``."""
        return self.obstacles[i - 1]

    def to_dict(self):
        return {"obstacles": [{"center": list(o.center), "radius": o.radius}
                              for o in self.obstacles]}

    @classmethod
    def from_dict(cls, data, check_h=True):
        try:
            obs = [Disk(tuple(o["center"]), o["radius"]) for o in data["obstacles"]]
        except (KeyError, TypeError) as exc:
            raise GeometryError(f"malformed scene: {exc}") from None
        return cls(obs, check_h=check_h)


def boundary_point(disk, t):
    return np.array([disk.center[0] + disk.radius * math.cos(t),
                     disk.center[1] + disk.radius * math.sin(t)])


def outward_normal(disk, p, tol=1e-10):
    d = np.asarray(p, float) - disk.center
    dist = math.hypot(d[0], d[1])
    if abs(dist - disk.radius) > tol * disk.radius:
        raise GeometryError("point is not on the disk boundary")
    return d / dist


def boundary_curvature(disk):
    return 1.0 / disk.radius


def angle_of(disk, p):
    """Boundary angle of the point ``p`` (no on-boundary check)."""
    return math.atan2(p[1] - disk.center[1], p[0] - disk.center[0])


def min_gap(scene):
    """Smallest boundary-to-boundary distance between obstacles."""
    best = math.inf
    for a, b in itertools.combinations(scene.obstacles, 2):
        d = math.dist(a.center, b.center) - a.radius - b.radius
        best = min(best, d)
    return best


def point_segment_distance(p, a, b):
    p, a, b = (np.asarray(v, float) for v in (p, a, b))
    ab = b - a
    den = float(ab @ ab)
    s = 0.0 if den == 0.0 else min(1.0, max(0.0, float((p - a) @ ab) / den))
    return float(np.hypot(*(p - a - s * ab)))


def check_no_eclipse(scene):
    """Test that no obstacle meets the convex hull of any other two.

    Exact for equal radii (the hull is a stadium); for unequal radii the
    sufficient test ``dist > r_k + max(r_i, r_j)`` is used.
    """
    obs = scene.obstacles
    n = len(obs)
    for a, b in itertools.combinations(obs, 2):
        if math.dist(a.center, b.center) <= a.radius + b.radius:
            raise GeometryError("obstacles overlap or touch")
    triples = []
    for i, j in itertools.combinations(range(n), 2):
        for k in range(n):
            if k in (i, j):
                continue
            d = point_segment_distance(obs[k].center, obs[i].center, obs[j].center)
            clearance = d - obs[k].radius - max(obs[i].radius, obs[j].radius)
            triples.append((i + 1, j + 1, k + 1, clearance))
    return EclipseReport(all(t[3] > 0.0 for t in triples), tuple(triples))


def two_disks(separation=6.0, radius=1.0):
    """Two equal disks on the x-axis, the first centred at the origin."""
    return Scene([Disk((0.0, 0.0), radius), Disk((separation, 0.0), radius)])


def three_disks(side=6.0, radius=1.0):
    """Equilateral three-disk scene with the first two disks on the x-axis."""
    h = side * math.sqrt(3.0) / 2.0
    return Scene([Disk((0.0, 0.0), radius), Disk((side, 0.0), radius),
                  Disk((side / 2.0, h), radius)])
