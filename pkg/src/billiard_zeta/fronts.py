"""Planar wavefront calculus: curvature transport, mirror reflection,
step ratios, the unstable front and the boundary eikonal."""
from dataclasses import dataclass
import math

import numpy as np

from .billiard import reflect
from .geometry import GeometryError
from .realize import realize_window

HALF = 0.5


def rho_value(name):
    """Normalisation exponent from a selector ('half' or 'paper')."""
    if name in ("half", None):
        return 0.5
    if name == "paper":
        return 1.0  # 1/(N-1) with N = 2
    return float(name)


@dataclass(frozen=True)
class FrontState:
    point: np.ndarray
    direction: np.ndarray
    curvature: float

    def __post_init__(self):
        if self.curvature < 0:
            raise ValueError("front curvature must be non-negative")


@dataclass
class LambdaRecord:
    steps: np.ndarray

    @property
    def cumulative(self):
        return np.cumprod(self.steps)

    @property
    def total(self):
        return float(np.prod(self.steps))


def propagate(f, t):
    if t < 0:
        raise ValueError("propagation length must be non-negative")
    k = f.curvature
    return FrontState(np.asarray(f.point, float) + t * np.asarray(f.direction, float),
                      f.direction, k / (1.0 + t * k))


def reflect_front(f, k_b, nu, tol=1e-10):
    """Mirror law at a boundary point with curvature ``k_b`` and normal ``nu``."""
    v = reflect(f.direction, nu)
    c = float(np.dot(v, nu))
    if c <= tol:
        raise GeometryError("tangential incidence")
    return FrontState(f.point, v, f.curvature + 2.0 * k_b / c)


def mirror(kappa, k_b, cos_theta):
    """Scalar mirror equation."""
    if cos_theta <= 1e-10:
        raise GeometryError("tangential incidence")
    return kappa + 2.0 * k_b / cos_theta


def lambda_step(kappa_out_prev, d, rho=HALF):
    return (1.0 + d * kappa_out_prev) ** (-rho)


def two_disk_fixed_point(d=4.0, r=1.0):
    """Curvature fixed point of transport over ``d`` then head-on mirror."""
    # kappa = kappa/(1 + d kappa) + 2/r  ->  d k^2 - (2d/r) k - 2/r = 0
    a, b, c = d, -2.0 * d / r, -2.0 / r
    return (-b + math.sqrt(b * b - 4 * a * c)) / (2 * a)


def unstable_front(scene, past, m=None, target=None, rho=HALF, window=None):
    """Unstable front at reflection ``target`` of the realized ``past``.

    A planar front is started at reflection ``target - m`` (``m``
    defaults to all available history) and transported to ``target``.
    ``window`` can supply an already realized window.  Returns the
    outgoing :class:`FrontState`.
    """
    w = window if window is not None else realize_window(scene, past, rho)
    n = len(w.symbols)
    target = n - 1 if target is None else target
    m = target if m is None else m
    if m > target:
        raise ValueError("not enough history for the requested m")
    k = 0.0
    pts = w.points
    for i in range(target - m + 1, target + 1):
        d = math.hypot(*(pts[i] - pts[i - 1]))
        k = k / (1.0 + d * k)
        disk = scene.disk(w.symbols[i])
        k = mirror(k, 1.0 / disk.radius, w.cosines[i])
    if target + 1 < n:
        u = pts[target + 1] - pts[target]
    else:
        nu = (pts[target] - scene.disk(w.symbols[target]).center)
        u = reflect(pts[target] - pts[target - 1], nu / np.linalg.norm(nu))
    return FrontState(pts[target].copy(), u / np.linalg.norm(u), k)


def sample_lambda_steps(scene, n_steps=10000, seed=0, rho=HALF, length=21):
    """Step ratios along random realized words, skipping the planar launch."""
    from .symbolic import random_word

    rng = np.random.default_rng(seed)
    out = []
    total = 0
    while total < n_steps:
        w = realize_window(scene, random_word(scene.kappa0, length, rng), rho)
        steps = np.exp(w.logsteps[1:])
        out.append(steps)
        total += steps.size
    return LambdaRecord(np.concatenate(out)[:n_steps])


@dataclass(frozen=True)
class EikonalSolution:
    phi_y: np.ndarray
    phi_xn: float
    residual: float  # | |grad phi| - 1 |
    normal_component: float  # <grad phi, nu>


def boundary_eikonal(h_y, chi_y, mu=None):
    """Solve the eikonal equation on a graph boundary ``x_N = h(y)``.

    Given the tangential data gradient ``chi_y`` and the boundary slope
    ``h_y`` returns the normal derivative and tangential gradient of the
    phase.  With ``mu`` given, the transversality bound
    ``<grad phi, nu> >= sqrt(2 mu - mu^2)`` is asserted.
    """
    h = np.atleast_1d(np.asarray(h_y, float))
    chi = np.atleast_1d(np.asarray(chi_y, float))
    c2 = float(chi @ chi)
    if c2 >= 1.0:
        raise GeometryError("|chi_y| must be < 1")
    if mu is not None and math.sqrt(c2) > 1.0 - mu + 1e-15:
        raise GeometryError("|chi_y| exceeds 1 - mu")
    h2 = float(h @ h)
    hc = float(h @ chi)
    root = math.sqrt(hc * hc + (1.0 - c2) * (1.0 + h2))
    a = (hc + root) / (1.0 + h2)
    phi_y = chi - a * h
    resid = abs(math.sqrt(float(phi_y @ phi_y) + a * a) - 1.0)
    nc = root / math.sqrt(1.0 + h2)
    if resid > 1e-12:
        raise ArithmeticError(f"eikonal residual {resid:.3e}")
    if mu is not None and nc < math.sqrt(2 * mu - mu * mu) * (1 - 1e-14):
        raise ArithmeticError("transversality bound violated")
    if np.ndim(h_y) == 0 and np.ndim(chi_y) == 0:
        phi_y = phi_y[0]
    return EikonalSolution(phi_y, a, resid, nc)


__all__ = [
    "FrontState", "LambdaRecord", "propagate", "reflect_front", "mirror",
    "lambda_step", "two_disk_fixed_point", "unstable_front", "boundary_eikonal",
    "EikonalSolution", "rho_value", "sample_lambda_steps",
]
