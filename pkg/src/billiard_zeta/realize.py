"""Realization of finite two-sided windows as billiard segments with
unstable-front data.

A window is a finite admissible string.  It is realized with its end
reflections pinned at bisector angles; by exponential shadowing the
interior points are insensitive to that choice.  A planar front is
launched at the first point and carried along, giving unstable
curvatures and log step weights at every interior transition.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .billiard import FixedEnds, segment_for_word
from .symbolic import canonical_tail, future_tail


@dataclass
class Window:
    symbols: tuple
    points: np.ndarray
    flights: np.ndarray  # flights[i] = |P_i P_{i+1}|
    kappa_out: np.ndarray  # unstable outgoing curvature at P_i
    cosines: np.ndarray
    logsteps: np.ndarray  # -rho*log(1 + flights[i]*kappa_out[i])
    residual: float
    rho: float

    def f(self, i):
        return float(self.flights[i])

    def g(self, i):
        return float(self.logsteps[i])


def end_angles(scene, symbols):
    """Pinned angles: first point faces the second obstacle, last faces
    the one before it."""
    c = scene.centers
    a, b = symbols[0] - 1, symbols[1] - 1
    y, z = symbols[-1] - 1, symbols[-2] - 1
    t0 = math.atan2(c[b, 1] - c[a, 1], c[b, 0] - c[a, 0])
    t1 = math.atan2(c[z, 1] - c[y, 1], c[z, 0] - c[y, 0])
    return t0, t1


def realize_window(scene, symbols, rho=0.5, tol=1e-12, pins=None):
    """Realize ``symbols`` with pinned ends and propagate the unstable front."""
    symbols = tuple(int(s) for s in symbols)
    t0, t1 = end_angles(scene, symbols) if pins is None else pins
    seg = segment_for_word(scene, symbols, FixedEnds(start_angle=t0, end_angle=t1), tol=tol)
    idx = np.asarray(symbols) - 1
    pts = seg.points
    kin, kout, cos, logs = kernels.front_chain(
        pts[:, 0], pts[:, 1], scene.centers[idx, 0], scene.centers[idx, 1],
        scene.radii[idx], 0.0, rho)
    return Window(symbols, pts, seg.flights, kout, cos, logs, seg.residual, rho)


class Realizer:
    """Cached window realization with canonical padding.

    Parameters
    ----------
    scene : Scene
    pad : int
        Length of the canonical past/future pads added around a word.
    rho : float
        Normalisation exponent of the step weights.
    """

    def __init__(self, scene, pad=8, rho=0.5, tol=1e-12):
        self.scene = scene
        self.pad = int(pad)
        self.rho = float(rho)
        self.tol = tol
        self._cache = {}

    def window(self, symbols):
        key = tuple(symbols)
        w = self._cache.get(key)
        if w is None:
            w = realize_window(self.scene, key, self.rho, self.tol)
            self._cache[key] = w
        return w

    def padded(self, word, past=None, future=None):
        """Window for ``word`` with canonical pads; returns (Window, origin)."""
        word = tuple(word)
        past = canonical_tail(word[0], self.pad) if past is None else tuple(past)
        future = future_tail(word[-1], self.pad) if future is None else tuple(future)
        return self.window(past + word + future), len(past)

    def fg(self, word, i):
        """(f, g) at transition ``i`` of the padded ``word``."""
        w, o = self.padded(word)
        return w.f(o + i), w.g(o + i)

    def clear(self):
        self._cache.clear()
