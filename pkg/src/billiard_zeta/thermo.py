"""Thermodynamic formalism for the billiard coding: the flight function f,
the unstable step weight g, Sinai correctors, finite-memory pressure, the
abscissa s0 and the equilibrium-state sandwich."""
from dataclasses import dataclass
import math

import numpy as np
from scipy import sparse

from .orbits import _cycle_geometry, curvature_cycle
from .billiard import Periodic, segment_for_word
from .parallel import pmap
from .realize import Realizer
from .symbolic import canonical_tail, enumerate_words


class BracketError(RuntimeError):
    def __init__(self, message, samples):
        super().__init__(message)
        self.samples = samples


@dataclass
class CylinderWeights:
    window: tuple
    center: int  # transition index in the window
    f: float
    g: float
    residual: float


@dataclass
class PressureResult:
    tau: float
    memory: int
    value: float
    dimension: int
    residual: float
    iterations: int


def f_g_of_window(scene, window, center=None, pad=8, rho=0.5, cyclic=False,
                  realizer=None):
    """Flight length and log step weight at transition ``center``.

    Non-cyclic windows get canonical past/future pads; cyclic windows are
    realized as periodic orbits with the periodic unstable curvature.
    """
    window = tuple(int(s) for s in window)
    n = len(window)
    if cyclic:
        c = 0 if center is None else center % n
        seg = segment_for_word(scene, window, Periodic())
        fl, radii, cos = _cycle_geometry(scene, window, seg.points)
        kap = curvature_cycle(fl, radii, cos)
        f = float(fl[c])
        return CylinderWeights(window, c, f, -rho * math.log1p(f * kap[c]), seg.residual)
    c = (n - 1) // 2 if center is None else center
    R = realizer if realizer is not None else Realizer(scene, pad=pad, rho=rho)
    w, o = R.padded(window)
    return CylinderWeights(window, c, w.f(o + c), w.g(o + c), w.residual)


def sinai_chi(realizer, symbols, origin, depth):
    """Truncated correctors ``(chi1, chi2)`` and the one-sided ``f~``, ``g~``.

    ``chi1 = sum_{n<depth} [f(sigma^n xi) - f(sigma^n e(xi))]`` where
    ``e(xi)`` replaces the past of ``xi`` by the canonical tail; ``chi2``
    likewise with ``g``.  Returns ``(chi1, chi2, f_tilde, g_tilde)``.
    """
    symbols = tuple(symbols)
    if depth <= 0:
        return 0.0, 0.0, None, None
    if origin + depth + 1 >= len(symbols):
        raise ValueError("window too short for the requested depth")

    def chi(o):
        w = realizer.window(symbols)
        e = canonical_tail(symbols[o], realizer.pad) + symbols[o:]
        we = realizer.window(e)
        oe = realizer.pad
        c1 = math.fsum(w.f(o + k) - we.f(oe + k) for k in range(depth))
        c2 = math.fsum(w.g(o + k) - we.g(oe + k) for k in range(depth))
        return c1, c2

    c1, c2 = chi(origin)
    d1, d2 = chi(origin + 1)
    w = realizer.window(symbols)
    ft = w.f(origin) - c1 + d1
    gt = w.g(origin) - c2 + d2
    return c1, c2, ft, gt


def period_g_sum(scene, word, rho=0.5, pad=16):
    """Sum of g over one period of the periodic sequence ``word``.

    The sequence is realized as a long non-cyclic window (no periodic
    closure) and g is read off a middle period, so the result is an
    independent estimate of ``delta_gamma``.
    """
    word = tuple(int(k) for k in word)
    m = len(word)
    reps = 2 * (-(-pad // m)) + 1
    w = Realizer(scene, pad=0, rho=rho).window(word * reps)
    start = m * (reps // 2)
    return math.fsum(w.g(start + i) for i in range(m))


def window_function(scene, kind="f", rho=0.5):
    """``F(symbols, origin)`` evaluating f or g at ``origin`` of a realized
    window, for use with :func:`symbolic.var_estimate`."""
    R = Realizer(scene, pad=0, rho=rho)
    if kind not in ("f", "g"):
        raise ValueError("kind must be 'f' or 'g'")

    def F(symbols, origin):
        w = R.window(symbols)
        return w.f(origin) if kind == "f" else w.g(origin)

    return F


class PressureModel:
    """Finite-memory transfer matrix data.

    States are admissible words of length ``memory``; a transition
    ``w -> w'`` is an admissible ``(memory+1)``-window whose f and g are
    sampled at its centre transition.
    """

    def __init__(self, kappa0, memory, weights):
        self.kappa0 = kappa0
        self.memory = memory
        states = enumerate_words(kappa0, memory)
        index = {tuple(s): i for i, s in enumerate(states)}
        rows, cols, windows = [], [], []
        for s in states:
            for k in range(1, kappa0 + 1):
                if k == s[-1]:
                    continue
                win = tuple(s) + (k,)
                rows.append(index[tuple(s)])
                cols.append(index[win[1:]])
                windows.append(win)
        self.states = states
        self.windows = windows
        self.rows = np.array(rows)
        self.cols = np.array(cols)
        F, G = weights(windows)
        self.F = np.asarray(F, float)
        self.G = np.asarray(G, float)
        self.dim = len(states)

    @classmethod
    def from_scene(cls, scene, memory, pad=8, rho=0.5, jobs=1):
        def weights(windows):
            vals = pmap(_fg_task, [(scene, w, pad, rho) for w in windows], jobs=jobs)
            return [v[0] for v in vals], [v[1] for v in vals]

        return cls(scene.kappa0, memory, weights)

    @classmethod
    def constant(cls, kappa0, memory, f=1.0, g=0.0):
        return cls(kappa0, memory, lambda ws: ([f] * len(ws), [g] * len(ws)))

    def matrix(self, tau):
        vals = np.exp(-tau * self.F + self.G)
        return sparse.csr_matrix((vals, (self.rows, self.cols)), shape=(self.dim, self.dim))

    def pressure(self, tau, tol=1e-12, maxiter=100000):
        """Log spectral radius of the transfer matrix at ``tau``.

        Power iteration on the squared matrix (period-2 safe), log halved.
        """
        M = self.matrix(tau)
        M2 = (M @ M).tocsr()
        v = np.ones(self.dim) / math.sqrt(self.dim)
        lam = 0.0
        res = math.inf
        for it in range(1, maxiter + 1):
            w = M2 @ v
            nw = np.linalg.norm(w)
            if nw == 0.0:
                raise ArithmeticError("transfer matrix is nilpotent")
            lam_new = float(v @ w)
            w /= nw
            res = float(np.linalg.norm(M2 @ w - (w @ (M2 @ w)) * w)) / max(abs(lam_new), 1e-300)
            v = w
            lam = lam_new
            if res <= tol:
                break
        lam = float(v @ (M2 @ v))
        return PressureResult(float(tau), self.memory, 0.5 * math.log(lam), self.dim, res, it)

    def value(self, tau):
        return self.pressure(tau).value

    def s0(self, tol=1e-12, bracket=(-2.0, 2.0)):
        return abscissa_from_model(self, tol, bracket)


def _fg_task(args):
    scene, win, pad, rho = args
    c = f_g_of_window(scene, win, pad=pad, rho=rho)
    return c.f, c.g


def pressure(scene_or_model, tau, memory=None, **kw):
    model = scene_or_model if isinstance(scene_or_model, PressureModel) \
        else PressureModel.from_scene(scene_or_model, memory, **kw)
    return model.pressure(tau)


def abscissa_from_model(model, tol=1e-12, bracket=(-2.0, 2.0), max_expand=20):
    lo, hi = bracket
    samples = []
    plo, phi = model.value(lo), model.value(hi)
    samples += [(lo, plo), (hi, phi)]
    k = 0
    while not (plo > 0.0 > phi):
        k += 1
        if k > max_expand:
            raise BracketError("could not bracket the pressure root", samples)
        if plo <= 0.0:
            lo -= (hi - lo)
            plo = model.value(lo)
            samples.append((lo, plo))
        if phi >= 0.0:
            hi += (hi - lo)
            phi = model.value(hi)
            samples.append((hi, phi))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        pm = model.value(mid)
        if pm > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * np.finfo(float).eps * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def abscissa_s0(scene, memory, tol=1e-12, **kw):
    model = PressureModel.from_scene(scene, memory, **kw)
    return abscissa_from_model(model, tol)


@dataclass
class SandwichReport:
    pr_g: float
    int_f_nu_g: float
    int_f_nu_0: float
    s0: float
    lower: float
    upper: float
    margin_lower: float  # s0 - lower
    margin_upper: float  # upper - s0
    sign_ok: bool
    ok: bool

    def as_dict(self):
        return dict(self.__dict__)


def sandwich_check(model, s0=None, step=1e-4, slack=1e-4, tol=1e-12):
    """Check ``Pr(g)/int f dnu_g <= s0 <= Pr(g)/int f dnu_0``.

    The integrals are ``-dPr/dtau`` by central differences.
    """
    s0 = abscissa_from_model(model, tol) if s0 is None else s0
    prg = model.value(0.0)
    d = lambda t: -(model.value(t + step) - model.value(t - step)) / (2 * step)  # noqa: E731
    fg, f0 = d(0.0), d(s0)
    lower, upper = prg / fg, prg / f0
    ml, mu = s0 - lower, upper - s0
    sign_ok = (s0 > 0) == (prg > 0) and (s0 < 0) == (prg < 0)
    ok = ml >= -slack and mu >= -slack and sign_ok
    return SandwichReport(prg, fg, f0, s0, lower, upper, ml, mu, sign_ok, ok)


__all__ = [
    "CylinderWeights", "PressureResult", "PressureModel", "f_g_of_window",
    "sinai_chi", "pressure", "abscissa_s0", "abscissa_from_model",
    "sandwich_check", "SandwichReport", "BracketError", "period_g_sum",
    "window_function",
]
