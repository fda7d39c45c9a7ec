"""WKB reflection series and its transfer-operator form.

The data is a plane wave with direction ``e`` reflected by obstacle 1:
on that boundary the phase is ``phi(x) = <x, e>`` and rays leave in the
reflected direction with the mirror-law curvature.  Each admissible word
``j`` starting at 1 carries a term ``u_j(x, s)`` (optical length phase,
front-contraction amplitude, alternating sign).  The operator side
rebuilds the same sums from the series ``phi+``, ``phi-`` and the Sinai
corrector ``chi``, whose difference from the direct sum is the gap that
decays geometrically in ``n``.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from .billiard import FixedEnds, FrontLaunched, SolverError, segment_for_word
from .geometry import GeometryError
from .realize import Realizer, end_angles
from .symbolic import alternation, canonical_tail, enumerate_words, future_tail, min_other


def bump(u):
    """Smooth bump supported on (-1, 1) with ``bump(0) = 1``."""
    u = np.asarray(u, float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class BoundaryData:
    """Plane-wave phase and bump amplitude on the launch obstacle.

    Parameters
    ----------
    center_angle : float
        Boundary angle of the arc centre on obstacle 1.
    eta : float
        Tangential phase gradient at the arc centre; ``eta = 0`` is the
        normal launch.  Requires ``|eta| <= 1 - mu``.
    width : float
        Angular half-width of ``supp h``.
    height : float
        Maximum of ``h``; zero gives the trivial data.
    launch_curvature : float, optional
        Override of the outgoing front curvature at the launch point
        (default: reflected plane wave ``2 k_b / cos``).
    mu : float
        Transversality margin checked on the support.
    """
    center_angle: float = 0.0
    eta: float = 0.0
    width: float = 0.6
    height: float = 1.0
    launch_curvature: float = None
    mu: float = 0.05
    obstacle: int = 1

    def __post_init__(self):
        if self.obstacle != 1:
            raise ValueError("the launch obstacle is 1 by convention")
        if not 0.0 < self.mu < 1.0:
            raise ValueError("mu must lie in (0, 1)")
        if abs(self.eta) > 1.0 - self.mu:
            raise GeometryError("|eta| exceeds 1 - mu")
        if not 0.0 < self.width < math.pi / 2:
            raise ValueError("width must lie in (0, pi/2)")
        if self.height < 0:
            raise ValueError("height must be non-negative")

    def _frame(self, scene):
        d = scene.disk(1)
        nu = np.array([math.cos(self.center_angle), math.sin(self.center_angle)])
        tau = np.array([-nu[1], nu[0]])
        return np.asarray(d.center), d.radius, nu, tau

    def direction(self, scene):
        """Incident plane-wave direction ``e``."""
        _, _, nu, tau = self._frame(scene)
        return self.eta * tau - math.sqrt(1.0 - self.eta ** 2) * nu

    def phase(self, scene, x):
        return float(np.dot(x, self.direction(scene)))

    def amplitude(self, scene, x):
        c, r, _, _ = self._frame(scene)
        t = math.atan2(x[1] - c[1], x[0] - c[0])
        u = math.remainder(t - self.center_angle, 2 * math.pi) / self.width
        return self.height * float(bump(u))

    def launch_kappa(self, scene, q0, q1):
        """Outgoing curvature at ``q0`` for a ray heading to ``q1``."""
        if self.launch_curvature is not None:
            return float(self.launch_curvature)
        c, r, _, _ = self._frame(scene)
        nu = (np.asarray(q0) - c) / r
        u = np.asarray(q1) - q0
        cos = float(u @ nu) / math.hypot(*u)
        if cos <= 1e-10:
            raise GeometryError("launch direction is not outgoing")
        return 2.0 / (r * cos)

    def check(self, scene, samples=201):
        """Outward transversality ``<grad phi, nu> >= sqrt(2 mu - mu^2)``
        on ``supp h``; returns the minimum normal component."""
        c, r, _, _ = self._frame(scene)
        e = self.direction(scene)
        t = self.center_angle + self.width * np.linspace(-1.0, 1.0, samples)
        nus = np.column_stack([np.cos(t), np.sin(t)])
        normal = -(nus @ e)  # outgoing normal component of the reflected ray
        m = float(normal.min())
        if m < math.sqrt(2 * self.mu - self.mu ** 2):
            raise GeometryError(f"transversality fails on supp h (min {m:.3g})")
        return m


def default_data(scene, **kw):
    """Normal-launch data centred on the side of obstacle 1 facing the others."""
    c = scene.centers
    g = c[1:].mean(axis=0) - c[0]
    kw.setdefault("center_angle", math.atan2(g[1], g[0]))
    return BoundaryData(**kw)


@dataclass(frozen=True)
class SeriesTruncation:
    """Numbers of terms kept in the ``phi+``, ``phi-`` and ``chi`` series."""
    plus: int = 16
    minus: int = 16
    chi: int = 16
    buffer: int = 8  # realized symbols kept beyond the deepest term

    def __post_init__(self):
        for name in ("plus", "minus", "chi"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"truncation depth {name} must be >= 1")
        if self.buffer < 1:
            raise ValueError("buffer must be >= 1")

    def doubled(self):
        return SeriesTruncation(2 * self.plus, 2 * self.minus, 2 * self.chi, self.buffer)


@dataclass
class WkbTerm:
    word: tuple
    phase: float  # phi_j(x)
    amplitude: float  # a_j(x)
    sign: int
    value: complex
    launch: np.ndarray = field(default=None, repr=False)
    flights: np.ndarray = field(default=None, repr=False)
    log_lambda: float = 0.0


def _fsum_c(values):
    v = np.asarray(list(values), dtype=complex)
    return complex(math.fsum(v.real), math.fsum(v.imag))


def _check_on_boundary(scene, k, x, tol=1e-9):
    d = scene.disk(k)
    if abs(math.hypot(x[0] - d.center[0], x[1] - d.center[1]) - d.radius) > tol * d.radius:
        raise GeometryError(f"x is not on the boundary of obstacle {k}")


def _front_logs(scene, symbols, points, kappa0, rho, last_reflects=False):
    """Log step weights along ``points``; the final point is a reflection
    only when ``last_reflects``."""
    idx = np.asarray(symbols) - 1
    cx = scene.centers[idx, 0]
    cy = scene.centers[idx, 1]
    r = scene.radii[idx].copy()
    if len(points) > len(symbols):  # trailing external point
        cx = np.append(cx, 0.0)
        cy = np.append(cy, 0.0)
        r = np.append(r, 0.0)
    elif not last_reflects:
        r[-1] = 0.0
    pts = np.asarray(points, float)
    return kernels.front_chain(pts[:, 0], pts[:, 1], cx, cy, r, kappa0, rho)[3]


def u_term(scene, data, word, x, s, rho=0.5, tol=1e-12):
    """``(-1)^(|j|-1) exp(-s phi_j(x)) a_j(x)`` for a word starting at 1.

    The launch point is found by the front-launched Fermat solve; the
    amplitude is ``h`` at the launch point times the product of the
    front step ratios.  Zero when the launch point is outside ``supp h``.
    """
    word = tuple(int(k) for k in word)
    if word[0] != 1:
        raise ValueError("words must start at obstacle 1")
    x = np.asarray(x, float)
    _check_on_boundary(scene, word[-1], x)
    sign = -1 if (len(word) - 1) % 2 else 1
    if data.height == 0.0:
        return WkbTerm(word, float("nan"), 0.0, sign, 0j)
    pts, fl, logs = launched_chain(scene, data, word[:-1], x, rho, tol)
    h = data.amplitude(scene, pts[0])
    phase = data.phase(scene, pts[0]) + math.fsum(fl)
    loglam = math.fsum(logs)
    amp = h * math.exp(loglam)
    val = 0j if h == 0.0 else sign * np.exp(-complex(s) * phase) * amp
    return WkbTerm(word, phase, amp, sign, complex(val), pts[0], fl, loglam)


def launched_chain(scene, data, symbols, end_point, rho=0.5, tol=1e-12):
    """Ray issued from obstacle 1 along ``grad phi`` that reflects on
    ``symbols`` and then passes through ``end_point``.

    Returns ``(points, flights, logsteps)``; ``points`` ends with
    ``end_point``.
    """
    e = data.direction(scene)
    seg = segment_for_word(scene, symbols, FrontLaunched(tuple(e), tuple(end_point)), tol=tol)
    pts = seg.path()
    k0 = data.launch_kappa(scene, pts[0], pts[1])
    logs = _front_logs(scene, symbols, pts, k0, rho)
    return pts, np.hypot(*np.diff(pts, axis=0).T), logs


def words_for(scene, n, ell):
    """Admissible words of length ``n+3`` from 1 to ``ell`` (lexicographic)."""
    return enumerate_words(scene.kappa0, n + 3, first=1, last=ell)


def U_sum(scene, data, n, ell, x, s, rho=0.5, tol=1e-12):
    """``U_{n+2,ell}(x, s)``: sum of ``u_term`` over words of length ``n+3``."""
    vals = []
    for w in words_for(scene, n, ell):
        try:
            vals.append(u_term(scene, data, w, x, s, rho, tol).value)
        except SolverError as exc:
            raise SolverError(f"u_term failed for word {w.label()}: {exc}", exc.result) from exc
    return _fsum_c(vals)


@dataclass
class PartialSums:
    n: np.ndarray
    partial: np.ndarray  # w0 after including U_{n+2}
    cauchy: np.ndarray  # |w0(N) - w0(N-1)|


def w0_partial(scene, data, ell, x, s, N, rho=0.5, tol=1e-12):
    """Partial sums of ``w_{0,ell} = sum_n U_{n+2,ell}`` up to ``n = N``.

    The sum starts at the shortest admissible word (length 2 when
    ``ell != 1``, length 3 otherwise).
    """
    n0 = -1 if ell != 1 else 0
    ns = np.arange(n0, N + 1)
    us = np.array([U_sum(scene, data, int(n), ell, x, s, rho, tol) for n in ns], dtype=complex)
    partial = np.array([_fsum_c(us[:k + 1]) for k in range(len(us))], dtype=complex)
    return PartialSums(ns, partial, np.abs(us))


# operator side ---------------------------------------------------------------

class _Context:
    """Shared realizations for one (scene, data, truncation) setting."""

    def __init__(self, scene, data, trunc, rho, tol):
        self.scene = scene
        self.data = data
        self.trunc = trunc
        self.rho = rho
        self.tol = tol
        self.past = max(8, trunc.minus + trunc.buffer)
        self.R = Realizer(scene, pad=self.past, rho=rho, tol=tol)
        self._chains = {}

    def window(self, symbols):
        return self.R.window(tuple(symbols))

    def chi(self, symbols, origin, depth):
        """``sum_{k<depth} [F(sigma^k xi) - F(sigma^k e(xi))]`` for F = f, g."""
        w = self.window(symbols)
        e = canonical_tail(symbols[origin], self.past) + tuple(symbols[origin:])
        we = self.window(e)
        c1 = math.fsum(w.f(origin + k) - we.f(self.past + k) for k in range(depth))
        c2 = math.fsum(w.g(origin + k) - we.g(self.past + k) for k in range(depth))
        return c1, c2

    def forward(self, mu):
        """Front-launched ray ``Q_i(mu)`` with the far end pinned."""
        key = ("Q", mu)
        if key not in self._chains:
            sc = self.scene
            t1 = end_angles(sc, mu)[1]
            d = sc.disk(mu[-1])
            pin = np.array(d.center) + d.radius * np.array([math.cos(t1), math.sin(t1)])
            e = self.data.direction(sc)
            seg = segment_for_word(sc, mu[:-1], FrontLaunched(tuple(e), tuple(pin)), tol=self.tol)
            pts = seg.path()
            k0 = self.data.launch_kappa(sc, pts[0], pts[1])
            logs = _front_logs(sc, mu, pts, k0, self.rho, last_reflects=True)
            self._chains[key] = (pts, np.hypot(*np.diff(pts, axis=0).T), logs)
        return self._chains[key]

    def backward(self, past, x0):
        """Points ``P~_i(x0; eta)``: past symbols pinned far back, ending at ``x0``."""
        key = ("P", past, tuple(x0))
        if key not in self._chains:
            sc = self.scene
            t0 = end_angles(sc, past)[0]
            seg = segment_for_word(sc, past, FixedEnds(start_angle=t0, end_point=tuple(x0)),
                                   tol=self.tol)
            pts = seg.path()
            logs = _front_logs(sc, past, pts, 0.0, self.rho)
            self._chains[key] = (pts, np.hypot(*np.diff(pts, axis=0).T), logs)
        return self._chains[key]


def _xi_default(ell, kappa0=None):
    return alternation(ell, min_other(ell), 12)


def _extend(xi, length):
    xi = tuple(xi)
    if len(xi) >= length:
        return xi
    # continue the 2-periodic pattern
    if len(xi) >= 2:
        a, b = xi[-2], xi[-1]
        ext = alternation(a, b, length - len(xi) + 2)[2:]
    else:
        ext = future_tail(xi[-1], length - len(xi))
    return xi + ext


@dataclass
class SeriesValues:
    phi_plus: complex
    phi_minus: complex
    chi: complex


@dataclass
class MuTerm:
    """Per-sequence contributions and diagnostics of the operator side."""
    word: tuple  # (1, j_1, ..., j_{n+1}, ell)
    weight: complex  # exp(-s f~_{n+2} + g~_{n+2})
    W: complex
    W_tilde: complex
    series: SeriesValues
    res_flight: float
    res_amp: float


@dataclass
class OperatorSide:
    n: int
    ell: int
    value: complex  # (-1)^n sum weight * W
    value_tilde: complex  # same with W~
    terms: list


def _mu_term(ctx, word, xi, x0, s):
    sc, data, tr = ctx.scene, ctx.data, ctx.trunc
    s = complex(s)
    n = len(word) - 3
    mu = tuple(word) + tuple(xi[1:])
    past = ctx.past
    # e(mu): canonical past, then mu
    em = canonical_tail(1, past) + mu
    we = ctx.window(em)
    o = past
    # eta = sigma^{n+1} e(sigma mu): past tail(j_1), j_1..j_{n+1}; then ell, xi...
    eta_past = canonical_tail(mu[1], past) + tuple(mu[1:n + 2])
    eta = eta_past + tuple(mu[n + 2:])
    wt = ctx.window(eta)
    oe = len(eta_past)

    # phi+ : e(mu) against the front-launched ray Q(mu)
    q_pts, q_fl, q_logs = ctx.forward(mu)
    kp = tr.plus
    phi_plus = _fsum_c(-s * (we.f(o + k) - q_fl[k]) + (we.g(o + k) - q_logs[k]) for k in range(kp))

    # phi- : eta against P~(x0; eta)
    p_pts, p_fl, p_logs = ctx.backward(eta_past, x0)
    L = len(eta_past)
    km = tr.minus
    df = [wt.f(oe + i) - p_fl[L + i] for i in range(-1, -km - 1, -1)]
    dg = [wt.g(oe + i) - p_logs[L + i] for i in range(-1, -km - 1, -1)]
    phi_minus = -s * math.fsum(df) + math.fsum(dg)

    # chi at eta and at e(mu)
    c1e, c2e = ctx.chi(eta, oe, tr.chi)
    chi_eta = -s * c1e + c2e
    c1m, c2m = ctx.chi(em, o, tr.chi)
    chi_em = -s * c1m + c2m

    # one-sided weights f~_{n+2}, g~_{n+2} along e(mu)
    s1, s2 = ctx.chi(em, o + n + 2, tr.chi)
    ft = math.fsum(we.f(o + k) for k in range(n + 2)) - c1m + s1
    gt = math.fsum(we.g(o + k) for k in range(n + 2)) - c2m + s2
    weight = np.exp(-s * ft + gt)

    q0 = q_pts[0]
    h0 = data.amplitude(sc, q0)
    z = -phi_minus - chi_eta - phi_plus + chi_em - s * data.phase(sc, q0)
    W = complex(np.exp(z) * h0)

    # W~ from the chain launched toward x0
    u_pts, u_fl, u_logs = launched_chain(sc, data, tuple(word[:-1]), x0, ctx.rho, ctx.tol)
    qt0 = u_pts[0]
    ht = data.amplitude(sc, qt0)
    lam = math.exp(math.fsum(u_logs))
    zt = s * ft - gt - s * data.phase(sc, qt0) - s * math.fsum(u_fl)
    W_tilde = complex(np.exp(zt) * lam * ht)

    # per-word estimates
    idx = range(-1, -n - 2, -1)
    c = -math.fsum(wt.f(oe + i) - p_fl[L + i] for i in idx) + math.fsum(q_fl[:n + 2])
    d = -math.fsum(wt.g(oe + i) - p_logs[L + i] for i in idx) + math.fsum(q_logs[:n + 2])
    res_flight = abs(c - math.fsum(u_fl))
    res_amp = abs(math.exp(d) * h0 - lam * ht)
    return MuTerm(tuple(word), complex(weight), W, W_tilde,
                  SeriesValues(complex(phi_plus), complex(phi_minus), complex(chi_eta)),
                  res_flight, res_amp)


def _prepare(scene, data, n, ell, x0, xi, trunc):
    trunc = SeriesTruncation() if trunc is None else trunc
    xi = _xi_default(ell) if xi is None else tuple(int(k) for k in xi)
    if xi[0] != ell:
        raise ValueError("xi_future must start with ell")
    need = max(trunc.chi, trunc.plus - (n + 2), 1) + trunc.buffer
    xi = _extend(xi, max(len(xi), need + 1))
    x0 = np.asarray(x0, float)
    _check_on_boundary(scene, ell, x0)
    return trunc, xi, x0


def operator_side(scene, data, n, ell, x0, s, xi_future=None, trunc=None, rho=0.5,
                  tol=1e-12, context=None):
    """``(-1)^n sum_mu exp(-s f~_{n+2}(mu) + g~_{n+2}(mu)) W(x0; mu, s)``.

    ``mu`` runs over words ``(1, j_1, ..., j_{n+1}, ell)`` followed by
    ``xi_future``.  The companion value with ``W~`` in place of ``W`` is
    returned alongside, with per-word diagnostics.
    """
    trunc, xi, x0 = _prepare(scene, data, n, ell, x0, xi_future, trunc)
    if data.height == 0.0:
        return OperatorSide(n, ell, 0j, 0j, [])
    ctx = context or _Context(scene, data, trunc, rho, tol)
    terms = []
    for w in words_for(scene, n, ell):
        try:
            terms.append(_mu_term(ctx, tuple(w), xi, x0, s))
        except SolverError as exc:
            raise SolverError(f"operator side failed for word {w.label()}: {exc}",
                              exc.result) from exc
    sgn = -1 if n % 2 else 1
    val = sgn * _fsum_c(t.weight * t.W for t in terms)
    val_t = sgn * _fsum_c(t.weight * t.W_tilde for t in terms)
    return OperatorSide(n, ell, val, val_t, terms)


def phi_series(scene, data, word, xi_future, x0, s, trunc=None, rho=0.5, tol=1e-12):
    """``(phi+, phi-, chi(eta))`` for the sequence ``word + xi_future``.

    ``trunc`` may be an int for uniform depth; depth 0 gives zeros.
    """
    if isinstance(trunc, int) and trunc == 0:
        return SeriesValues(0j, 0j, 0j)
    if isinstance(trunc, int):
        trunc = SeriesTruncation(trunc, trunc, trunc)
    word = tuple(int(k) for k in word)
    n = len(word) - 3
    trunc, xi, x0 = _prepare(scene, data, n, word[-1], x0, xi_future, trunc)
    ctx = _Context(scene, data, trunc, rho, tol)
    return _mu_term(ctx, word, xi, x0, s).series


@dataclass
class Thm3Result:
    n: int
    ell: int
    s: complex
    u_sum: complex
    operator: complex
    operator_tilde: complex
    gap: float  # |operator(W) - U_sum|
    identity: float  # |operator(W~) - U_sum|
    max_res_flight: float
    max_res_amp: float
    words: int


def thm3_gap(scene, data, n, ell, x0, s, xi_future=None, trunc=None, rho=0.5, tol=1e-12):
    """Gap between the operator side and ``U_{n+2,ell}`` with diagnostics."""
    U = U_sum(scene, data, n, ell, x0, s, rho, tol)
    op = operator_side(scene, data, n, ell, x0, s, xi_future, trunc, rho, tol)
    r17 = max((t.res_flight for t in op.terms), default=0.0)
    r18 = max((t.res_amp for t in op.terms), default=0.0)
    return Thm3Result(n, ell, complex(s), U, op.value, op.value_tilde,
                      float(abs(op.value - U)), float(abs(op.value_tilde - U)),
                      r17, r18, len(op.terms))


def amplitude_bound_fit(terms, height):
    """Fit ``a_j <= ||h|| alpha^(|j|-2)``; returns the smallest valid alpha."""
    worst = 0.0
    for t in terms:
        k = len(t.word) - 2
        if k >= 1 and t.amplitude > 0:
            worst = max(worst, (t.amplitude / height) ** (1.0 / k))
    return worst


__all__ = [
    "BoundaryData", "SeriesTruncation", "WkbTerm", "SeriesValues", "MuTerm",
    "OperatorSide", "Thm3Result", "PartialSums", "bump", "default_data",
    "u_term", "U_sum", "w0_partial", "phi_series", "operator_side", "thm3_gap",
    "words_for", "launched_chain", "amplitude_bound_fit",
]
