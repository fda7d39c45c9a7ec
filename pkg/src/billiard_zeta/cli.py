"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 solver error, 64 usage.
"""
import argparse
from dataclasses import dataclass, field
import hashlib
import math
import os
import re
import sys

import numpy as np

from . import __version__
from .billiard import Periodic, PhasePoint, SolverError, segment_for_word, trace
from .fronts import rho_value
from .geometry import GeometryError, boundary_point
from .orbits import MonodromyMismatch, orbit_table
from .realize import realize_window
from .serialize import SCHEMAS, csv_text, json_text, load_scene
from .svg import decay_svg, zeros_svg
from .symbolic import (CyclicWord, Word, count_words, enumerate_primitive_cycles,
                       enumerate_words, fit_geometric, parse_word)
from .thermo import BracketError, PressureModel, abscissa_from_model, sandwich_check
from .wkb import default_data, thm3_gap, w0_partial
from .zeta import euler_product, factor_lattice, find_zeros, zeta_abscissa, zeta_log

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    scene: str = None
    out: str = None
    rho: float = 0.5
    memory: int = 6
    tol: float = 1e-12
    jobs: int = 1
    seed: int = 0
    allow_eclipse: bool = False
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.memory < 1:
            raise ValueError("memory must be >= 1")


def _floats(text, n=None):
    vals = [float(v) for v in text.split(",")]
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers")
    return vals


def _common(p):
    p.add_argument("--scene", help="scene JSON file")
    p.add_argument("--out", help="output file or directory (default: stdout)")
    p.add_argument("--rho", default="half", choices=["half", "paper"],
                   help="normalisation exponent of the step weights")
    p.add_argument("--memory", type=int, default=6, help="pressure model memory")
    p.add_argument("--tol", type=float, default=1e-12, help="solver tolerance")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-eclipse", action="store_true",
                   help="accept scenes violating the no-eclipse condition")


def build_parser():
    ap = _Parser(prog="billiard-zeta", description="Periodic rays, zeta zeros, pressure "
                 "and WKB reflection series for disk scatterers.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scene-check", help="validate a scene")
    p.add_argument("path", nargs="?")
    _common(p)

    p = sub.add_parser("trace", help="trace a ray from a boundary point")
    _common(p)
    p.add_argument("--obstacle", type=int, default=1)
    p.add_argument("--angle", type=float, default=0.0, help="boundary angle of the start")
    p.add_argument("--direction", type=float, default=0.0, help="direction angle")
    p.add_argument("--steps", type=int, default=10)

    p = sub.add_parser("segment", help="realize a word as a billiard segment")
    _common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--closure", choices=["periodic", "fixed"], default="periodic")

    p = sub.add_parser("words", help="admissible words or primitive cycles")
    _common(p)
    p.add_argument("--kappa0", type=int)
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--cycles", action="store_true")

    p = sub.add_parser("orbits", help="periodic orbit table")
    _common(p)
    p.add_argument("--max-len", type=int, default=6)

    p = sub.add_parser("pressure", help="pressure Pr(-tau f + g)")
    _common(p)
    p.add_argument("--tau", type=_floats, default=[0.0], help="comma-separated values")

    p = sub.add_parser("s0", help="abscissa of absolute convergence")
    _common(p)

    p = sub.add_parser("sandwich", help="equilibrium-state bounds on s0")
    _common(p)

    p = sub.add_parser("zeta-eval", help="evaluate the zeta function")
    _common(p)
    p.add_argument("--re", type=float, required=True)
    p.add_argument("--im", type=float, default=0.0)
    p.add_argument("--max-len", type=int, default=6)

    for name in ("zeta-zeros", "zeta-plot"):
        p = sub.add_parser(name, help="zeros of the truncated Euler product")
        _common(p)
        p.add_argument("--window", type=lambda t: _floats(t, 4), required=True,
                       help="re0,re1,im0,im1")
        p.add_argument("--max-len", type=int, default=6)

    p = sub.add_parser("front", help="unstable front along a word")
    _common(p)
    p.add_argument("--word", required=True)

    for name in ("wkb-series", "thm3"):
        p = sub.add_parser(name, help="WKB partial sums" if name == "wkb-series"
                           else "operator-side gap sweep")
        _common(p)
        p.add_argument("--ell", type=int, default=2)
        p.add_argument("--x-angle", type=float, help="boundary angle of x on obstacle ell")
        p.add_argument("--s-re", type=float, help="default: s0 of the pressure model")
        p.add_argument("--s-im", type=float, default=0.0)
        if name == "wkb-series":
            p.add_argument("--N", type=int, default=6)
        else:
            p.add_argument("--n-min", type=int, default=1)
            p.add_argument("--n-max", type=int, default=6)
            p.add_argument("--svg", help="also write a log-gap decay plot here")

    p = sub.add_parser("report", help="consolidated JSON report")
    p.add_argument("path", nargs="?")
    _common(p)
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--thm3-n", type=int, default=5)
    return ap


def _emit(cfg, text, ext):
    if cfg.out is None:
        sys.stdout.write(text)
        return
    path = cfg.out
    if os.path.isdir(path) or path.endswith(os.sep):
        os.makedirs(path, exist_ok=True)
        path = os.path.join(path, f"{cfg.command}.{ext}")
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _scene(args):
    path = args.scene or getattr(args, "path", None)
    if path is None:
        raise ValueError("a scene is required (--scene)")
    return load_scene(path, allow_eclipse=args.allow_eclipse)


def _model(scene, cfg):
    return PressureModel.from_scene(scene, cfg.memory, rho=cfg.rho, jobs=cfg.jobs)


def _x_on(scene, ell, angle):
    d = scene.disk(ell)
    if angle is None:
        # face the centroid of the other obstacles
        others = np.delete(scene.centers, ell - 1, axis=0).mean(axis=0)
        angle = math.atan2(others[1] - d.center[1], others[0] - d.center[0])
    return boundary_point(d, angle)


def _s_value(scene, cfg, args):
    re = args.s_re
    if re is None:
        re = abscissa_from_model(_model(scene, cfg), min(cfg.tol * 1e2, 1e-10))
    return complex(re, args.s_im)


def _path_rows(word, points):
    rows = []
    for i, (k, p) in enumerate(zip(word, points)):
        fl = float(np.hypot(*(points[i + 1] - p))) if i + 1 < len(points) else float("nan")
        rows.append((i, k, p[0], p[1], fl))
    return rows


# commands ----------------------------------------------------------------------

def cmd_scene_check(cfg, args):
    path = args.scene or args.path
    if path is None:
        raise ValueError("a scene is required")
    scene = load_scene(path, allow_eclipse=True)
    rep = scene.eclipse
    lines = [f"kappa0={scene.kappa0}", f"H={'true' if rep.ok else 'false'}",
             f"gap={scene.gap:.17g}"]
    for i, j, k, c in rep.violations:
        lines.append(f"eclipse: disk {k} meets hull of {i},{j} (clearance {c:.6g})")
    _emit(cfg, "\n".join(lines) + "\n", "txt")
    return EXIT_OK if rep.ok or args.allow_eclipse else EXIT_INVALID


def cmd_trace(cfg, args):
    scene = _scene(args)
    d = scene.disk(args.obstacle)
    p = boundary_point(d, args.angle)
    v = np.array([math.cos(args.direction), math.sin(args.direction)])
    start = PhasePoint(args.obstacle, p, v).validate(scene)
    res = trace(start, scene, args.steps)
    rows = _path_rows(res.itinerary, res.points)
    _emit(cfg, csv_text("path", rows), "csv")
    return EXIT_OK


def cmd_segment(cfg, args):
    scene = _scene(args)
    word = parse_word(args.word)
    if args.closure == "periodic":
        seg = segment_for_word(scene, CyclicWord(word), Periodic(), tol=cfg.tol)
        pts = np.vstack([seg.points, seg.points[:1]])
        rows = _path_rows(tuple(seg.word) + (seg.word[0],), pts)[:-1]
    else:
        w = realize_window(scene, word, cfg.rho, cfg.tol)
        rows = _path_rows(word, w.points)
    _emit(cfg, csv_text("path", rows), "csv")
    return EXIT_OK


def cmd_words(cfg, args):
    k0 = args.kappa0 if args.kappa0 else _scene(args).kappa0
    rows = []
    if args.cycles:
        for n, ws in sorted(enumerate_primitive_cycles(k0, args.max_len).items()):
            for w in ws:
                rows.append((n, w.label(), True, len(ws)))
    else:
        for n in range(1, args.max_len + 1):
            for w in enumerate_words(k0, n):
                rows.append((n, Word(w).label(), "", count_words(k0, n)))
    _emit(cfg, csv_text("words", rows), "csv")
    return EXIT_OK


def cmd_orbits(cfg, args):
    scene = _scene(args)
    tab = orbit_table(scene, args.max_len, tol=cfg.tol, jobs=cfg.jobs)
    rows = [(o.label, o.T, o.m, o.r, o.lam, o.delta, o.residual) for o in tab]
    _emit(cfg, csv_text("orbits", rows), "csv")
    return EXIT_SOLVER if tab.failures else EXIT_OK


def cmd_pressure(cfg, args):
    model = _model(_scene(args), cfg)
    rows = []
    for t in args.tau:
        r = model.pressure(t)
        rows.append((t, cfg.memory, r.value, r.residual))
    _emit(cfg, csv_text("pressure", rows), "csv")
    return EXIT_OK


def cmd_s0(cfg, args):
    model = _model(_scene(args), cfg)
    s0 = abscissa_from_model(model, cfg.tol)
    _emit(cfg, csv_text("s0", [(s0, cfg.memory, abs(model.value(s0)))]), "csv")
    return EXIT_OK


def cmd_sandwich(cfg, args):
    rep = sandwich_check(_model(_scene(args), cfg), tol=cfg.tol)
    d = rep.as_dict()
    _emit(cfg, csv_text("sandwich", [tuple(d[c] for c in SCHEMAS["sandwich"][1])]), "csv")
    return EXIT_OK


def cmd_zeta_eval(cfg, args):
    tab = orbit_table(_scene(args), args.max_len, tol=cfg.tol, jobs=cfg.jobs)
    s = complex(args.re, args.im)
    z = zeta_log(s, tab)
    d = euler_product(s, tab)
    _emit(cfg, csv_text("zeta_eval", [(s.real, s.imag, z.real, z.imag, d.real, d.imag)]), "csv")
    return EXIT_OK


def cmd_zeta_zeros(cfg, args):
    tab = orbit_table(_scene(args), args.max_len, tol=cfg.tol, jobs=cfg.jobs)
    res = find_zeros(args.window, tab)
    for box in res.suspect:
        sys.stderr.write(f"suspect box {box}\n")
    rows = [(z.re, z.im, z.residual, z.stability, z.multiplicity) for z in res]
    _emit(cfg, csv_text("zeros", rows), "csv")
    return EXIT_OK


def cmd_zeta_plot(cfg, args):
    scene = _scene(args)
    tab = orbit_table(scene, args.max_len, tol=cfg.tol, jobs=cfg.jobs)
    res = find_zeros(args.window, tab)
    overlay = [z for z, _ in factor_lattice(tab, args.window)] if scene.kappa0 == 2 else []
    _emit(cfg, zeros_svg(res.locations(), overlay, tuple(args.window)), "svg")
    return EXIT_OK


def cmd_front(cfg, args):
    scene = _scene(args)
    w = realize_window(scene, parse_word(args.word), cfg.rho, cfg.tol)
    lam = np.exp(np.concatenate([[0.0], w.logsteps]))
    cum = np.cumprod(lam)
    rows = []
    for i, p in enumerate(w.points):
        if i + 1 < len(w.points):
            u = w.points[i + 1] - p
            u = u / np.hypot(*u)
        else:
            u = (float("nan"), float("nan"))
        rows.append((i, p[0], p[1], u[0], u[1], w.kappa_out[i], lam[i], cum[i]))
    _emit(cfg, csv_text("front", rows), "csv")
    return EXIT_OK


def cmd_wkb_series(cfg, args):
    scene = _scene(args)
    data = default_data(scene)
    x = _x_on(scene, args.ell, args.x_angle)
    s = _s_value(scene, cfg, args)
    ps = w0_partial(scene, data, args.ell, x, s, args.N, rho=cfg.rho, tol=cfg.tol)
    diffs = np.concatenate([[ps.partial[0]], np.diff(ps.partial)])
    rows = [(int(n), u.real, u.imag, p.real, p.imag, c)
            for n, u, p, c in zip(ps.n, diffs, ps.partial, ps.cauchy)]
    _emit(cfg, csv_text("wkb_series", rows), "csv")
    return EXIT_OK


def cmd_thm3(cfg, args):
    scene = _scene(args)
    data = default_data(scene)
    x = _x_on(scene, args.ell, args.x_angle)
    s = _s_value(scene, cfg, args)
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        r = thm3_gap(scene, data, n, args.ell, x, s, rho=cfg.rho, tol=cfg.tol)
        rows.append((n, r.u_sum.real, r.u_sum.imag, r.operator.real, r.operator.imag,
                     r.gap, r.identity, r.max_res_flight, r.max_res_amp))
    _emit(cfg, csv_text("thm3", rows), "csv")
    if args.svg:
        ns = [r[0] for r in rows]
        gaps = [r[5] for r in rows]
        fit = None
        if len(ns) >= 2 and all(g > 0 for g in gaps):
            fit = tuple(np.polyfit(ns, np.log(gaps), 1))
        with open(args.svg, "w") as fh:
            fh.write(decay_svg(ns, gaps, fit, title="operator-side gap"))
    return EXIT_OK


def build_report(scene, cfg, max_len=6, thm3_n=5):
    """Run every stage; failures are recorded per stage."""
    rep = {"kappa0": scene.kappa0, "no_eclipse": scene.eclipse.ok,
           "schemas": {k: v[0] for k, v in SCHEMAS.items()}, "stages": {}}
    if not scene.eclipse.ok:
        rep["eclipse"] = [list(v) for v in scene.eclipse.violations]

    def stage(name, fn):
        try:
            rep[name] = fn()
            rep["stages"][name] = "ok"
        except (ArithmeticError, SolverError, BracketError, GeometryError, ValueError) as exc:
            rep["stages"][name] = f"error: {exc}"

    model = {}

    def s0():
        model["m"] = _model(scene, cfg)
        model["s0"] = abscissa_from_model(model["m"], 1e-12)
        return model["s0"]

    stage("s0", s0)
    stage("pressure_g", lambda: model["m"].value(0.0))
    stage("sandwich", lambda: sandwich_check(model["m"], model["s0"]).as_dict())
    tab = {}

    def orbits():
        tab["t"] = orbit_table(scene, max_len, jobs=cfg.jobs)
        text = csv_text("orbits", [(o.label, o.T, o.m, o.r, o.lam, o.delta, 0.0)
                                   for o in tab["t"]])
        return {"count": len(tab["t"]), "failures": len(tab["t"].failures),
                "max_len": max_len, "sha256": hashlib.sha256(text.encode()).hexdigest()}

    stage("orbits", orbits)
    def abscissa():
        # the orbit-sum growth rate needs long words; cheap up to three obstacles
        n = max(max_len, 12) if scene.kappa0 <= 3 else max_len
        t = tab["t"] if n == max_len else orbit_table(scene, n, jobs=cfg.jobs)
        return zeta_abscissa(t)

    stage("zeta_abscissa", abscissa)
    if scene.kappa0 == 2:
        stage("delta_over_T", lambda: tab["t"].orbits[0].delta / tab["t"].orbits[0].T)

    def zeros():
        s0v = model.get("s0", -0.5)
        window = (s0v - 0.3, s0v + 0.3, 0.0, 2.0)
        res = find_zeros(window, tab["t"])
        return {"window": list(window), "zeros": [[z.re, z.im, z.multiplicity] for z in res],
                "suspect": len(res.suspect)}

    stage("zeros", zeros)

    def thm3():
        data = default_data(scene)
        ell = 2
        x = _x_on(scene, ell, None)
        s = complex(model["s0"])
        ns, gaps = [], []
        for n in range(1, thm3_n + 1):
            r = thm3_gap(scene, data, n, ell, x, s, rho=cfg.rho)
            ns.append(n)
            gaps.append(r.gap)
        C, theta = fit_geometric(ns, gaps, floor=1e-15)
        return {"n": ns, "gap": gaps, "theta": theta, "slope": math.log(theta)}

    stage("thm3", thm3)
    return rep


def cmd_report(cfg, args):
    path = args.scene or args.path
    if path is None:
        raise ValueError("a scene is required")
    scene = load_scene(path, allow_eclipse=True)
    if not scene.eclipse.ok and not args.allow_eclipse:
        rep = {"kappa0": scene.kappa0, "no_eclipse": False,
               "eclipse": [list(v) for v in scene.eclipse.violations]}
        _emit(cfg, json_text(rep), "json")
        return EXIT_INVALID
    rep = build_report(scene, cfg, args.max_len, args.thm3_n)
    _emit(cfg, json_text(rep), "json")
    return EXIT_OK if all(v == "ok" for v in rep["stages"].values()) else EXIT_SOLVER


COMMANDS = {
    "scene-check": cmd_scene_check, "trace": cmd_trace, "segment": cmd_segment,
    "words": cmd_words, "orbits": cmd_orbits, "pressure": cmd_pressure, "s0": cmd_s0,
    "sandwich": cmd_sandwich, "zeta-eval": cmd_zeta_eval, "zeta-zeros": cmd_zeta_zeros,
    "zeta-plot": cmd_zeta_plot, "front": cmd_front, "wkb-series": cmd_wkb_series,
    "thm3": cmd_thm3, "report": cmd_report,
}


_NEG = re.compile(r"^-[\d.]")


def _join_negative(argv):
    """``--window -0.4,0,...`` -> ``--window=-0.4,0,...`` so argparse does
    not read negative values as flags."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEG.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv=None):
    """Parse ``argv`` and run the command; returns the exit code."""
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_negative(argv))
    except UsageError:
        return EXIT_USAGE
    try:
        cfg = RunConfig(args.command, args.scene, args.out, rho_value(args.rho),
                        args.memory, args.tol, args.jobs, args.seed, args.allow_eclipse)
        return COMMANDS[args.command](cfg, args)
    except (GeometryError, ValueError, FileNotFoundError, IsADirectoryError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except (SolverError, BracketError, MonodromyMismatch, ArithmeticError) as exc:
        sys.stderr.write(f"solver error: {exc}\n")
        return EXIT_SOLVER


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
