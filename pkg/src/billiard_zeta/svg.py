"""Minimal static SVG plots (scatter with overlay, log-scale decay)."""
import math
from xml.sax.saxutils import escape

W, H, M = 480, 360, 48


def _scale(lo, hi, a, b):
    if hi - lo <= 0:
        lo, hi = lo - 0.5, hi + 0.5
    return lambda v: a + (v - lo) * (b - a) / (hi - lo)


def _frame(title, xlabel, ylabel, xr, yr):
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{M}" y="{M // 2}" width="{W - 1.5 * M:g}" height="{H - 1.5 * M:g}" '
        'fill="none" stroke="black"/>',
        f'<text x="{W / 2:g}" y="16" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<text x="{W / 2:g}" y="{H - 8}" text-anchor="middle" font-size="11">{escape(xlabel)}</text>',
        f'<text x="12" y="{H / 2:g}" font-size="11" transform="rotate(-90 12 {H / 2:g})" '
        f'text-anchor="middle">{escape(ylabel)}</text>',
        f'<text x="{M}" y="{H - M + 14}" font-size="9">{xr[0]:.4g}</text>',
        f'<text x="{W - M // 2}" y="{H - M + 14}" font-size="9" text-anchor="end">{xr[1]:.4g}</text>',
        f'<text x="{M - 4}" y="{H - M}" font-size="9" text-anchor="end">{yr[0]:.4g}</text>',
        f'<text x="{M - 4}" y="{M // 2 + 8}" font-size="9" text-anchor="end">{yr[1]:.4g}</text>',
    ]
    return out


def zeros_svg(zeros, overlay=(), window=None, title="zeta zeros"):
    """Scatter of complex ``zeros`` (circles) with ``overlay`` points (crosses)."""
    pts = [complex(z) for z in zeros] + [complex(z) for z in overlay]
    if window is None:
        if pts:
            window = (min(p.real for p in pts), max(p.real for p in pts),
                      min(p.imag for p in pts), max(p.imag for p in pts))
        else:
            window = (-1.0, 1.0, -1.0, 1.0)
    re0, re1, im0, im1 = window
    sx = _scale(re0, re1, M, W - M // 2)
    sy = _scale(im0, im1, H - M, M // 2)
    out = _frame(title, "Re s", "Im s", (re0, re1), (im0, im1))
    for z in overlay:
        x, y = sx(z.real), sy(z.imag)
        out.append(f'<path d="M{x - 4:.2f},{y - 4:.2f}L{x + 4:.2f},{y + 4:.2f}'
                   f'M{x - 4:.2f},{y + 4:.2f}L{x + 4:.2f},{y - 4:.2f}" stroke="red"/>')
    for z in zeros:
        out.append(f'<circle cx="{sx(z.real):.2f}" cy="{sy(z.imag):.2f}" r="3" '
                   'fill="none" stroke="blue"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def decay_svg(ns, values, fit=None, title="decay"):
    """``log10(values)`` against ``ns`` with an optional ``(slope, intercept)``
    natural-log fit line."""
    logs = [math.log10(v) for v in values if v > 0]
    ns = [n for n, v in zip(ns, values) if v > 0]
    if not ns:
        ns, logs = [0, 1], [0.0, 0.0]
    xr = (min(ns), max(ns))
    yr = (min(logs), max(logs))
    sx = _scale(*xr, M, W - M // 2)
    sy = _scale(*yr, H - M, M // 2)
    out = _frame(title, "n", "log10 value", xr, yr)
    path = "".join(("M" if i == 0 else "L") + f"{sx(n):.2f},{sy(v):.2f}"
                   for i, (n, v) in enumerate(zip(ns, logs)))
    out.append(f'<path d="{path}" fill="none" stroke="blue"/>')
    if fit is not None:
        a, b = fit
        y0 = (a * xr[0] + b) / math.log(10)
        y1 = (a * xr[1] + b) / math.log(10)
        out.append(f'<path d="M{sx(xr[0]):.2f},{sy(y0):.2f}L{sx(xr[1]):.2f},{sy(y1):.2f}" '
                   'stroke="gray" stroke-dasharray="4 3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = ["zeros_svg", "decay_svg"]
