"""SVG rendering of (approximate) persistence diagrams.

Draws the diagonal in black and the shift map psi in red (an optional
alternative psi overlays in green); error rectangles are filled blue for
definite entries and orange for possible ones, with the diagram entry at the
upper-right corner.  Entries with infinite death sit on a dashed band above
the finite range.  Log-log axes clamp every coordinate to a lower clip value
before transforming.
"""

from __future__ import annotations

import json
import math

from .diagram import ApproxDiagram

INF = math.inf

_SIZE = 640.0
_MARGIN = 56.0
_INF_BAND = 26.0

_DEFINITE_FILL = "#4878cf"
_POSSIBLE_FILL = "#ee854a"
_PSI_COLOR = "#d62728"
_OVERLAY_COLOR = "#2ca02c"


class _Axis:
    """Maps data coordinates to pixels, linearly or log10 with a clip."""

    def __init__(self, lo, hi, log, clip):
        self.log = log
        self.clip = clip
        if log:
            lo = math.log10(max(lo, clip))
            hi = math.log10(max(hi, clip))
        if hi <= lo:
            hi = lo + 1.0
        self.lo, self.hi = lo, hi
        self.span = hi - lo

    def unit(self, v):
        if self.log:
            v = math.log10(max(v, self.clip))
        else:
            v = max(v, self.lo)
        return (v - self.lo) / self.span


def _fmt(v):
    return f"{v:.6g}"


def render_svg(diagram, profile=None, *, log_axes=False, clip=None,
               overlay=None, config=None):
    """Render a diagram (plus optional profile / overlay profile) to SVG text."""
    if profile is not None:
        approx = approximate_entries(diagram, profile)
        finite = [v for e in approx for v in (e.rect[0], e.birth, e.rect[2], e.death)
                  if v != INF]
    else:
        approx = None
        finite = [v for e in diagram.entries for v in (e.birth, e.death) if v != INF]
    if profile is not None and profile.R != INF:
        finite.append(profile.R)
    hi = max(finite) if finite else 1.0
    positives = [v for v in finite if v > 0]
    if clip is None:
        clip = min(positives) if positives else 1e-6
    lo = clip if log_axes else 0.0
    axis = _Axis(lo, hi * 1.02, log_axes, clip)

    plot = _SIZE - 2 * _MARGIN
    inf_y = _MARGIN - _INF_BAND / 2.0

    def px(v):
        return _MARGIN + axis.unit(v) * plot

    def py(v):
        if v == INF:
            return inf_y
        return _SIZE - _MARGIN - axis.unit(v) * plot

    parts = ['<?xml version="1.0" encoding="UTF-8"?>']
    if config is not None:
        parts.append("<!-- config " + json.dumps(config, sort_keys=True) + " -->")
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE:.0f}" '
        f'height="{_SIZE:.0f}" viewBox="0 0 {_SIZE:.0f} {_SIZE:.0f}">')
    parts.append(f'<rect width="{_SIZE:.0f}" height="{_SIZE:.0f}" fill="white"/>')
    parts.append(
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{plot}" height="{plot}" '
        'fill="none" stroke="#999" stroke-width="1"/>')
    # dashed band for infinite deaths
    parts.append(
        f'<line x1="{_MARGIN}" y1="{inf_y}" x2="{_SIZE - _MARGIN}" y2="{inf_y}" '
        'stroke="#777" stroke-width="1" stroke-dasharray="6 4"/>')
    parts.append(
        f'<text x="{_MARGIN - 30}" y="{inf_y + 4}" font-size="12" fill="#555">inf</text>')

    for frac, label in _ticks(axis):
        x = _MARGIN + frac * plot
        y = _SIZE - _MARGIN - frac * plot
        parts.append(f'<text x="{x:.1f}" y="{_SIZE - _MARGIN + 16:.1f}" '
                     f'font-size="11" text-anchor="middle" fill="#333">{label}</text>')
        parts.append(f'<text x="{_MARGIN - 6:.1f}" y="{y + 4:.1f}" font-size="11" '
                     f'text-anchor="end" fill="#333">{label}</text>')

    # rectangles below curves, dots above
    if approx is not None:
        for e in approx:
            x0, x1 = px(e.rect[0]), px(e.birth)
            if e.essential:
                y0, y1 = inf_y - 4, inf_y + 4
            else:
                y0, y1 = py(e.death), py(e.rect[2])
            fill = _DEFINITE_FILL if e.definite else _POSSIBLE_FILL
            cls = "definite" if e.definite else "possible"
            parts.append(
                f'<rect class="{cls}" x="{x0:.2f}" y="{y0:.2f}" '
                f'width="{max(x1 - x0, 0.8):.2f}" height="{max(y1 - y0, 0.8):.2f}" '
                f'fill="{fill}" fill-opacity="0.35" stroke="{fill}" stroke-width="0.8"/>')

    # diagonal (identity, black)
    parts.append(_curve_path(lambda r: r, axis, px, py, "black", "identity"))
    if profile is not None:
        parts.append(_curve_path(profile.psi, axis, px, py, _PSI_COLOR, "psi"))
    if overlay is not None:
        parts.append(_curve_path(overlay.psi, axis, px, py, _OVERLAY_COLOR, "overlay-psi"))

    entries = approx if approx is not None else diagram.entries
    for e in entries:
        parts.append(f'<circle cx="{px(e.birth):.2f}" cy="{py(e.death):.2f}" '
                     'r="2.6" fill="#222"/>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def approximate_entries(diagram, profile):
    from .diagram import approximate
    return approximate(diagram, profile).entries


def _curve_path(fn, axis, px, py, color, name, samples=200):
    pts = []
    for k in range(samples + 1):
        if axis.log:
            r = 10 ** (axis.lo + axis.span * k / samples)
        else:
            r = axis.lo + axis.span * k / samples
        v = fn(r)
        if v == INF:
            continue
        pts.append(f"{px(r):.2f},{py(max(v, axis.clip if axis.log else v)):.2f}")
    return (f'<polyline class="{name}" points="{" ".join(pts)}" fill="none" '
            f'stroke="{color}" stroke-width="1.4"/>')


def _ticks(axis, target=5):
    if axis.log:
        lo = math.ceil(axis.lo)
        hi = math.floor(axis.hi)
        decades = range(lo, hi + 1, max(1, (hi - lo) // target + 1))
        return [((d - axis.lo) / axis.span, f"1e{d}") for d in decades]
    step = _round_step(axis.span / target)
    ticks = []
    v = math.ceil(axis.lo / step) * step
    while v <= axis.hi:
        ticks.append(((v - axis.lo) / axis.span, _fmt(v)))
        v += step
    return ticks


def _round_step(raw):
    mag = 10 ** math.floor(math.log10(raw)) if raw > 0 else 1.0
    for mult in (1, 2, 5, 10):
        if raw <= mult * mag:
            return mult * mag
    return 10 * mag
