"""Minimal self-contained SVG plots: linear SNR axis, log SER axis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from ..errors import HarnessError
from .io import fmt, write_text

WIDTH, HEIGHT = 640, 440
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 30, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
DEFAULT_FLOOR = 1e-7


@dataclass(frozen=True)
class Series:
    name: str
    x: tuple[float, ...]
    y: tuple[float, ...]
    dashed: bool = False


def render_svg(series: list[Series], floor: float = DEFAULT_FLOOR, title: str = "") -> str:
    """SVG text. Values below ``floor`` (including zero) are drawn at the floor.

    Every marker carries its unclamped values in ``data-x``/``data-y``.
    """
    if not series or any(len(s.x) == 0 for s in series):
        raise HarnessError("plot needs at least one series with at least one point", code="EMPTY_SERIES")
    xs = [x for s in series for x in s.x]
    ys = [max(y, floor) for s in series for y in s.y]
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    e0 = math.floor(math.log10(min(ys)))
    e1 = max(math.ceil(math.log10(max(ys))), e0 + 1)
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return TOP + (e1 - math.log10(max(y, floor))) / (e1 - e0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<metadata>{{"y_floor": {fmt(float(floor))}, "y_scale": "log10", "x_scale": "linear"}}</metadata>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>',
    ]
    if title:
        out.append(f'<text x="{LEFT + pw / 2:.1f}" y="18" text-anchor="middle">{escape(title)}</text>')
    for e in range(e0, e1 + 1):
        y = py(10.0 ** e)
        out.append(f'<line x1="{LEFT}" y1="{y:.2f}" x2="{LEFT + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{LEFT - 6}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>')
    for x in sorted(set(xs)):
        out.append(f'<text x="{px(x):.2f}" y="{TOP + ph + 16}" text-anchor="middle">{fmt(x)}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">SNR (dB)</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2:.1f})">SER</text>')
    for n, s in enumerate(series):
        color = COLORS[n % len(COLORS)]
        dash = ' stroke-dasharray="6 4"' if s.dashed else ""
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(s.x, s.y))
        out.append(f'<g class="series" data-name={quoteattr(s.name)}>')
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}"{dash}/>')
        for x, y in zip(s.x, s.y):
            out.append(f'<circle class="marker" cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="{color}" '
                       f'data-x="{fmt(float(x))}" data-y="{fmt(float(y))}"/>')
        out.append("</g>")
        ly = TOP + 10 + 18 * n
        out.append(f'<g class="legend-entry"><line x1="{LEFT + pw + 12}" y1="{ly}" x2="{LEFT + pw + 36}" '
                   f'y2="{ly}" stroke="{color}"{dash}/><text x="{LEFT + pw + 42}" y="{ly + 4}">'
                   f'{escape(s.name)}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(series: list[Series], path, floor: float = DEFAULT_FLOOR, title: str = "") -> None:
    write_text(path, render_svg(series, floor, title))
