"""Deterministic SVG scatter rendering of persistence diagrams.

Output is a standalone SVG with fixed dimensions and float formatting:
identical diagrams yield byte-identical files.  Finite points are circles
colored by dimension (dimension 0 red, 1 green, then a fixed cycle);
essential classes are triangles pinned to the top border.
"""

from __future__ import annotations

import math

from .persistence import PersistenceDiagram

_SIZE = 640
_MARGIN = 70
_COLORS = ("#d62728", "#2ca02c", "#1f77b4", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(x: float) -> str:
    return format(x, ".6f")


def render_diagram_svg(diagram: PersistenceDiagram, include_zero: bool = False) -> str:
    """Render to an SVG string (birth on x, death on y, diagonal drawn)."""
    rows = diagram.as_multiset(include_zero=include_zero)
    finite_vals = [b for _, b, _ in rows] + [d for _, _, d in rows if math.isfinite(d)]
    lo = min(finite_vals, default=0.0)
    hi = max(finite_vals, default=1.0)
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    lo -= pad
    hi += pad
    span = hi - lo
    inner = _SIZE - 2 * _MARGIN

    def sx(v: float) -> float:
        return _MARGIN + (v - lo) / span * inner

    def sy(v: float) -> float:
        return _SIZE - _MARGIN - (v - lo) / span * inner

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{_SIZE - _MARGIN}" x2="{_SIZE - _MARGIN}" '
        f'y2="{_SIZE - _MARGIN}" stroke="black" stroke-width="1"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{_SIZE - _MARGIN}" stroke="black" stroke-width="1"/>',
        f'<line x1="{_fmt(sx(lo))}" y1="{_fmt(sy(lo))}" x2="{_fmt(sx(hi))}" '
        f'y2="{_fmt(sy(hi))}" stroke="#888888" stroke-width="1" stroke-dasharray="4 3"/>',
        f'<text x="{_SIZE // 2}" y="{_SIZE - 20}" font-family="monospace" '
        f'font-size="13" text-anchor="middle">birth</text>',
        f'<text x="20" y="{_SIZE // 2}" font-family="monospace" font-size="13" '
        f'text-anchor="middle" transform="rotate(-90 20 {_SIZE // 2})">death</text>',
        f'<text x="{_MARGIN}" y="{_SIZE - _MARGIN + 18}" font-family="monospace" '
        f'font-size="11" text-anchor="middle">{_fmt(lo)}</text>',
        f'<text x="{_SIZE - _MARGIN}" y="{_SIZE - _MARGIN + 18}" font-family="monospace" '
        f'font-size="11" text-anchor="middle">{_fmt(hi)}</text>',
    ]
    for dim, birth, death in rows:
        color = _COLORS[dim % len(_COLORS)]
        x = sx(birth)
        if math.isfinite(death):
            parts.append(
                f'<circle cx="{_fmt(x)}" cy="{_fmt(sy(death))}" r="4" fill="{color}" '
                f'fill-opacity="0.75"/>'
            )
        else:
            ytop = float(_MARGIN)
            parts.append(
                f'<path d="M {_fmt(x - 5)} {_fmt(ytop + 9)} L {_fmt(x + 5)} {_fmt(ytop + 9)} '
                f'L {_fmt(x)} {_fmt(ytop)} Z" fill="{color}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_diagram_svg(path, diagram: PersistenceDiagram, include_zero: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_diagram_svg(diagram, include_zero=include_zero))
