"""Static SVG figures: the labeled 4-regular tree, and the image of the fan
map drawn in the unit-disc model (radius r drawn at tanh(r/2))."""

from __future__ import annotations

import math

from .errors import UsageError
from .free_group_tree import E, sphere
from .maps import map_vertex

_SIZE = 720
_MARGIN = 20


def _svg_document(elements, timestamp=None):
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
            f'viewBox="0 0 {_SIZE} {_SIZE}">')
    stamp = f"<!-- rendered {timestamp} -->" if timestamp else ""
    return "\n".join([head, stamp] + elements + ["</svg>"]) + "\n"


def _canvas(x, y, scale):
    half = _SIZE / 2.0
    return (half + x * (half - _MARGIN) * scale, half - y * (half - _MARGIN) * scale)


def render_figure1(depth, timestamp=None):
    """Tree layout: the four root edges on the axes, each generation at half
    the parent's step, fanned inside the parent's angular sector."""
    if depth > 7:
        raise UsageError("tree rendering capped at depth 7")
    positions = {E: (0.0, 0.0)}
    angles = {}
    for n in range(1, depth + 1):
        step = 0.5 ** (n - 1) * 0.5
        for w in sphere(n):
            parent = w.parent
            if n == 1:
                ang = w.digits[0] * math.pi / 2.0
            else:
                ang = angles[parent] + (w.digits[-1] - 1) * math.pi / 2.0 * 0.5 ** (n - 1)
            angles[w] = ang
            px, py = positions[parent]
            positions[w] = (px + step * math.cos(ang), py + step * math.sin(ang))
    elements = []
    cx, cy = _canvas(0.0, 0.0, 1.0)
    elements.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="black"/>')
    for n in range(1, depth + 1):
        for w in sphere(n):
            x1, y1 = _canvas(*positions[w.parent], 1.0)
            x2, y2 = _canvas(*positions[w], 1.0)
            elements.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" '
                            f'x2="{x2:.2f}" y2="{y2:.2f}" '
                            f'stroke="black" stroke-width="1"/>')
    return _svg_document(elements, timestamp)


def render_figure2(depth, timestamp=None):
    """Image of the fan map in the unit disc: one radial segment per tree
    edge (depth-n edges between disc radii tanh(n/2) and tanh((n+1)/2)),
    plus the bounding circle and the basepoint dot."""
    if depth > 7:
        raise UsageError("disc rendering capped at depth 7")
    elements = []
    cx, cy = _canvas(0.0, 0.0, 1.0)
    elements.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{_SIZE / 2 - _MARGIN:.2f}" '
                    f'fill="none" stroke="black" stroke-width="1"/>')
    elements.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="black"/>')
    for n in range(1, depth + 1):
        r_in, r_out = math.tanh((n - 1) / 2.0), math.tanh(n / 2.0)
        for w in sphere(n):
            phi = map_vertex(w).phi
            x1, y1 = _canvas(r_in * math.cos(phi), r_in * math.sin(phi), 1.0)
            x2, y2 = _canvas(r_out * math.cos(phi), r_out * math.sin(phi), 1.0)
            elements.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" '
                            f'x2="{x2:.2f}" y2="{y2:.2f}" '
                            f'stroke="black" stroke-width="1"/>')
    return _svg_document(elements, timestamp)


def render(figure, depth, timestamp=None):
    if figure == "figure1":
        return render_figure1(depth, timestamp)
    if figure == "figure2":
        return render_figure2(depth, timestamp)
    raise UsageError(f"unknown figure: {figure!r}")
