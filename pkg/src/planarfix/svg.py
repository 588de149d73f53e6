"""Minimal SVG output for curves, decompositions and certificates.

Drawings use the mathematical frame (y up): all geometry sits in one group
whose transform flips the y axis, and strokes do not scale with it.
"""
from __future__ import annotations

from xml.sax.saxutils import quoteattr

import numpy as np

PALETTE = ("#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22")
HIGHLIGHT = "#d62728"


def _num(v):
    return f"{float(v):.9g}"


def _points(coords):
    return " ".join(f"{_num(x)},{_num(y)}" for x, y in coords)


class Canvas:
    """Collects shapes in world coordinates and writes them as SVG."""

    def __init__(self, size=640, margin=24):
        self.size = size
        self.margin = margin
        self.items = []
        self._extent = []

    def _grow(self, coords):
        coords = np.asarray(coords, dtype=float).reshape(-1, 2)
        if len(coords):
            self._extent.append(coords)

    def polygon(self, coords, stroke, cls, width=1.5, fill="none", closed=True, arrows=False,
                attrs=None):
        self._grow(coords)
        tag = "polygon" if closed else "polyline"
        extra = "".join(f" {k}={quoteattr(str(v))}" for k, v in sorted((attrs or {}).items()))
        marker = ' marker-mid="url(#arrow)"' if arrows else ""
        self.items.append(
            f'<{tag} class="{cls}" points="{_points(coords)}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{width}" vector-effect="non-scaling-stroke"{marker}{extra}/>')

    def point(self, xy, color, cls, radius=4.0, title=None):
        self._grow([xy])
        label = f"<title>{title}</title>" if title else ""
        self.items.append(("point", xy, color, cls, radius, label))

    def render(self):
        pts = np.vstack(self._extent) if self._extent else np.zeros((1, 2))
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
        scale = (self.size - 2 * self.margin) / span
        tx = self.margin - scale * lo[0]
        ty = self.margin + scale * hi[1]
        body = []
        for item in self.items:
            if isinstance(item, tuple):
                _, (x, y), color, cls, radius, label = item
                r = radius / scale
                body.append(f'<circle class="{cls}" cx="{_num(x)}" cy="{_num(y)}" r="{_num(r)}" '
                            f'fill="{color}">{label}</circle>')
            else:
                body.append(item)
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
                f'viewBox="0 0 {self.size} {self.size}">')
        defs = ('<defs><marker id="arrow" viewBox="0 0 10 10" refX="5" refY="5" markerWidth="6" '
                'markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#444"/>'
                '</marker></defs>')
        frame = (f'<g class="world" transform="matrix({_num(scale)} 0 0 {_num(-scale)} '
                 f'{_num(tx)} {_num(ty)})">')
        return "\n".join([head, defs, frame, *body, "</g>", "</svg>"]) + "\n"


def _with_midpoints(coords, closed=True):
    """Insert edge midpoints so ``marker-mid`` draws one arrow per edge."""
    c = np.asarray(coords, dtype=float)
    nxt = np.roll(c, -1, axis=0) if closed else c[1:]
    base = c if closed else c[:-1]
    out = np.empty((2 * len(base), 2))
    out[0::2] = base
    out[1::2] = 0.5 * (base + nxt)
    if not closed:
        out = np.vstack([out, c[-1:]])
    return out


def curve_svg(curve_dict):
    cv = Canvas()
    cv.polygon(_with_midpoints(curve_dict["vertices"]), "#333", "curve", arrows=True)
    return cv.render()


def decomposition_svg(report):
    """Input curve (grey), loops (distinct colours) and the kappa loop in red."""
    cv = Canvas()
    if "curve" in report:
        cv.polygon(report["curve"]["vertices"], "#bbbbbb", "input", width=4.0)
    kappa = report.get("kappa")
    for i, loop in enumerate(report["loops"]):
        chosen = i == kappa
        color = HIGHLIGHT if chosen else PALETTE[i % len(PALETTE)]
        cls = "loop kappa" if chosen else "loop"
        cv.polygon(_with_midpoints(loop["vertices"]), color, cls, width=2.5 if chosen else 1.5,
                   arrows=True, attrs={"data-index": i, "data-orientation": loop["orientation"]})
    return cv.render()


def certificate_svg(cert):
    """Orbit samples, their hull and the located common fixed point."""
    cv = Canvas()
    hull = cert["hull"]["vertices"]
    cv.polygon(hull, "#1f77b4", "hull", fill="#1f77b422")
    for xy in cert.get("orbit_samples", []):
        cv.point(xy, "#555", "orbit", radius=1.0)
    cv.point(cert["seed"], "#2ca02c", "seed", title="seed")
    cv.point(cert["fixed_point"], HIGHLIGHT, "fixed-point", radius=5.0, title="common fixed point")
    return cv.render()


def counterexample_svg(report):
    """Orbit of p, its hull, and the excluded fixed point q."""
    cv = Canvas()
    cv.polygon(report["hull_vertices"], "#1f77b4", "hull", fill="#1f77b422")
    t = np.linspace(0.0, 2 * np.pi, 129)[:-1]
    r = float(np.hypot(*report["p"]))
    cv.polygon(np.column_stack([r * np.cos(t), r * np.sin(t)]), "#cccccc", "circle", width=1.0)
    for xy in report["orbit"]:
        cv.point(xy, "#333", "orbit", radius=3.0)
    cv.point((0.0, 0.0), "#999", "origin", radius=2.5, title="origin")
    cv.point(report["q"], HIGHLIGHT, "fixed-point", radius=5.0, title="fixed point q")
    return cv.render()


def orbit_curve_svg(data):
    cv = Canvas()
    cv.polygon(_with_midpoints(data["vertices"]), "#333", "curve", arrows=True)
    cv.point(data["base_point"], "#2ca02c", "seed", title="base point")
    return cv.render()


def render_any(data):
    """Pick a drawing from the shape of a report produced by the CLI."""
    if "loops" in data:
        return decomposition_svg(data)
    if "fixed_point" in data and "hull" in data:
        return certificate_svg(data)
    if "hull_vertices" in data and "orbit" in data:
        return counterexample_svg(data)
    if "base_point" in data and "vertices" in data:
        return orbit_curve_svg(data)
    if "vertices" in data:
        return curve_svg(data)
    raise ValueError("unrecognised report: expected a curve, decomposition, certificate or "
                     "counterexample JSON")
