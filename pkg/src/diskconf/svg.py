"""Minimal SVG rendering of configurations, stress graphs and traps."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

SIZE = 400


def _tx(p, scale, off):
    return off + scale * p[0], off - scale * p[1]


class Drawing:
    def __init__(self, extent: float = 1.05, size: int = SIZE):
        self.scale = size / (2 * extent)
        self.off = size / 2
        self.size = size
        self.parts: list[str] = []

    def circle(self, c, r, fill="none", stroke="black", width=1.0, opacity=1.0):
        x, y = _tx(c, self.scale, self.off)
        self.parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{r * self.scale:.3f}" fill="{fill}" '
                          f'stroke="{stroke}" stroke-width="{width}" fill-opacity="{opacity}"/>')

    def line(self, p, q, stroke="black", width=1.5):
        x1, y1 = _tx(p, self.scale, self.off)
        x2, y2 = _tx(q, self.scale, self.off)
        self.parts.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
                          f'stroke="{stroke}" stroke-width="{width}"/>')

    def text(self, p, s, size=12):
        x, y = _tx(p, self.scale, self.off)
        self.parts.append(f'<text x="{x:.3f}" y="{y:.3f}" font-size="{size}" text-anchor="middle" '
                          f'dominant-baseline="central">{escape(str(s))}</text>')

    def render(self) -> str:
        body = "\n".join(self.parts)
        return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
                f'viewBox="0 0 {self.size} {self.size}">\n{body}\n</svg>\n')


def disk_svg(config, graph=None) -> str:
    d = Drawing()
    d.circle((0, 0), 1.0, width=2)
    for i, c in enumerate(config.centers):
        d.circle(c, config.radius, fill="#9ecae1", stroke="#3182bd", opacity=0.6)
        d.text(c, i + 1)
    if graph is not None:
        for i, j in graph.pairs:
            d.line(config.centers[i], config.centers[j], stroke="#de2d26", width=2)
        for i, y in zip(graph.boundary, graph.boundary_points):
            d.line(config.centers[i], y, stroke="#de2d26", width=2)
            d.circle(y, 0.015, fill="#de2d26", stroke="#de2d26")
    return d.render()


def segment_svg(config) -> str:
    d = Drawing()
    d.circle((0, 0), 1.0, width=2)
    a, b = config.endpoints()
    for i, (p, q) in enumerate(zip(a, b)):
        d.line(p, q, stroke="#3182bd", width=2.5)
        d.text(config.centers[i] + np.array([0.04, 0.04]), i + 1)
    return d.render()


def trap_svg(params, certificate=None, window: float = 1.2) -> str:
    """Strip |y| < 1 with the obstacles near the origin and the start pose."""
    d = Drawing(extent=window)
    d.line((-window, 1), (window, 1), stroke="gray")
    d.line((-window, -1), (window, -1), stroke="gray")
    for p in params.points(-window, window):
        d.circle(p, 0.006, fill="black")
    h = params.r / 2
    d.line((0, -h), (0, h), stroke="#3182bd", width=2)
    if certificate is not None:
        x0, x1 = certificate.x_extent
        d.line((x0, -1), (x0, 1), stroke="#31a354", width=1)
        d.line((x1, -1), (x1, 1), stroke="#31a354", width=1)
    half = params.delta / 2
    d.line((-half, -1), (-half, 1), stroke="#de2d26", width=0.8)
    d.line((half, -1), (half, 1), stroke="#de2d26", width=0.8)
    return d.render()
