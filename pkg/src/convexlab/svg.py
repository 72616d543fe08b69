"""Minimal deterministic SVG emission: profile curves, rel-diff scatters,
and section-polygon overlays.  No plotting dependency; fixed 800x600 canvas;
identical input yields byte-identical output.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

WIDTH, HEIGHT = 800, 600
MARGIN = 60.0


class SvgError(ValueError):
    pass


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise SvgError("non-finite coordinate in SVG data")
    return f"{x:.6f}"


class Canvas:
    def __init__(self):
        self.parts: list[str] = []

    def line(self, x1, y1, x2, y2, stroke="#444444", width=1.0):
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{_fmt(width)}"/>')

    def polyline(self, pts, stroke="#1f6fb2", width=1.5, dash=None, close=False):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        tag = "polygon" if close else "polyline"
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<{tag} points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}"{dash_attr}/>')

    def circle(self, x, y, r=2.0, fill="#b2451f"):
        self.parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="{fill}"/>')

    def text(self, x, y, s, size=13, anchor="start", fill="#222222"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'font-family="monospace" text-anchor="{anchor}" fill="{fill}">{s}</text>')

    def to_string(self) -> str:
        body = "\n".join(self.parts)
        return (
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">\n'
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>\n'
            f"{body}\n</svg>\n")


def _axes(canvas: Canvas, title: str):
    canvas.line(MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN / 2, HEIGHT - MARGIN)
    canvas.line(MARGIN, HEIGHT - MARGIN, MARGIN, MARGIN / 2)
    canvas.text(WIDTH / 2, 30, title, size=16, anchor="middle")


def _scale(vals, lo_pix, hi_pix):
    v = np.asarray(vals, dtype=float)
    vmin, vmax = float(v.min()), float(v.max())
    if vmax - vmin < 1e-30:
        vmax = vmin + 1.0
    return lambda x: lo_pix + (np.asarray(x) - vmin) * (hi_pix - lo_pix) / (vmax - vmin), vmin, vmax


def render_series_svg(path, title: str, series) -> Path:
    """Line plot of named (x, y) series: series = [(label, xs, ys), ...]."""
    canvas = Canvas()
    _axes(canvas, title)
    palette = ["#1f6fb2", "#b2451f", "#3a8f3a", "#7b3ab2"]
    if series:
        all_x = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
        all_y = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
        if not (np.all(np.isfinite(all_x)) and np.all(np.isfinite(all_y))):
            raise SvgError("non-finite series data")
        sx, xmin, xmax = _scale(all_x, MARGIN, WIDTH - MARGIN / 2)
        sy, ymin, ymax = _scale(all_y, HEIGHT - MARGIN, MARGIN / 2)
        for idx, (label, xs, ys) in enumerate(series):
            color = palette[idx % len(palette)]
            dash = None if idx % 2 == 0 else "6,4"
            pts = list(zip(sx(np.asarray(xs, dtype=float)), sy(np.asarray(ys, dtype=float))))
            canvas.polyline(pts, stroke=color, dash=dash)
            canvas.text(WIDTH - MARGIN / 2 - 4, MARGIN / 2 + 16 * (idx + 1),
                        label, anchor="end", fill=color)
        canvas.text(MARGIN, HEIGHT - MARGIN + 30, _fmt(xmin))
        canvas.text(WIDTH - MARGIN / 2, HEIGHT - MARGIN + 30, _fmt(xmax), anchor="end")
        canvas.text(MARGIN - 6, HEIGHT - MARGIN, _fmt(ymin), anchor="end")
        canvas.text(MARGIN - 6, MARGIN / 2 + 10, _fmt(ymax), anchor="end")
    p = Path(path)
    p.write_text(canvas.to_string(), encoding="utf-8")
    return p


def render_scatter_svg(path, title: str, xs, ys, log_floor: float = 1e-18) -> Path:
    """Scatter of per-sample values on a log10 vertical scale."""
    canvas = Canvas()
    _axes(canvas, title)
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size:
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise SvgError("non-finite scatter data")
        logy = np.log10(np.maximum(np.abs(y), log_floor))
        sx, xmin, xmax = _scale(x, MARGIN, WIDTH - MARGIN / 2)
        sy, ymin, ymax = _scale(logy, HEIGHT - MARGIN, MARGIN / 2)
        for px, py in zip(sx(x), sy(logy)):
            canvas.circle(px, py)
        canvas.text(MARGIN, HEIGHT - MARGIN + 30, _fmt(xmin))
        canvas.text(WIDTH - MARGIN / 2, HEIGHT - MARGIN + 30, _fmt(xmax), anchor="end")
        canvas.text(MARGIN - 6, HEIGHT - MARGIN, f"1e{ymin:.1f}", anchor="end")
        canvas.text(MARGIN - 6, MARGIN / 2 + 10, f"1e{ymax:.1f}", anchor="end")
    p = Path(path)
    p.write_text(canvas.to_string(), encoding="utf-8")
    return p


def render_polygons_svg(path, title: str, polygons) -> Path:
    """Overlay of labeled polygons: polygons = [(label, (m,2) vertices), ...]."""
    canvas = Canvas()
    _axes(canvas, title)
    palette = ["#1f6fb2", "#b2451f", "#3a8f3a", "#7b3ab2", "#b2a23a", "#3ab2a8"]
    if polygons:
        pts = np.vstack([np.asarray(v, dtype=float) for _, v in polygons])
        if not np.all(np.isfinite(pts)):
            raise SvgError("non-finite polygon data")
        span = float(np.abs(pts).max()) or 1.0
        side = min(WIDTH, HEIGHT) / 2.0 - MARGIN
        cx, cy = WIDTH / 2.0, HEIGHT / 2.0

        def to_pix(v):
            return [(cx + x / span * side, cy - y / span * side) for x, y in v]

        for idx, (label, verts) in enumerate(polygons):
            color = palette[idx % len(palette)]
            dash = None if idx % 2 == 0 else "6,4"
            canvas.polyline(to_pix(np.asarray(verts, dtype=float)), stroke=color,
                            dash=dash, close=True)
            canvas.text(WIDTH - MARGIN / 2 - 4, MARGIN / 2 + 16 * (idx + 1),
                        label, anchor="end", fill=color)
    p = Path(path)
    p.write_text(canvas.to_string(), encoding="utf-8")
    return p
