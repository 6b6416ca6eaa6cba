"""Minimal line/scatter plots written as standalone SVG text.

Output depends only on the input data, so identical series give identical bytes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")
WIDTH, HEIGHT = 640, 420
MARGIN = {"left": 70, "right": 170, "top": 40, "bottom": 55}


@dataclass
class Series:
    label: str
    x: list
    y: list
    style: str = "line"  # "line", "scatter" or "both"
    extra: dict = field(default_factory=dict)


def _c(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo, hi, log):
    if log:
        a, b = math.floor(lo), math.ceil(hi)
        return [float(e) for e in range(a, b + 1)]
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / 5)) if span > 0 else 1.0
    for m in (1, 2, 5, 10):
        if span / (step * m) <= 6:
            step *= m
            break
    t0 = math.ceil(lo / step) * step
    out = []
    t = t0
    while t <= hi + 1e-12 * max(1.0, abs(hi)):
        out.append(round(t, 12))
        t += step
    return out


def _label(t, log):
    return f"1e{int(t)}" if log else f"{t:.6g}"


def plot(series, out=None, *, title: str = "", xlabel: str = "", ylabel: str = "",
         logx: bool = False, logy: bool = False) -> str:
    """Render ``series`` (a list of :class:`Series`) to SVG text; write it to ``out`` if given.

    Raises ``ValueError`` on an empty series list, an empty series, mismatched
    lengths, non-finite values, or nonpositive values on a log axis.
    """
    if not series:
        raise ValueError("nothing to plot")
    xs, ys = [], []
    for s in series:
        x = np.asarray(s.x, dtype=float)
        y = np.asarray(s.y, dtype=float)
        if x.size == 0 or x.shape != y.shape:
            raise ValueError(f"series {s.label!r} is empty or has mismatched lengths")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError(f"series {s.label!r} contains NaN or infinite values")
        if (logx and np.any(x <= 0)) or (logy and np.any(y <= 0)):
            raise ValueError(f"series {s.label!r} has nonpositive values on a log axis")
        xs.append(np.log10(x) if logx else x)
        ys.append(np.log10(y) if logy else y)

    allx, ally = np.concatenate(xs), np.concatenate(ys)
    x0, x1 = float(allx.min()), float(allx.max())
    y0, y1 = float(ally.min()), float(ally.max())
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    L, T = MARGIN["left"], MARGIN["top"]
    pw = WIDTH - L - MARGIN["right"]
    ph = HEIGHT - T - MARGIN["bottom"]

    def px(v):
        return L + (v - x0) / (x1 - x0) * pw

    def py(v):
        return T + ph - (v - y0) / (y1 - y0) * ph

    out_lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{L}" y="{T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out_lines.append(f'<text x="{_c(L + pw / 2)}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    for t in _ticks(x0, x1, logx):
        if x0 <= t <= x1:
            X = _c(px(t))
            out_lines.append(f'<line x1="{X}" y1="{T + ph}" x2="{X}" y2="{T + ph + 5}" stroke="black"/>')
            out_lines.append(f'<text x="{X}" y="{T + ph + 18}" text-anchor="middle">{_label(t, logx)}</text>')
    for t in _ticks(y0, y1, logy):
        if y0 <= t <= y1:
            Y = _c(py(t))
            out_lines.append(f'<line x1="{L - 5}" y1="{Y}" x2="{L}" y2="{Y}" stroke="black"/>')
            out_lines.append(f'<text x="{L - 8}" y="{Y}" text-anchor="end" dominant-baseline="middle">{_label(t, logy)}</text>')
    if xlabel:
        out_lines.append(f'<text x="{_c(L + pw / 2)}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        cy = _c(T + ph / 2)
        out_lines.append(f'<text x="18" y="{cy}" text-anchor="middle" transform="rotate(-90 18 {cy})">{escape(ylabel)}</text>')

    for n, (s, x, y) in enumerate(zip(series, xs, ys)):
        color = PALETTE[n % len(PALETTE)]
        pts = [(px(a), py(b)) for a, b in zip(x, y)]
        out_lines.append(f'<g class="series" data-label="{escape(s.label)}">')
        if s.style in ("line", "both") and len(pts) > 1:
            d = " ".join(f"{_c(a)},{_c(b)}" for a, b in pts)
            out_lines.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{d}"/>')
        if s.style in ("scatter", "both") or len(pts) == 1:
            out_lines += [f'<circle class="marker" cx="{_c(a)}" cy="{_c(b)}" r="3" fill="{color}"/>' for a, b in pts]
        out_lines.append("</g>")
        ly = T + 10 + 18 * n
        lx = L + pw + 12
        out_lines.append(f'<g class="legend-entry"><line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" '
                         f'stroke="{color}" stroke-width="2"/><text x="{lx + 26}" y="{ly}" '
                         f'dominant-baseline="middle">{escape(s.label)}</text></g>')
    out_lines.append("</svg>")
    text = "\n".join(out_lines) + "\n"
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
