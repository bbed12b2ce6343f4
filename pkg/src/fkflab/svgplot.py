"""Minimal self-contained SVG line charts (no plotting dependency).

Good enough for eyeballing convergence traces: axes, ticks, grid, legend,
one polyline per series. The y axis is meant for dB quantities, which are
already logarithmic, so the axis itself is linear.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

__all__ = ["line_chart"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 880, 560
_ML, _MR, _MT, _MB = 72, 24, 40, 56


def _ticks(lo, hi, count=6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(count - 1, 1)
    mag = 10.0 ** np.floor(np.log10(raw))
    step = min(s for s in (1, 2, 2.5, 5, 10) if s * mag >= raw) * mag
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + step / 2, step)


def line_chart(series, path, title="", xlabel="frame", ylabel="misalignment (dB)"):
    """Write an SVG chart.

    Parameters
    ----------
    series : sequence of (label, x, y)
        One polyline per entry; x and y are 1-D arrays of equal length.
    path : str or Path
        Output file.
    """
    drawable = [(lab, np.asarray(x, float), np.asarray(y, float)) for lab, x, y in series]
    drawable = [(lab, x, y) for lab, x, y in drawable if x.size and y.size]
    if drawable:
        xlo = min(x.min() for _, x, _ in drawable)
        xhi = max(x.max() for _, x, _ in drawable)
        ylo = min(y.min() for _, _, y in drawable)
        yhi = max(y.max() for _, _, y in drawable)
    else:
        xlo, xhi, ylo, yhi = 0.0, 1.0, 0.0, 1.0
    if xhi == xlo:
        xhi = xlo + 1.0
    pad = 0.05 * (yhi - ylo) or 1.0
    ylo, yhi = ylo - pad, yhi + pad

    iw = _W - _ML - _MR
    ih = _H - _MT - _MB

    def sx(v):
        return _ML + (v - xlo) / (xhi - xlo) * iw

    def sy(v):
        return _MT + (yhi - v) / (yhi - ylo) * ih

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_W / 2}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>'
        )
    for tv in _ticks(xlo, xhi):
        px = sx(tv)
        parts.append(
            f'<line x1="{px:.1f}" y1="{_MT}" x2="{px:.1f}" y2="{_MT + ih}" stroke="#ddd"/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{_MT + ih + 18}" text-anchor="middle">{tv:g}</text>'
        )
    for tv in _ticks(ylo, yhi):
        py = sy(tv)
        parts.append(
            f'<line x1="{_ML}" y1="{py:.1f}" x2="{_ML + iw}" y2="{py:.1f}" stroke="#ddd"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{py + 4:.1f}" text-anchor="end">{tv:g}</text>'
        )
    parts.append(
        f'<rect x="{_ML}" y="{_MT}" width="{iw}" height="{ih}" fill="none" stroke="black"/>'
    )
    parts.append(
        f'<text x="{_ML + iw / 2}" y="{_H - 16}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    parts.append(
        f'<text x="20" y="{_MT + ih / 2}" text-anchor="middle" '
        f'transform="rotate(-90 20 {_MT + ih / 2})">{escape(ylabel)}</text>'
    )
    for i, (label, x, y) in enumerate(drawable):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = _MT + 16 + 18 * i
        parts.append(
            f'<line x1="{_ML + iw - 150}" y1="{ly - 4}" x2="{_ML + iw - 120}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{_ML + iw - 112}" y="{ly}">{escape(str(label))}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
