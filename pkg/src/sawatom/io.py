"""CSV and SVG writers.

CSV files use a mandatory header, LF line endings and 17 significant
digits so that repeated runs are byte-identical.  SVG plots are drawn
directly: axes, polylines, labels and (for maps) a raster of rectangles.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence, Tuple

import numpy as np

__all__ = [
    "fmt",
    "write_csv",
    "spectrum_rows",
    "factor_rows",
    "fluxmap_rows",
    "trace_rows",
    "line_plot_svg",
    "heatmap_svg",
]


def fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def spectrum_rows(spectrum):
    """Rows ``omega_rad_s, freq_GHz, re, im, abs2`` of a ResponseSpectrum."""
    header = ("omega_rad_s", "freq_GHz", "re", "im", "abs2")
    w, v = spectrum.grid, spectrum.values
    rows = zip(w, w / (2e9 * math.pi), v.real, v.imag, np.abs(v) ** 2)
    return header, rows


def factor_rows(factors):
    header = ("omega_rad_s", "re_A", "im_A", "re_H", "im_H")
    f = factors
    return header, zip(f.omega, f.A.real, f.A.imag, f.H.real, f.H.imag)


def fluxmap_rows(fmap, values=None):
    """Long format ``flux_phi0, freq_GHz, abs2``; invalid rows are written as nan."""
    header = ("flux_phi0", "freq_GHz", "abs2")
    vals = fmap.values if values is None else values
    f_ghz = fmap.freq_grid / (2e9 * math.pi)

    def gen():
        for i, phi in enumerate(fmap.flux_grid):
            for j, f in enumerate(f_ghz):
                yield phi, f, vals[i, j]

    return header, gen()


def trace_rows(trace):
    header = ("t_s", "pJ", "out_left", "out_right", "out_gate")
    return header, zip(trace.t, trace.pJ, trace.phi_out_left, trace.phi_out_right, trace.phi_out_gate)


# -- SVG ----------------------------------------------------------------------

_W, _H = 640, 420
_M = (70, 20, 30, 55)  # left, right, top, bottom
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo, hi, k=5):
    if hi <= lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / k))
    for m in (1, 2, 5, 10):
        if (hi - lo) / (step * m) <= k:
            step *= m
            break
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def _frame(xlim, ylim, xlabel, ylabel, title):
    x0, y0 = _M[0], _M[2]
    pw, ph = _W - _M[0] - _M[1], _H - _M[2] - _M[3]
    sx = lambda x: x0 + (x - xlim[0]) / (xlim[1] - xlim[0]) * pw  # noqa: E731
    sy = lambda y: y0 + ph - (y - ylim[0]) / (ylim[1] - ylim[0]) * ph  # noqa: E731
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="18" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for t in _ticks(*xlim):
        out.append(f'<line x1="{sx(t):.2f}" y1="{y0 + ph}" x2="{sx(t):.2f}" y2="{y0 + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{y0 + ph + 18}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(*ylim):
        out.append(f'<line x1="{x0 - 5}" y1="{sy(t):.2f}" x2="{x0}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:.4g}</text>')
    out.append(f'<text x="{x0 + pw / 2:.1f}" y="{_H - 12}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="16" y="{y0 + ph / 2:.1f}" text-anchor="middle" transform="rotate(-90 16 {y0 + ph / 2:.1f})">{ylabel}</text>')
    return out, sx, sy, (x0, y0, pw, ph)


def line_plot_svg(path, series: Sequence[Tuple[str, np.ndarray, np.ndarray]], xlabel, ylabel, title) -> Path:
    """Overlay of ``(label, x, y)`` polylines."""
    xs = np.concatenate([s[1] for s in series])
    ys = np.concatenate([s[2] for s in series])
    ys = ys[np.isfinite(ys)]
    ylim = (min(0.0, float(ys.min())), float(ys.max()) * 1.05 or 1.0)
    out, sx, sy, (x0, y0, pw, ph) = _frame((float(xs.min()), float(xs.max())), ylim, xlabel, ylabel, title)
    for k, (label, x, y) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y) if np.isfinite(b))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{x0 + pw - 8}" y="{y0 + 16 + 16 * k}" text-anchor="end" fill="{color}">{label}</text>')
    out.append(f'<rect x="{x0}" y="{y0}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    out.append("</svg>")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(out) + "\n")
    return path


def _gray(v):
    g = int(round(255 * (1.0 - min(max(v, 0.0), 1.0))))
    return f"#{g:02x}{g:02x}{g:02x}"


def heatmap_svg(path, x, y, z, xlabel, ylabel, title) -> Path:
    """Raster of ``z[i, j]`` at ``(x[j], y[i])``, normalized to [0, 1]; nan rows are hatched red."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out, sx, sy, (x0, y0, pw, ph) = _frame((x[0], x[-1]), (y[0], y[-1]), xlabel, ylabel, title)
    finite = z[np.isfinite(z)]
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    span = hi - lo if hi > lo else 1.0
    cw = pw / max(x.size - 1, 1)
    chh = ph / max(y.size - 1, 1)
    for i in range(y.size):
        yy = sy(y[i]) - chh / 2
        if not np.isfinite(z[i]).any():
            out.append(f'<rect x="{x0}" y="{yy:.2f}" width="{pw}" height="{chh:.2f}" fill="#f4cccc"/>')
            continue
        for j in range(x.size):
            out.append(f'<rect x="{sx(x[j]) - cw / 2:.2f}" y="{yy:.2f}" width="{cw + 0.05:.2f}" height="{chh + 0.05:.2f}" fill="{_gray((z[i, j] - lo) / span)}"/>')
    out.append(f'<rect x="{x0}" y="{y0}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    out.append("</svg>")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(out) + "\n")
    return path
