"""Minimal SVG log-log plots for rate reports (no plotting dependency)."""

from __future__ import annotations

import math

import numpy as np

W, H, PAD = 480, 360, 56


def _scale(values, lo_px, hi_px):
    lv = np.log10(values)
    lo, hi = lv.min(), lv.max()
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    return lambda v: lo_px + (np.log10(v) - lo) / (hi - lo) * (hi_px - lo_px), (lo, hi)


def loglog_svg(report, statistic: str) -> str:
    """Median statistic, its 0.9-quantile, and the claimed rate scaled to meet
    the median at the smallest n, on log-log axes."""
    n = report.n_grid.astype(float)
    med = report.median(statistic)
    q90 = report.quantile(statistic)
    rate = report.rate(statistic)
    ref = rate * med[0] / rate[0]
    ys = np.concatenate([med, q90, ref])
    ys = ys[ys > 0]
    sx, _ = _scale(n, PAD, W - PAD / 2)
    sy, (ylo, yhi) = _scale(ys if ys.size else np.array([1.0]), H - PAD, PAD / 2)

    def path(vals, color, dash=""):
        pts = [(float(sx(a)), float(sy(v))) for a, v in zip(n, vals) if v > 0]
        d = " ".join(f"{'M' if i == 0 else 'L'}{x:.2f},{y:.2f}" for i, (x, y) in enumerate(pts))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        marks = "".join(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}"/>'
                        for x, y in pts)
        return f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"{dash_attr}/>' + marks

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD / 2}" y2="{H - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{H - PAD}" x2="{PAD}" y2="{PAD / 2}" stroke="black"/>',
    ]
    for a in n:
        x = float(sx(a))
        parts.append(f'<text x="{x:.2f}" y="{H - PAD + 16}" text-anchor="middle">{int(a)}</text>')
    for e in range(math.floor(ylo), math.ceil(yhi) + 1):
        if ylo <= e <= yhi:
            y = float(sy(10.0 ** e))
            parts.append(f'<text x="{PAD - 6}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>')
    parts.append(path(med, "#1f77b4"))
    parts.append(path(q90, "#ff7f0e", "4 3"))
    parts.append(path(ref, "#555555", "2 2"))
    parts.append(f'<text x="{W / 2:.0f}" y="{H - 12}" text-anchor="middle">n</text>')
    parts.append(f'<text x="{PAD}" y="14">{statistic}: median (solid), q90 (dashed), '
                 f'claimed rate (dotted)</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
