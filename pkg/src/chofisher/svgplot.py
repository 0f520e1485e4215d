"""A small deterministic SVG line-chart writer (log-scaled x axis)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 150, 40, 50


@dataclass(frozen=True)
class Series:
    name: str
    x: tuple[float, ...]
    y: tuple[float, ...]
    # horizontal reference level drawn dashed (e.g. the unconfined limit)
    limit: float | None = None


def _num(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _log_y(series: list[Series]) -> bool:
    ys = [v for s in series for v in s.y] + [s.limit for s in series if s.limit is not None]
    lo, hi = min(ys), max(ys)
    return lo > 0 and hi / lo > 100


def line_chart(series: list[Series], title: str, xlabel: str, ylabel: str) -> str:
    """Render ``series`` as an SVG document string."""
    log_y = _log_y(series)
    fy = (lambda v: math.log10(v)) if log_y else (lambda v: v)
    xs = [math.log10(v) for s in series for v in s.x]
    ys = [fy(v) for s in series for v in s.y] + [fy(s.limit) for s in series if s.limit is not None]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(v: float) -> float:
        return MARGIN_L + (math.log10(v) - x0) / (x1 - x0) * pw

    def py(v: float) -> float:
        return MARGIN_T + (1 - (fy(v) - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for e in range(math.floor(x0), math.ceil(x1) + 1):
        v = 10.0**e
        if x0 - 1e-12 <= e <= x1 + 1e-12:
            x = _num(px(v))
            out.append(f'<line x1="{x}" y1="{MARGIN_T + ph}" x2="{x}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{x}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{v:g}</text>')
    if log_y:
        yticks = [10.0**e for e in range(math.ceil(y0), math.floor(y1) + 1)]
    else:
        yticks = _nice_ticks(y0, y1)
    for v in yticks:
        y = _num(py(v))
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{y}" x2="{MARGIN_L}" y2="{y}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{y}" text-anchor="end" dominant-baseline="middle">{v:g}</text>')
    out.append(
        f'<text x="{MARGIN_L + pw / 2:.0f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="18" y="{MARGIN_T + ph / 2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_T + ph / 2:.0f})">{escape(ylabel)}</text>'
    )
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_num(px(a))},{_num(py(b))}" for a, b in zip(s.x, s.y))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if s.limit is not None:
            y = _num(py(s.limit))
            out.append(
                f'<line x1="{MARGIN_L}" y1="{y}" x2="{MARGIN_L + pw}" y2="{y}" stroke="{color}" '
                f'stroke-dasharray="4 3" stroke-width="0.8"/>'
            )
        ly = MARGIN_T + 14 + 18 * i
        lx = MARGIN_L + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly}" dominant-baseline="middle">{escape(s.name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
