"""Minimal self-contained SVG emitters for sweep and alpha-study plots."""

import math
from typing import Sequence

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 80, 24, 44, 56


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="13">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="24" text-anchor="middle" font-size="15">{title}</text>',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        f'fill="none" stroke="black"/>',
    ]


def _scale(lo: float, hi: float, pixel_lo: float, pixel_hi: float):
    span = hi - lo if hi > lo else 1.0

    def to_px(v: float) -> float:
        return pixel_lo + (v - lo) / span * (pixel_hi - pixel_lo)

    return to_px


def _axis_labels(parts: list[str], xlabel: str, ylabel: str) -> None:
    parts.append(
        f'<text x="{(_ML + _W - _MR) / 2}" y="{_H - 14}" text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="20" y="{(_MT + _H - _MB) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 20 {(_MT + _H - _MB) / 2})">{ylabel}</text>'
    )


def loglog_svg(
    eps: Sequence[float],
    errors: Sequence[float],
    title: str,
    ylabel: str,
    fit_rate: float | None = None,
    fit_intercept: float | None = None,
) -> str:
    """Log-log scatter of error vs epsilon with an optional fitted line."""
    xs = [math.log10(e) for e in eps]
    ys = [math.log10(v) for v in errors]
    x_lo, x_hi = min(xs) - 0.1, max(xs) + 0.1
    y_lo, y_hi = min(ys) - 0.2, max(ys) + 0.2
    to_x = _scale(x_lo, x_hi, _ML, _W - _MR)
    to_y = _scale(y_lo, y_hi, _H - _MB, _MT)

    parts = _header(title)
    for decade in range(math.ceil(x_lo), math.floor(x_hi) + 1):
        px = to_x(decade)
        parts.append(
            f'<line x1="{px:.1f}" y1="{_MT}" x2="{px:.1f}" y2="{_H - _MB}" '
            f'stroke="#ddd"/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{_H - _MB + 18}" text-anchor="middle">1e{decade}</text>'
        )
    for decade in range(math.ceil(y_lo), math.floor(y_hi) + 1):
        py = to_y(decade)
        parts.append(
            f'<line x1="{_ML}" y1="{py:.1f}" x2="{_W - _MR}" y2="{py:.1f}" stroke="#ddd"/>'
        )
        parts.append(
            f'<text x="{_ML - 6}" y="{py + 4:.1f}" text-anchor="end">1e{decade}</text>'
        )
    if fit_rate is not None and fit_intercept is not None:
        ln10 = math.log(10.0)
        y1 = (fit_intercept + fit_rate * min(xs) * ln10) / ln10
        y2 = (fit_intercept + fit_rate * max(xs) * ln10) / ln10
        parts.append(
            f'<line x1="{to_x(min(xs)):.1f}" y1="{to_y(y1):.1f}" '
            f'x2="{to_x(max(xs)):.1f}" y2="{to_y(y2):.1f}" stroke="#c00" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{_W - _MR - 8}" y="{_MT + 18}" text-anchor="end" fill="#c00">'
            f"slope {fit_rate:.3f}</text>"
        )
    for x, y in zip(xs, ys):
        parts.append(f'<circle cx="{to_x(x):.1f}" cy="{to_y(y):.1f}" r="4" fill="#036"/>')
    _axis_labels(parts, "epsilon", ylabel)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def alpha_svg(alphas: Sequence[float], rates: Sequence[float], title: str) -> str:
    """Fitted rate vs alpha with the (3+alpha)/4 reference line, linear axes."""
    ref = [(3.0 + a) / 4.0 for a in alphas]
    x_lo, x_hi = min(alphas) - 0.05, max(alphas) + 0.05
    y_all = list(rates) + ref
    y_lo, y_hi = min(y_all) - 0.05, max(y_all) + 0.05
    to_x = _scale(x_lo, x_hi, _ML, _W - _MR)
    to_y = _scale(y_lo, y_hi, _H - _MB, _MT)

    parts = _header(title)
    for i in range(5):
        xv = x_lo + (x_hi - x_lo) * i / 4
        yv = y_lo + (y_hi - y_lo) * i / 4
        parts.append(
            f'<text x="{to_x(xv):.1f}" y="{_H - _MB + 18}" text-anchor="middle">{xv:.2f}</text>'
        )
        parts.append(
            f'<text x="{_ML - 6}" y="{to_y(yv) + 4:.1f}" text-anchor="end">{yv:.2f}</text>'
        )
    a_sorted = sorted(alphas)
    pts = " ".join(f"{to_x(a):.1f},{to_y((3.0 + a) / 4.0):.1f}" for a in a_sorted)
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#c00" stroke-width="1.5"/>')
    parts.append(
        f'<text x="{_W - _MR - 8}" y="{_MT + 18}" text-anchor="end" fill="#c00">(3+a)/4</text>'
    )
    for a, r in zip(alphas, rates):
        parts.append(f'<circle cx="{to_x(a):.1f}" cy="{to_y(r):.1f}" r="4" fill="#036"/>')
    _axis_labels(parts, "alpha", "fitted L2 rate")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
