"""Minimal native SVG charts (polylines, axes, tick labels).

No plotting dependency: figures are simple enough that hand-rolled SVG keeps
the toolchain small, and every plotted number is also emitted as a CSV
sidecar by the CLI, so the figures are never the only record.
"""

from __future__ import annotations

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 64.0, 16.0, 28.0, 44.0


def _limits(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    if lo == hi:
        pad = 1.0 if lo == 0.0 else abs(lo) * 0.1
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


class _Panel:
    def __init__(self, x0, y0, width, height, xlim, ylim):
        self.x0, self.y0 = x0, y0
        self.width, self.height = width, height
        self.xlim, self.ylim = xlim, ylim

    def px(self, x):
        frac = (x - self.xlim[0]) / (self.xlim[1] - self.xlim[0])
        return self.x0 + frac * self.width

    def py(self, y):
        frac = (y - self.ylim[0]) / (self.ylim[1] - self.ylim[0])
        return self.y0 + self.height - frac * self.height

    def polyline(self, xs, ys, color) -> str:
        points = " ".join(f"{self.px(x):.3f},{self.py(y):.3f}" for x, y in zip(xs, ys))
        return (f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                f'points="{points}"/>')

    def frame_and_ticks(self, xlabel: str, ylabel: str, title: str = "") -> list[str]:
        parts = [f'<rect x="{self.x0:.3f}" y="{self.y0:.3f}" width="{self.width:.3f}" '
                 f'height="{self.height:.3f}" fill="none" stroke="#444444"/>']
        for frac in np.linspace(0.0, 1.0, 5):
            xv = self.xlim[0] + frac * (self.xlim[1] - self.xlim[0])
            yv = self.ylim[0] + frac * (self.ylim[1] - self.ylim[0])
            xp, yp = self.px(xv), self.py(yv)
            parts.append(f'<line x1="{xp:.3f}" y1="{self.y0 + self.height:.3f}" '
                         f'x2="{xp:.3f}" y2="{self.y0 + self.height + 4:.3f}" stroke="#444444"/>')
            parts.append(f'<text x="{xp:.3f}" y="{self.y0 + self.height + 16:.3f}" '
                         f'font-size="10" text-anchor="middle">{xv:.4g}</text>')
            parts.append(f'<line x1="{self.x0 - 4:.3f}" y1="{yp:.3f}" '
                         f'x2="{self.x0:.3f}" y2="{yp:.3f}" stroke="#444444"/>')
            parts.append(f'<text x="{self.x0 - 6:.3f}" y="{yp + 3:.3f}" '
                         f'font-size="10" text-anchor="end">{yv:.4g}</text>')
        parts.append(f'<text x="{self.x0 + self.width / 2:.3f}" '
                     f'y="{self.y0 + self.height + 32:.3f}" font-size="12" '
                     f'text-anchor="middle">{xlabel}</text>')
        parts.append(f'<text x="{self.x0 - 48:.3f}" y="{self.y0 + self.height / 2:.3f}" '
                     f'font-size="12" text-anchor="middle" '
                     f'transform="rotate(-90 {self.x0 - 48:.3f} '
                     f'{self.y0 + self.height / 2:.3f})">{ylabel}</text>')
        if title:
            parts.append(f'<text x="{self.x0 + self.width / 2:.3f}" y="{self.y0 - 8:.3f}" '
                         f'font-size="12" text-anchor="middle">{title}</text>')
        return parts


def _document(width: float, height: float, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
            f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">'
            '<rect width="100%" height="100%" fill="white"/>')
    return head + "".join(body) + "</svg>\n"


def line_chart(series: list[tuple[str, np.ndarray, np.ndarray]],
               xlabel: str, ylabel: str) -> str:
    """One panel with a polyline per (label, xs, ys) entry and a legend."""
    width, height = 640.0, 400.0
    all_x = np.concatenate([np.asarray(xs, dtype=float) for _, xs, _ in series])
    all_y = np.concatenate([np.asarray(ys, dtype=float) for _, _, ys in series])
    panel = _Panel(_MARGIN_LEFT, _MARGIN_TOP,
                   width - _MARGIN_LEFT - _MARGIN_RIGHT,
                   height - _MARGIN_TOP - _MARGIN_BOTTOM,
                   _limits(all_x), _limits(all_y))
    body = panel.frame_and_ticks(xlabel, ylabel)
    for k, (label, xs, ys) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        body.append(panel.polyline(np.asarray(xs, float), np.asarray(ys, float), color))
        lx = panel.x0 + panel.width - 150.0
        ly = panel.y0 + 16.0 + 16.0 * k
        body.append(f'<line x1="{lx:.3f}" y1="{ly - 4:.3f}" x2="{lx + 24:.3f}" '
                    f'y2="{ly - 4:.3f}" stroke="{color}" stroke-width="1.5"/>')
        body.append(f'<text x="{lx + 30:.3f}" y="{ly:.3f}" font-size="11">{label}</text>')
    return _document(width, height, body)


def torque_panels(sample_idx: np.ndarray, actual: np.ndarray, predicted: np.ndarray,
                  names: list[str]) -> str:
    """Stacked actual-vs-predicted panels, one per torque column."""
    n_panels = actual.shape[1]
    panel_h, width = 150.0, 720.0
    height = _MARGIN_TOP + n_panels * (panel_h + 36.0) + _MARGIN_BOTTOM
    body: list[str] = []
    xs = np.asarray(sample_idx, dtype=float)
    for k in range(n_panels):
        y0 = _MARGIN_TOP + k * (panel_h + 36.0)
        both = np.concatenate([actual[:, k], predicted[:, k]])
        panel = _Panel(_MARGIN_LEFT, y0, width - _MARGIN_LEFT - _MARGIN_RIGHT,
                       panel_h, _limits(xs), _limits(both))
        xlabel = "sample" if k == n_panels - 1 else ""
        body.extend(panel.frame_and_ticks(xlabel, "N m", title=names[k]))
        body.append(panel.polyline(xs, actual[:, k], _COLORS[0]))
        body.append(panel.polyline(xs, predicted[:, k], _COLORS[1]))
    lx = _MARGIN_LEFT
    body.append(f'<text x="{lx:.3f}" y="16" font-size="11" fill="{_COLORS[0]}">actual</text>')
    body.append(f'<text x="{lx + 60:.3f}" y="16" font-size="11" '
                f'fill="{_COLORS[1]}">predicted</text>')
    return _document(width, height, body)
