"""Hand-rolled SVG output: decision-surface plots and learning-curve plots.

Everything is emitted with fixed decimal formatting so that a given input
always produces identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

STRATEGY_COLORS = {
    "xgl_simulated": "#c0392b",
    "xgl_human": "#8e44ad",
    "active_uncertainty": "#2e6da4",
    "guided": "#27824f",
    "random": "#7f8c8d",
    "passive": "#555555",
}
_FALLBACK_COLOR = "#333333"
_RED_FILL = "#d14b4b"
_BLUE_FILL = "#2b4d9e"
_RING = "#e6c229"


def strategy_color(name: str) -> str:
    return STRATEGY_COLORS.get(name, _FALLBACK_COLOR)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


class _Svg:
    def __init__(self, width: int, height: int) -> None:
        self.width = width
        self.height = height
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        ]

    def rect(self, x, y, w, h, fill, opacity=None):
        extra = f' fill-opacity="{opacity}"' if opacity is not None else ""
        self.parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
            f'height="{_fmt(h)}" fill="{fill}"{extra}/>'
        )

    def circle(self, cx, cy, r, fill="none", stroke=None, stroke_width=1.0):
        pen = f' stroke="{stroke}" stroke-width="{_fmt(stroke_width)}"' if stroke else ""
        self.parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="{fill}"{pen}/>')

    def line(self, x1, y1, x2, y2, stroke, width=1.0, dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{_fmt(width)}"{extra}/>'
        )

    def polyline(self, pts, stroke, width=1.5, dash=None):
        body = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<polyline points="{body}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}"{extra}/>'
        )

    def polygon(self, pts, fill, opacity):
        body = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.parts.append(f'<polygon points="{body}" fill="{fill}" fill-opacity="{opacity}"/>')

    def text(self, x, y, content, size=12, anchor="start", fill="#222222"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="sans-serif" '
            f'font-size="{size}" text-anchor="{anchor}" fill="{fill}">{_esc(content)}</text>'
        )

    def tostring(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _heat_color(t: float) -> str:
    """Diverging white-anchored map: t in [-1, 1], negative blue, positive red."""
    t = max(-1.0, min(1.0, t))
    if t >= 0:
        r, g, b = 255.0, 255 - t * 135, 255 - t * 150
    else:
        r, g, b = 255 + t * 165, 255 + t * 130, 255 + t * 35
    return f"#{int(round(r)):02x}{int(round(g)):02x}{int(round(b)):02x}"


def render_surface(
    values: np.ndarray,
    resolution: int,
    points_xy: np.ndarray,
    points_labels: np.ndarray,
    labeled_xy: np.ndarray | None = None,
    medoid_xy: np.ndarray | None = None,
    title: str = "",
) -> str:
    """Decision-value heatmap over [0,1]^2 with the dataset scatter on top.

    ``values`` is row-major with rows indexing x2 and columns x1; labeled
    points get a yellow ring, medoids a black cross.
    """
    size, margin = 520, 40
    span = size - 2 * margin
    svg = _Svg(size, size)

    def px(x1: float) -> float:
        return margin + x1 * span

    def py(x2: float) -> float:
        return margin + (1.0 - x2) * span

    vmax = float(np.abs(values).max())
    scale = vmax if vmax > 0 else 1.0
    cell = span / resolution
    grid = values.reshape(resolution, resolution)
    for r in range(resolution):
        y_top = py((r + 1) / resolution)
        for c in range(resolution):
            color = _heat_color(float(grid[r, c]) / scale)
            svg.rect(margin + c * cell, y_top, cell + 0.5, cell + 0.5, color)

    for (x1, x2), label in zip(points_xy, points_labels):
        svg.circle(px(x1), py(x2), 2.0, fill=_RED_FILL if label > 0 else _BLUE_FILL)

    if labeled_xy is not None:
        for x1, x2 in labeled_xy:
            svg.circle(px(x1), py(x2), 4.5, fill="none", stroke=_RING, stroke_width=1.8)

    if medoid_xy is not None:
        for x1, x2 in medoid_xy:
            cx, cy, arm = px(x1), py(x2), 5.0
            svg.line(cx - arm, cy - arm, cx + arm, cy + arm, "#111111", 1.8)
            svg.line(cx - arm, cy + arm, cx + arm, cy - arm, "#111111", 1.8)

    svg.rect(margin, margin, span, span, "none")
    svg.line(margin, margin, margin, margin + span, "#222222")
    svg.line(margin, margin + span, margin + span, margin + span, "#222222")
    if title:
        svg.text(size / 2, margin - 14, title, size=13, anchor="middle")
    return svg.tostring()


@dataclass
class CurveSeries:
    """One plottable learning curve: per-iteration mean with optional band."""

    name: str
    mean: np.ndarray
    std: np.ndarray | None = None
    color: str = _FALLBACK_COLOR
    switch_iteration: float | None = None
    dash: str | None = None


def render_curves(series: list[CurveSeries], title: str = "") -> str:
    """F1-versus-iteration chart; switch iterations are marked with an arrow."""
    width, height = 640, 420
    left, right, top, bottom = 56, 20, 36, 44
    plot_w, plot_h = width - left - right, height - top - bottom
    max_iter = max(max(len(s.mean) - 1, 1) for s in series)

    svg = _Svg(width, height)

    def px(it: float) -> float:
        return left + (it / max_iter) * plot_w

    def py(f1: float) -> float:
        return top + (1.0 - f1) * plot_h

    for tick in range(0, 11, 2):
        f1 = tick / 10
        svg.line(left, py(f1), left + plot_w, py(f1), "#dddddd", 0.8)
        svg.text(left - 8, py(f1) + 4, f"{f1:.1f}", size=11, anchor="end")
    step = max(1, int(np.ceil(max_iter / 6 / 25)) * 25) if max_iter >= 25 else max(1, max_iter // 5)
    for it in range(0, max_iter + 1, step):
        svg.line(px(it), top, px(it), top + plot_h, "#eeeeee", 0.8)
        svg.text(px(it), top + plot_h + 16, str(it), size=11, anchor="middle")
    svg.line(left, top, left, top + plot_h, "#222222")
    svg.line(left, top + plot_h, left + plot_w, top + plot_h, "#222222")
    svg.text(left + plot_w / 2, height - 10, "iteration", size=12, anchor="middle")
    svg.text(14, top + plot_h / 2, "F1", size=12, anchor="middle")

    for s in series:
        iters = np.arange(len(s.mean))
        if s.std is not None and len(s.mean) > 1:
            upper = [(px(i), py(min(1.0, m + d))) for i, m, d in zip(iters, s.mean, s.std)]
            lower = [(px(i), py(max(0.0, m - d))) for i, m, d in zip(iters, s.mean, s.std)]
            svg.polygon(upper + lower[::-1], s.color, 0.12)
        if len(s.mean) == 1:
            svg.line(px(0), py(s.mean[0]), px(max_iter), py(s.mean[0]), s.color, 1.5, dash=s.dash or "6,4")
        else:
            svg.polyline([(px(i), py(m)) for i, m in zip(iters, s.mean)], s.color, 1.8, dash=s.dash)
        if s.switch_iteration is not None and len(s.mean) > 1:
            it = min(max(s.switch_iteration, 0.0), float(max_iter))
            yv = float(s.mean[min(int(round(it)), len(s.mean) - 1)])
            ax, ay = px(it), py(yv)
            svg.line(ax, ay - 34, ax, ay - 9, s.color, 1.6)
            svg.polygon([(ax - 4, ay - 11), (ax + 4, ay - 11), (ax, ay - 4)], s.color, 1.0)

    legend_y = top + 6
    for s in series:
        svg.line(left + plot_w - 150, legend_y, left + plot_w - 126, legend_y, s.color, 3.0, dash=s.dash)
        svg.text(left + plot_w - 120, legend_y + 4, s.name, size=11)
        legend_y += 16
    if title:
        svg.text(width / 2, 20, title, size=13, anchor="middle")
    return svg.tostring()
