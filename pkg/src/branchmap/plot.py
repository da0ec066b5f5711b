"""Static SVG charts for trajectories and stopping-time profiles.

Output is a standalone SVG 1.1 document, byte-identical for identical
inputs: coordinates are formatted to fixed precision and tick positions
depend only on the data range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from branchmap.errors import ScaleError

LINEAR = "linear"
LOG = "log"

_MARGIN_LEFT = 90
_MARGIN_RIGHT = 20
_MARGIN_TOP = 20
_MARGIN_BOTTOM = 50


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: rows of (x, y), a mark kind, and a y-axis scale."""

    rows: tuple[tuple[int, int], ...]
    kind: str  # "line" | "points"
    scale: str = LINEAR
    x_label: str = "x"
    y_label: str = "y"
    width: int = 960
    height: int = 540


def render_plot_svg(spec: PlotSpec) -> str:
    if not spec.rows:
        raise ValueError("nothing to plot: rows are empty")
    if spec.kind not in ("line", "points"):
        raise ValueError(f"kind must be 'line' or 'points', got {spec.kind!r}")
    if spec.scale not in (LINEAR, LOG):
        raise ValueError(f"scale must be 'linear' or 'log', got {spec.scale!r}")
    if spec.scale == LOG:
        low = min(y for _, y in spec.rows)
        if low < 1:
            raise ScaleError(f"log scale needs all values >= 1, found {low}")

    xs = [x for x, _ in spec.rows]
    ys = [y for _, y in spec.rows]
    x_ticks = _linear_ticks(max(xs))
    y_ticks = _log_ticks(max(ys)) if spec.scale == LOG else _linear_ticks(max(ys))

    plot_w = spec.width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = spec.height - _MARGIN_TOP - _MARGIN_BOTTOM
    x_span = x_ticks[-1] - x_ticks[0] or 1

    def px(x: float) -> float:
        return _MARGIN_LEFT + (x - x_ticks[0]) / x_span * plot_w

    if spec.scale == LOG:
        y_lo = math.log10(y_ticks[0])
        y_span = math.log10(y_ticks[-1]) - y_lo or 1

        def py(y: float) -> float:
            return _MARGIN_TOP + plot_h - (math.log10(y) - y_lo) / y_span * plot_h

    else:
        y_span = y_ticks[-1] - y_ticks[0] or 1

        def py(y: float) -> float:
            return _MARGIN_TOP + plot_h - (y - y_ticks[0]) / y_span * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>',
    ]
    axis_y = _MARGIN_TOP + plot_h
    out.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{axis_y}" x2="{_MARGIN_LEFT + plot_w}" '
        f'y2="{axis_y}" stroke="black"/>'
    )
    out.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" '
        f'y2="{axis_y}" stroke="black"/>'
    )
    for t in x_ticks:
        x = _fmt(px(t))
        out.append(f'<line x1="{x}" y1="{axis_y}" x2="{x}" y2="{axis_y + 5}" stroke="black"/>')
        out.append(
            f'<text x="{x}" y="{axis_y + 20}" font-size="12" text-anchor="middle">'
            f"{_fmt_tick(t)}</text>"
        )
    for t in y_ticks:
        y = _fmt(py(t))
        out.append(
            f'<line x1="{_MARGIN_LEFT - 5}" y1="{y}" x2="{_MARGIN_LEFT}" y2="{y}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_MARGIN_LEFT - 8}" y="{y}" font-size="12" text-anchor="end" '
            f'dominant-baseline="middle">{_fmt_tick(t)}</text>'
        )
    out.append(
        f'<text x="{_MARGIN_LEFT + plot_w // 2}" y="{spec.height - 10}" font-size="13" '
        f'text-anchor="middle">{spec.x_label}</text>'
    )
    out.append(
        f'<text x="18" y="{_MARGIN_TOP + plot_h // 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h // 2})">{spec.y_label}</text>'
    )
    if spec.kind == "line":
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in spec.rows)
        out.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1"/>')
    else:
        for x, y in spec.rows:
            out.append(
                f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="1.5" fill="steelblue"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _fmt_tick(t: float | int) -> str:
    if isinstance(t, int):
        return str(t)
    if t.is_integer():
        return str(int(t))
    return f"{t:g}"


def _linear_ticks(vmax: float) -> list[float]:
    """Round-number ticks from 0 to a nice ceiling covering vmax."""
    if vmax <= 0:
        return [0, 1]
    raw = vmax / 5
    mag = 10 ** math.floor(math.log10(raw))  # int for ranges >= 5, float below
    step = next(m * mag for m in (1, 2, 5, 10) if raw <= m * mag)
    count = math.ceil(vmax / step)
    return [i * step for i in range(count + 1)]


def _log_ticks(vmax: float) -> list[int]:
    """Decade ticks from 1 up to the first power of ten at or above vmax.

    Integer powers, so tick labels stay exact in full decimal.
    """
    top = 1
    while 10**top < vmax:
        top += 1
    return [10**j for j in range(top + 1)]
