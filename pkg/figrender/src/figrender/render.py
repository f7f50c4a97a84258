"""Turning a figure spec into an image file.

Rendering is a pure function of the spec: the same CSV bytes give the
same series, the same data extents, and an image of the same size. The
module draws what :mod:`figrender.csvdata` loaded and computes nothing
from it; the only transformation applied to data is axis scaling, and
that is delegated to matplotlib.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure

from .csvdata import FigureSpec
from .defs import FIGURES, LINESTYLE_TOKENS, FigureDef

__all__ = ["RenderReport", "render"]

X_LABEL = "damage probability d"


@dataclass(frozen=True)
class RenderReport:
    """What one render call drew, for callers and structural checks.

    ``series`` lists the drawn series labels in draw order; ``x_range``
    and ``y_range`` are the data extents matplotlib recorded for the
    plotted series, before reference lines were added (``y_range`` is
    ``None`` for categorical y axes); ``n_marker_lines`` counts the
    reference lines; the pixel sizes are read back from the written
    file.
    """

    fig_id: int
    out_path: Path
    series: tuple[str, ...]
    x_range: tuple[float, float]
    y_range: tuple[float, float] | None
    x_scale: str
    n_marker_lines: int
    width_px: int
    height_px: int


def _draw_lines(ax, spec: FigureSpec, d: FigureDef) -> None:
    for label in spec.series:
        rows = spec.rows_by_series[label]
        xs = [row.numbers[d.x_col] for row in rows]
        ys = [row.numbers[d.y_col] for row in rows]
        style = "-"
        if d.style_col is not None:
            style = LINESTYLE_TOKENS.get(rows[0].values[d.style_col], "-")
        ax.plot(xs, ys, linestyle=style, label=label)


def _draw_category_scatter(ax, spec: FigureSpec, d: FigureDef) -> None:
    for label in spec.series:
        rows = spec.rows_by_series[label]
        xs = [row.numbers[d.x_col] for row in rows]
        ys = [row.numbers[d.y_col] for row in rows]
        ax.scatter(xs, ys, s=14.0, label=label)


def _draw_regime_strip(ax, spec: FigureSpec, d: FigureDef) -> None:
    category_col = d.series_cols[0]
    for label in spec.series:
        rows = spec.rows_by_series[label]
        xs = [row.numbers[d.x_col] for row in rows]
        cats = [row.values[category_col] for row in rows]
        ax.scatter(xs, cats, s=14.0, label=label)


_DRAWERS = {
    "lines": _draw_lines,
    "category_scatter": _draw_category_scatter,
    "regime_strip": _draw_regime_strip,
}


def render(spec: FigureSpec) -> RenderReport:
    """Write the image for ``spec`` and report what was drawn."""
    d = FIGURES[spec.fig_id]
    fig = Figure(figsize=(8.0, 5.0), dpi=120, layout="constrained")
    ax = fig.add_subplot()
    ax.set_xscale(d.x_scale)

    _DRAWERS[d.kind](ax, spec, d)

    bounds = ax.dataLim
    x_range = (bounds.x0, bounds.x1)
    y_range = None
    if d.y_col is not None:
        y_range = (bounds.y0, bounds.y1)

    markers = []
    for position in spec.boundaries:
        markers.append(ax.axvline(position, color="0.3", linestyle="--",
                                  linewidth=1.0, label="_boundary"))
    if d.zero_line:
        markers.append(ax.axhline(0.0, color="0.3", linestyle="--",
                                  linewidth=1.0, label="_reference"))

    ax.set_xlabel(X_LABEL)
    ax.set_ylabel(d.y_label)
    ax.set_title(d.title)
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize="small", framealpha=0.9)
    fig.savefig(spec.out_path)

    artists = [*ax.get_lines(), *ax.collections]
    series = tuple(
        str(a.get_label()) for a in artists
        if not str(a.get_label()).startswith("_")
    )
    head = spec.out_path.read_bytes()
    width_px, height_px = struct.unpack(">II", head[16:24])
    return RenderReport(
        fig_id=spec.fig_id,
        out_path=spec.out_path,
        series=series,
        x_range=x_range,
        y_range=y_range,
        x_scale=d.x_scale,
        n_marker_lines=len(markers),
        width_px=width_px,
        height_px=height_px,
    )
