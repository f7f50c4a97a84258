"""Drawing recipes for the seven bundle figures.

Each :class:`FigureDef` states, for one CSV of the data bundle, the exact
header it must carry and how its rows become plot geometry: which column
is the x axis, which the y axis, which columns identify a series, which
rows are kept, and how the axes are scaled. The renderer consumes these
tables verbatim; no figure knowledge lives anywhere else.

This module, like the rest of the package, computes no values. The d
axes of figures 3 through 8 are log scaled because the interesting
thresholds sit below d = 0.05 and the bundle samples d geometrically;
figure 2 keeps a linear axis so the sigmoid shape of the cost curves
stays recognizable.
"""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["FigureDef", "FIGURES", "LINESTYLE_TOKENS"]

# Linestyle by the value of a definition's style column. Values not
# listed here are drawn solid. The zero-maintenance baseline is dotted
# so the family of monitored curves reads against it; numeric-method
# curves are dotted and single-stage closed forms dashed so that the
# three methods remain distinguishable where they overlap.
LINESTYLE_TOKENS = {
    "zero": ":",
    "numeric": ":",
    "closed_N1_rescaled": "--",
    "closed_Nn": "-",
    "N1": "--",
    "Nn": "-",
}


@dataclass(frozen=True)
class FigureDef:
    """How one bundle CSV is validated and drawn.

    Attributes:
        fig_id: Bundle figure number, 2 through 8.
        columns: Exact expected CSV header, in order.
        kind: ``lines`` (one line per series), ``category_scatter``
            (points colored by a categorical column), or
            ``regime_strip`` (categorical y strip with vertical
            boundary markers).
        x_col: Column drawn on the x axis.
        y_col: Column drawn on the y axis, ``None`` when the y axis is
            the series category itself.
        series_cols: Columns whose joint value identifies a series.
        finite_cols: Columns that must hold finite numbers for a row to
            be drawn; rows failing this are dropped.
        keep_col: Optional 0/1 column; only rows with value ``1`` are
            drawn (used to cut curves back to their physical range).
        style_col: Optional column whose value picks a linestyle via
            ``LINESTYLE_TOKENS``.
        boundary_cols: Columns holding x positions to mark with
            vertical reference lines (``regime_strip`` only).
        x_scale: ``linear`` or ``log``.
        y_label: Y axis caption; the x axis is always the damage
            probability.
        title: Figure caption.
        zero_line: Draw a horizontal reference line at zero.
    """

    fig_id: int
    columns: tuple[str, ...]
    kind: str
    x_col: str
    y_col: str | None
    series_cols: tuple[str, ...]
    finite_cols: tuple[str, ...]
    keep_col: str | None = None
    style_col: str | None = None
    boundary_cols: tuple[str, ...] = ()
    x_scale: str = "linear"
    y_label: str = ""
    title: str = ""
    zero_line: bool = False


FIGURES = {
    2: FigureDef(
        fig_id=2,
        columns=("d", "series", "unit_cost"),
        kind="lines",
        x_col="d",
        y_col="unit_cost",
        series_cols=("series",),
        finite_cols=("d", "unit_cost"),
        style_col="series",
        x_scale="linear",
        y_label="unit cost",
        title="monitored chains against zero maintenance",
    ),
    3: FigureDef(
        fig_id=3,
        columns=("d", "series", "cost_diff"),
        kind="lines",
        x_col="d",
        y_col="cost_diff",
        series_cols=("series",),
        finite_cols=("d", "cost_diff"),
        x_scale="log",
        y_label="unit cost difference",
        title="cost advantage of monitoring",
        zero_line=True,
    ),
    4: FigureDef(
        fig_id=4,
        columns=("d", "kappa", "value", "method", "in_range"),
        kind="lines",
        x_col="d",
        y_col="value",
        series_cols=("kappa", "method"),
        finite_cols=("d", "value"),
        keep_col="in_range",
        style_col="method",
        x_scale="log",
        y_label="critical monitoring effectiveness",
        title="critical curves by reputation strength",
    ),
    5: FigureDef(
        fig_id=5,
        columns=("d", "strategy", "unit_cost"),
        kind="lines",
        x_col="d",
        y_col="unit_cost",
        series_cols=("strategy",),
        finite_cols=("d", "unit_cost"),
        x_scale="log",
        y_label="unit cost",
        title="strategy costs toward saturation",
    ),
    6: FigureDef(
        fig_id=6,
        columns=("d", "e_i", "em_crit", "dominant_strategy"),
        kind="category_scatter",
        x_col="d",
        y_col="e_i",
        series_cols=("dominant_strategy",),
        finite_cols=("d", "e_i"),
        x_scale="log",
        y_label="inspection effectiveness",
        title="dominant strategy over damage and inspection",
    ),
    7: FigureDef(
        fig_id=7,
        columns=("d", "space", "kappa", "balance", "value", "in_range"),
        kind="lines",
        x_col="d",
        y_col="value",
        series_cols=("space", "kappa", "balance"),
        finite_cols=("d", "value"),
        keep_col="in_range",
        style_col="space",
        x_scale="log",
        y_label="critical monitoring effectiveness",
        title="thresholds under shifted cost balance",
    ),
    8: FigureDef(
        fig_id=8,
        columns=("d", "field", "a", "b"),
        kind="regime_strip",
        x_col="d",
        y_col=None,
        series_cols=("field",),
        finite_cols=("d", "a", "b"),
        boundary_cols=("a", "b"),
        x_scale="log",
        y_label="regime",
        title="regime fields across the damage spectrum",
    ),
}
