"""Bundle CSV loading, schema validation, and figure-spec assembly.

The data bundle is the set of ``fig2.csv`` through ``fig8.csv`` files
written by ``chaincost figdata``. Files start with ``#`` comment lines
carrying provenance, then an exact header, then data rows. This module
turns one such file into a :class:`FigureSpec`: rows grouped into
series, axis extents, and boundary positions, all read straight off the
file. Anything off-schema raises :class:`~figrender.errors.SchemaError`
naming the offending column; a file with nothing drawable raises
:class:`~figrender.errors.DataError` before any output exists.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from itertools import zip_longest
from pathlib import Path

from .defs import FIGURES, FigureDef
from .errors import DataError, SchemaError

__all__ = ["Row", "FigureSpec", "csv_name", "image_name", "load_rows", "build_spec"]


def csv_name(fig_id: int) -> str:
    """Bundle file name for a figure id."""
    return f"fig{fig_id}.csv"


def image_name(fig_id: int) -> str:
    """Output image name for a figure id."""
    return f"fig{fig_id}.png"


@dataclass(frozen=True)
class Row:
    """One kept data row: raw strings plus the parsed numeric columns."""

    values: dict[str, str]
    numbers: dict[str, float]


@dataclass(frozen=True)
class FigureSpec:
    """Everything the renderer needs for one figure.

    ``series`` lists labels in first-appearance order; ``x_range`` and
    ``y_range`` are the extents of the kept rows (``y_range`` is
    ``None`` when the y axis is categorical); ``boundaries`` holds the
    distinct vertical marker positions for strip figures.
    """

    fig_id: int
    csv_path: Path
    out_path: Path
    series: tuple[str, ...]
    rows_by_series: dict[str, tuple[Row, ...]]
    x_range: tuple[float, float]
    y_range: tuple[float, float] | None
    boundaries: tuple[float, ...]


def _numbered_lines(path: Path) -> list[tuple[int, str]]:
    """Non-blank, non-comment lines with their 1-based file line numbers."""
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise SchemaError(f"{path.name}: file not found") from None
    kept = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        kept.append((lineno, line))
    return kept


def _check_header(found: list[str], d: FigureDef, name: str) -> None:
    for pos, (want, got) in enumerate(zip_longest(d.columns, found)):
        if want is None:
            raise SchemaError(f"{name}: unexpected extra column '{got}'")
        if got is None:
            raise SchemaError(f"{name}: missing column '{want}'")
        if want != got:
            raise SchemaError(
                f"{name}: expected column '{want}' at position {pos}, found '{got}'"
            )


def _numeric_columns(d: FigureDef) -> tuple[str, ...]:
    wanted = [d.x_col]
    if d.y_col is not None:
        wanted.append(d.y_col)
    wanted.extend(d.finite_cols)
    wanted.extend(d.boundary_cols)
    return tuple(dict.fromkeys(wanted))


def load_rows(fig_id: int, path: Path) -> list[Row]:
    """Validated, filtered rows of one bundle CSV.

    Applies the figure's schema check, numeric parsing, the keep-column
    filter, and the finite filter, in that order.
    """
    d = FIGURES[fig_id]
    name = path.name
    lines = _numbered_lines(path)
    if not lines:
        raise SchemaError(f"{name}: missing header row")
    parsed = list(csv.reader(line for _, line in lines))
    linenos = [lineno for lineno, _ in lines]
    _check_header(parsed[0], d, name)

    numeric = _numeric_columns(d)
    rows = []
    for lineno, fields in zip(linenos[1:], parsed[1:]):
        if len(fields) != len(d.columns):
            raise SchemaError(
                f"{name}: line {lineno}: expected {len(d.columns)} fields, "
                f"found {len(fields)}"
            )
        values = dict(zip(d.columns, fields))
        if d.keep_col is not None:
            flag = values[d.keep_col]
            if flag not in ("0", "1"):
                raise SchemaError(
                    f"{name}: line {lineno}: column '{d.keep_col}': "
                    f"expected 0 or 1, found '{flag}'"
                )
            if flag == "0":
                continue
        numbers = {}
        for col in numeric:
            raw = values[col]
            try:
                numbers[col] = float(raw)
            except ValueError:
                raise SchemaError(
                    f"{name}: line {lineno}: column '{col}': not a number: '{raw}'"
                ) from None
        if any(not math.isfinite(numbers[col]) for col in d.finite_cols):
            continue
        rows.append(Row(values=values, numbers=numbers))
    if not rows:
        raise DataError(f"{name}: no plottable data rows")
    return rows


def _series_label(d: FigureDef, row: Row) -> str:
    if len(d.series_cols) == 1:
        return row.values[d.series_cols[0]]
    return ", ".join(f"{col}={row.values[col]}" for col in d.series_cols)


def build_spec(fig_id: int, in_dir: Path, out_dir: Path) -> FigureSpec:
    """Load one bundle CSV and assemble the figure spec for it."""
    if fig_id not in FIGURES:
        known = ", ".join(str(k) for k in sorted(FIGURES))
        raise ValueError(f"unknown figure id {fig_id}; known ids: {known}")
    d = FIGURES[fig_id]
    csv_path = Path(in_dir, csv_name(fig_id))
    rows = load_rows(fig_id, csv_path)

    groups: dict[str, list[Row]] = {}
    for row in rows:
        groups.setdefault(_series_label(d, row), []).append(row)

    xs = [row.numbers[d.x_col] for row in rows]
    x_range = (min(xs), max(xs))
    y_range = None
    if d.y_col is not None:
        ys = [row.numbers[d.y_col] for row in rows]
        y_range = (min(ys), max(ys))
    boundaries = tuple(
        sorted({row.numbers[col] for col in d.boundary_cols for row in rows})
    )
    return FigureSpec(
        fig_id=fig_id,
        csv_path=csv_path,
        out_path=Path(out_dir, image_name(fig_id)),
        series=tuple(groups),
        rows_by_series={label: tuple(group) for label, group in groups.items()},
        x_range=x_range,
        y_range=y_range,
        boundaries=boundaries,
    )
