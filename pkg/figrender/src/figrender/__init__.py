"""Publication-style plots from the chaincost figure-data CSV bundle.

The package is a thin, deliberately computation-free rendering layer:
:mod:`figrender.defs` states what each bundle CSV must look like and
how it is drawn, :mod:`figrender.csvdata` validates and groups the
rows, :mod:`figrender.render` draws them with matplotlib's Agg backend,
and :mod:`figrender.cli` wires it into the ``figures`` command. All
numbers come from the CSVs; nothing is derived here.
"""
from __future__ import annotations

from .csvdata import FigureSpec, Row, build_spec, csv_name, image_name, load_rows
from .defs import FIGURES, FigureDef
from .errors import DataError, FigRenderError, SchemaError
from .render import RenderReport, render

__all__ = [
    "FIGURES",
    "DataError",
    "FigRenderError",
    "FigureDef",
    "FigureSpec",
    "RenderReport",
    "Row",
    "SchemaError",
    "build_spec",
    "csv_name",
    "image_name",
    "load_rows",
    "render",
]

__version__ = "0.1.0"
