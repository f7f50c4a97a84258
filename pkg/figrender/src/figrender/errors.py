"""Exception hierarchy for the figure renderer."""
from __future__ import annotations

__all__ = ["FigRenderError", "SchemaError", "DataError"]


class FigRenderError(Exception):
    """Base class for everything this package raises on purpose."""


class SchemaError(FigRenderError):
    """The input CSV does not match the documented schema for its figure."""


class DataError(FigRenderError):
    """The input CSV is well-formed but holds nothing that can be drawn."""
