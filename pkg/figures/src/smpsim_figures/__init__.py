"""Figure rendering for sweep CSVs."""

from .render import (EXPECTED_COLUMNS, FigureInputError, FigureSpec, SweepTable,
                     load_table, parse_layout, render_figure)

__version__ = "0.1.0"

__all__ = ["EXPECTED_COLUMNS", "FigureInputError", "FigureSpec", "SweepTable",
           "load_table", "parse_layout", "render_figure"]
