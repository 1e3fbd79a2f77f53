"""Command-line entry for the figure renderer."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureInputError, FigureSpec, parse_layout, render_figure


def _parse_pair(text: str) -> tuple:
    a, _, b = text.partition(":")
    return (float(a), float(b))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smpsim-figures",
        description="Render sweep CSVs into multi-panel mean-energy figures "
                    "(one panel per (alpha, beta) configuration).")
    parser.add_argument("--input", nargs="+", required=True, metavar="CSV",
                        help="sweep CSV file(s) in the documented schema")
    parser.add_argument("--out", required=True, metavar="PATH",
                        help="output image path; extension is replaced per format")
    parser.add_argument("--layout", default="2x2", metavar="RxC",
                        help="panel grid, e.g. 2x2 (default)")
    parser.add_argument("--formats", default="png,svg", metavar="FMT[,FMT]",
                        help="image formats to write (default png,svg)")
    parser.add_argument("--panels", default=None, metavar="A:B[,A:B...]",
                        help="explicit (alpha, beta) panel selection "
                             "(default: every configuration found, in file order)")
    parser.add_argument("--compare", default=None, metavar="CSV",
                        help="overlay one configuration from a second CSV, dashed")
    parser.add_argument("--compare-config", default=None, metavar="A:B",
                        help="which (alpha, beta) of the --compare file to overlay")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        layout = parse_layout(args.layout)
        panels = None
        if args.panels:
            panels = [_parse_pair(chunk) for chunk in args.panels.split(",") if chunk]
        spec = FigureSpec(
            inputs=[Path(p) for p in args.input],
            out=Path(args.out),
            layout=layout,
            formats=tuple(f.strip().lower() for f in args.formats.split(",") if f.strip()),
            panels=panels,
            compare=Path(args.compare) if args.compare else None,
            compare_config=_parse_pair(args.compare_config) if args.compare_config else None,
        )
        written = render_figure(spec)
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        parser.error(str(exc))
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
