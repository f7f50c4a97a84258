"""Command-line interface.

One figure or the whole bundle::

    figures 4 --in figdata/ --out images/
    figures all --in figdata/ --out images/

Exit codes: 0 on success, 1 when any figure's CSV is missing,
off-schema, or empty (the message names the offending file and column),
2 for bad invocations.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .csvdata import build_spec
from .errors import FigRenderError
from .render import render

__all__ = ["main"]

_CHOICES = ("2", "3", "4", "5", "6", "7", "8", "all")


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(
        prog="figures",
        description="render the chaincost figure-data CSV bundle",
    )
    p.add_argument("figure", choices=_CHOICES, help="bundle figure id, or all")
    p.add_argument("--in", dest="in_dir", required=True, metavar="DIR",
                   help="directory holding the bundle CSVs")
    p.add_argument("--out", dest="out_dir", required=True, metavar="DIR",
                   help="directory to write images into")
    args = p.parse_args(argv)

    if args.figure == "all":
        fig_ids = [2, 3, 4, 5, 6, 7, 8]
    else:
        fig_ids = [int(args.figure)]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    failures = []
    for fig_id in fig_ids:
        try:
            report = render(build_spec(fig_id, Path(args.in_dir), out_dir))
        except FigRenderError as e:
            print(f"figures: {e}", file=sys.stderr)
            failures.append(fig_id)
            continue
        print(
            f"fig{fig_id}: wrote {report.out_path} "
            f"({len(report.series)} series, "
            f"{report.width_px}x{report.height_px} px)"
        )
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
