"""Command line entry point.

    dtmplot plot --kind strategy-comparison --in runs.csv --out fig

Exit codes: 0 success, 1 input error (missing/empty/mismatched CSV or bad
arguments), 2 unexpected runtime error.
"""
from __future__ import annotations

import argparse
import sys

from .charts import KINDS, render
from .io import PlotInputError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RUNTIME = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtmplot", description="Render charts from dtmsim CSV outputs")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render one chart as PNG and SVG")
    p.add_argument("--kind", required=True, choices=sorted(KINDS),
                   help="chart type")
    p.add_argument("--in", dest="inputs", required=True, nargs="+",
                   metavar="CSV", help="one or more input CSV files")
    p.add_argument("--out", required=True,
                   help="output base path (suffix optional; both .png "
                        "and .svg are written)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        paths = render(args.kind, args.inputs, args.out)
    except PlotInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:   # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print("wrote " + ", ".join(str(p) for p in paths))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
