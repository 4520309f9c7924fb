"""Command-line entry point: plotviz curves|sweep <csv> -o <image>."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .render import render_curves, render_sweep


def cmd_curves(args: argparse.Namespace) -> int:
    render_curves(
        args.csv,
        args.out,
        top_k=args.top_k,
        x_max=args.x_max,
        result_json=args.result,
    )
    print(f"wrote {args.out}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    render_sweep(args.csv, args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotviz",
        description="Render figures from swaprobust CSV outputs.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("curves", help="per-candidate probability curves")
    sub.add_argument("csv", help="analyze curve CSV")
    sub.add_argument("-o", "--out", required=True, help="output image")
    sub.add_argument("--top-k", type=int, default=4)
    sub.add_argument("--x-max", type=float, default=0.5)
    sub.add_argument(
        "--result",
        default=None,
        help="analyze JSON from the same run (adds scores to the legend)",
    )
    sub.set_defaults(func=cmd_curves)

    sub = subs.add_parser("sweep", help="mean-threshold sweep curves")
    sub.add_argument("csv", help="sweep CSV")
    sub.add_argument("-o", "--out", required=True, help="output image")
    sub.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
