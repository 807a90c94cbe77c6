"""Standalone figure rendering commands.

Flag conventions mirror the verification CLI: long-form flags, environment
overrides with the ``CANTOREULER_FIGURES_`` prefix, exit code 2 for usage
errors and 1 for render failures.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .render import render
from .specs import FIGURE_IDS, FigureSpec, FigureStyle, ReportFormatError

ENV_PREFIX = "CANTOREULER_FIGURES_"


def _env_default(flag: str, fallback):
    return os.environ.get(ENV_PREFIX + flag.replace("-", "_").upper(), fallback)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantoreuler-figures",
        description="Render verification-report figures (display only; no recomputation)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--input", default=_env_default("input", "verify_all_report.json"))
        p.add_argument("--width", type=float, default=float(_env_default("width", 7.0)))
        p.add_argument("--height", type=float, default=float(_env_default("height", 7.0)))
        p.add_argument("--dpi", type=int, default=int(_env_default("dpi", 144)))

    p = sub.add_parser("render", help="render one figure")
    add_common(p)
    p.add_argument("--figure", required=True, choices=FIGURE_IDS)
    p.add_argument("--output", required=True)

    p = sub.add_parser("render-all", help="render every figure the report supports")
    add_common(p)
    p.add_argument("--output-dir", default=_env_default("output_dir", "figures_out"))
    p.add_argument("--ext", choices=("svg", "png"), default=str(_env_default("ext", "svg")))

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv if argv is not None else sys.argv[1:])
    style = FigureStyle(width=args.width, height=args.height, dpi=args.dpi)
    try:
        if args.command == "render":
            spec = FigureSpec(args.figure, args.input, args.output, style)
            path = render(spec)
            print(f"wrote {path}")
        else:
            outdir = Path(args.output_dir)
            for figure_id in FIGURE_IDS:
                out = outdir / f"{figure_id}.{args.ext}"
                path = render(FigureSpec(figure_id, args.input, str(out), style))
                print(f"wrote {path}")
    except ReportFormatError as exc:
        print(f"report error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
