"""Command line front end.

`hyperslice run --config cfg.yaml [--suite S] [--seed N] [--out PATH]
[--format json|csv|text]` executes a verification suite and exits nonzero when
any check fails.  `hyperslice table --algebra octonion` prints the frozen basis
multiplication table.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import multiplication_table, parse_algebra
from .suites import SUITE_NAMES, emit_report, load_config, run_suite


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperslice")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a verification suite from a config file")
    run_p.add_argument("--config", required=True, help="YAML experiment config")
    run_p.add_argument("--suite", choices=SUITE_NAMES, help="override the configured suite")
    run_p.add_argument("--seed", type=int, help="override the configured seed")
    run_p.add_argument("--out", help="write the report to this path")
    run_p.add_argument("--format", choices=("json", "csv", "text"), default="text")

    table_p = sub.add_parser("table", help="print a basis multiplication table")
    table_p.add_argument("--algebra", default="octonion", help="octonion or quaternion")
    return parser


def _format_table(name: str) -> str:
    tag = parse_algebra(name)
    index, sign = multiplication_table(tag)
    width = 4
    lines = [f"{tag.name} basis products (row e_i times column e_j)"]
    header = "     " + " ".join(f"{'e%d' % j:>{width}}" for j in range(tag.dim))
    lines.append(header)
    for i in range(tag.dim):
        cells = []
        for j in range(tag.dim):
            s = "-" if sign[i, j] < 0 else "+"
            cells.append(f"{s}e{index[i, j]:<2}".rjust(width))
        lines.append(f"e{i:<3} " + " ".join(cells))
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "table":
        sys.stdout.write(_format_table(args.algebra))
        return 0

    overrides = {"suite": args.suite, "seed": args.seed}
    try:
        cfg = load_config(args.config, overrides)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    report = run_suite(cfg)
    text = emit_report(report, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        sys.stdout.write(f"{report.suite}: {'PASS' if report.overall_pass else 'FAIL'} ({args.out})\n")
    return 0 if report.overall_pass else 1


if __name__ == "__main__":
    raise SystemExit(main())
