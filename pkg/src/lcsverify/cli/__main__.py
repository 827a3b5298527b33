"""Command line: ``lcsverify report`` or one section at a time."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..errors import InputError
from .config import load
from .presets import ALL_SECTIONS, PRESETS
from .report import render_text
from .runner import EXIT_CONFIG, exit_code, run

CAP_FLAGS = {
    "max_class": "class_cap",
    "max_magnus_cap": "magnus_cap",
    "max_tensor": "tensor_max",
    "max_cross": "exterior_cross_max",
    "max_norm": "norm_max",
    "max_exterior": "exterior_limit",
    "max_degree": "degree_cap",
    "max_lie_exterior": "lie_exterior_dim",
    "max_witness": "witness_max",
    "max_entries": "engine_max_entries",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcsverify", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("report",) + ALL_SECTIONS:
        p = sub.add_parser(name, help="run every configured section" if name == "report" else f"run the {name} section")
        p.add_argument("--config", type=Path, help="JSON run configuration")
        p.add_argument("--preset", choices=sorted(PRESETS), help="start from a named configuration")
        p.add_argument("--out", type=Path, help="write the JSON report here")
        p.add_argument("--json", action="store_true", help="print JSON instead of text")
        p.add_argument("--no-durations", action="store_true", help="omit wall-clock times from the output")
        p.add_argument("-v", "--verbose", action="store_true")
        for flag in CAP_FLAGS:
            p.add_argument("--" + flag.replace("_", "-"), dest=flag, type=int, metavar="N")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    overrides = {cap: getattr(args, flag) for flag, cap in CAP_FLAGS.items() if getattr(args, flag) is not None}
    try:
        cfg = load(args.config, args.preset, overrides)
    except InputError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command != "report":
        cfg.sections = [args.command]
    try:
        report = run(cfg)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    durations = not args.no_durations
    if args.out is not None:
        args.out.write_text(report.to_json(durations))
    sys.stdout.write(report.to_json(durations) if args.json else render_text(report, durations))
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
