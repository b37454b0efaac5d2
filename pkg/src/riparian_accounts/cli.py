"""``natcap`` command line.

Exit status: 0 on success, 1 on a runtime error, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import dump_config, load_config
from .errors import AccountingError
from .pipeline import COMMANDS, FORMATS, run_pipeline
from .statements import ALTERNATIVES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="natcap",
        description="Riparian natural capital accounts: physical, monetary and financial-statement outputs.",
    )
    parser.add_argument(
        "command",
        choices=COMMANDS + ("echo",),
        help="extent | physical | monetary | statements | all, or echo to print the parsed config",
    )
    parser.add_argument("--config", required=True, type=Path, help="run configuration (INI)")
    parser.add_argument("--out", type=Path, help="output directory (overrides reporting.output_dir)")
    parser.add_argument("--alternative", choices=ALTERNATIVES, help="disclosure alternative for statements")
    parser.add_argument("--format", choices=FORMATS, help="write only this format (default: all three)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "echo":
            sys.stdout.write(dump_config(cfg))
            return 0
        formats = (args.format,) if args.format else FORMATS
        written = run_pipeline(cfg, args.command, args.out, formats, args.alternative)
    except (AccountingError, OSError) as exc:
        print(f"natcap: error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
