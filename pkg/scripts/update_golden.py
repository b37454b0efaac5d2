"""Regenerate tests/golden from the bundled fixture.

Run after an intended change to output values or layout, then review the diff.
"""
import sys
from pathlib import Path

from riparian_accounts.config import load_config
from riparian_accounts.fixture import fixture_config
from riparian_accounts.pipeline import build_documents, write_documents

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"


def main(argv=None) -> int:
    out = Path(argv[0]) if argv else GOLDEN
    for path in write_documents(build_documents(load_config(fixture_config()), "all"), out):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
