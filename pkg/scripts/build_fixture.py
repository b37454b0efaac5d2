"""Regenerate the bundled fixture catchment and re-run the calibration.

    python scripts/build_fixture.py [output_dir]
"""
import sys
from pathlib import Path

from riparian_accounts.fixture import fixture_dir, write_fixture

if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else fixture_dir()
    write_fixture(out)
    print(f"fixture written to {out}")
