"""Run the acceptance suite and print one PASS/FAIL line per criterion.

Usage: python3 scripts/run_acceptance.py [extra pytest args]
"""

import pathlib
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    target = str(ROOT / "tests" / "test_acceptance.py")
    sys.exit(pytest.main([target, "-q", "-s", *sys.argv[1:]]))
