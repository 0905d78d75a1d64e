"""
usage:
  python slelab_runner.py bubbles --config slelab.config.json --out bubbles-run [--workers 4]
  python slelab_runner.py hitprob --kappa 6 --seeds 1,2,3
  python slelab_runner.py verify --quick

Same as the installed ``slelab`` command; handy when working from a checkout.
"""

import sys


def import_slelab():
    try:
        from slelab.cli import main
        return main
    except ImportError as e:
        sys.exit(
            "Failed to import slelab. "
            "Make sure you're in the project root and ran:\n"
            "    pip install -e .\n"
            f"Error: {e}"
        )


if __name__ == "__main__":
    raise SystemExit(import_slelab()())
