#!/usr/bin/env python3
"""
Export Figure CLI — Write the triple-well figure data files.

Usage:
    python scripts/export_figure.py
    python scripts/export_figure.py --out figure_data
    python scripts/export_figure.py --B0 1 --G0 2.06 --points 4001
"""

import os
import sys
import argparse

# Add project root to path
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, PROJECT_ROOT)

from main import main as engine_main


def main(argv=None):
    parser = argparse.ArgumentParser(description="Sextic SUSY Spectral Engine — Export Figure Data")
    parser.add_argument("--out", "-o", type=str, default=os.path.join("output", "figure"),
                        help="Output directory")
    parser.add_argument("--B0", type=float, default=None)
    parser.add_argument("--G0", type=float, default=None)
    parser.add_argument("--points", type=int, default=None, help="Grid points")
    args = parser.parse_args(argv)

    forwarded = ["figure", "--out", args.out]
    for flag in ("B0", "G0", "points"):
        value = getattr(args, flag)
        if value is not None:
            forwarded += [f"--{flag}", repr(value)]

    code = engine_main(forwarded)
    if code == 0:
        print(f"\nFigure data written to: {args.out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
