"""Regenerate every figure preset (CSV, meta.json and SVG) under one directory."""

import argparse
import sys
from pathlib import Path

from wva_probe.cli import main

FIGURES = ("fig1c", "fig2", "fig3", "fig4")


def run(root: Path, svg: bool) -> int:
    for name in FIGURES:
        argv = [name, "--out", str(root / name)]
        if svg:
            argv.append("--svg")
        code = main(argv)
        if code:
            print(f"{name} failed with exit code {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--no-svg", action="store_true", help="skip the matplotlib renderings")
    args = ap.parse_args()
    sys.exit(run(Path(args.out), not args.no_svg))
