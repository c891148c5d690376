#!/usr/bin/env python3
"""Render SVG phase portraits for every catalog entry.

Usage: python scripts/render_portraits.py [--depth N] [--out-dir DIR]
"""

import argparse
import sys
from pathlib import Path

from vfzero import builtin_catalog, isolate_zeros
from vfzero.svg import phase_portrait_svg


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--out-dir", default="out/portraits")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for entry in builtin_catalog():
        blocks = isolate_zeros(entry.field, entry.region, args.depth).blocks
        svg = phase_portrait_svg(entry.field, entry.region, blocks)
        path = out / f"{entry.name}.svg"
        path.write_text(svg)
        print(f"  {path} ({len(blocks)} blocks)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
