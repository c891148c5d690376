#!/usr/bin/env python3
"""Run the theorem harnesses over the builtin catalog and write one JSON
report per entry plus a summary.

Usage: python scripts/run_catalog.py [--depth N] [--trials N] [--out-dir DIR]
"""

import argparse
import sys
from pathlib import Path

from vfzero import (
    builtin_catalog,
    invariance_test,
    isolate_zeros,
    main_theorem_check,
    poincare_hopf_check,
    stability_test,
)
from vfzero.report import emit_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="out/catalog")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    falsified = False
    for entry in builtin_catalog():
        record: dict = {"entry": entry.name, "tags": sorted(entry.tags)}
        if entry.has_tag("main") or entry.has_tag("negative"):
            rep = main_theorem_check(entry, args.depth)
            record["main"] = rep
            falsified = falsified or rep.falsified
        if entry.has_tag("ph"):
            rep = poincare_hopf_check(entry.field, min(args.depth, 6))
            record["poincare_hopf"] = rep
            falsified = falsified or not rep.ok
        if entry.has_tag("stability"):
            depth = 5 if entry.domain == "torus" else 6
            blk = isolate_zeros(entry.field, entry.region, depth).blocks[0]
            rep = stability_test(entry.field, blk, trials=args.trials, seed=args.seed)
            record["stability"] = rep
            falsified = falsified or not rep.ok
        if entry.has_tag("invariance"):
            rep = invariance_test(entry.field, entry.trackers[0], entry.region)
            record["invariance"] = rep
            falsified = falsified or not rep.ok
        emit_report(record, str(out / f"{entry.name}.json"))
        summary.append({"entry": entry.name, "tags": sorted(entry.tags)})
        print(f"  {entry.name}: done")
    emit_report({"entries": summary, "falsified": falsified, "depth": args.depth},
                str(out / "summary.json"))
    print(f"reports in {out}/ (falsified: {falsified})")
    return 1 if falsified else 0


if __name__ == "__main__":
    sys.exit(main())
