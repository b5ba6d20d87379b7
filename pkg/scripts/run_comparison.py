#!/usr/bin/env python3
"""Reproduce the headline strategy comparison on the desk-scale scenario.

Runs all four strategies over the shared seeded populations of
scenarios/desk.toml, prints the comparison table with paired-seed
significance levels, and writes the CSV artifacts.

Usage:
    python3 scripts/run_comparison.py [--out results/comparison] [--runs N]
"""
import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dtmsim import harness                                    # noqa: E402
from dtmsim.scenario import ScenarioConfig                    # noqa: E402

SCENARIO = Path(__file__).resolve().parent.parent / "scenarios" / "desk.toml"
STRATEGIES = ["centralized", "vam", "alert", "none"]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/comparison")
    ap.add_argument("--runs", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args()

    cfg = ScenarioConfig.from_toml(str(SCENARIO))
    if args.runs is not None:
        from dataclasses import replace
        cfg = replace(cfg, runs=args.runs)
    if args.seed is not None:
        from dataclasses import replace
        cfg = replace(cfg, seed=args.seed)

    t0 = time.time()
    cmp = harness.compare(cfg, STRATEGIES, out_dir=args.out)
    elapsed = time.time() - t0

    print(f"{cfg.runs} paired runs, seed base {cfg.seed}, {elapsed:.0f}s\n")
    print(f"{'strategy':<12} {'completion':>12} {'travel':>10} {'delta':>8}")
    for row in cmp.table():
        print(f"{row['strategy']:<12} "
              f"{row['mean_completion_time']:>8.1f} "
              f"(sd {cmp.reports[row['strategy']].std_completion_time:.0f}) "
              f"{row['mean_travel_time']:>8.1f} "
              f"{row['delta_completion_pct']:>+7.1f}%")

    print("\npaired one-sided tests (H1: second strategy slower):")
    comp = {s: [m.completion_time for m in cmp.reports[s].runs]
            for s in STRATEGIES}
    for lo, hi in zip(STRATEGIES, STRATEGIES[1:]):
        diffs = [b - a for a, b in zip(comp[lo], comp[hi])]
        p = harness.paired_one_sided(diffs)
        print(f"  {hi} - {lo}: mean {np.mean(diffs):+.1f} ticks, p = {p:.2g}")
    print(f"\nartifacts written to {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
