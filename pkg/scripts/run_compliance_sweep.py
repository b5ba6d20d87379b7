#!/usr/bin/env python3
"""Sweep driver compliance p_r on the desk-scale scenario.

Shows how much system-level benefit survives partial compliance: mean
travel time per p_r value over paired seeded populations.

Usage:
    python3 scripts/run_compliance_sweep.py [--out results/sweep] [--runs N]
"""
import argparse
import sys
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dtmsim import harness                                    # noqa: E402
from dtmsim.scenario import ScenarioConfig                    # noqa: E402

SCENARIO = Path(__file__).resolve().parent.parent / "scenarios" / "desk.toml"
VALUES = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/sweep")
    ap.add_argument("--runs", type=int, default=None)
    args = ap.parse_args()

    cfg = ScenarioConfig.from_toml(str(SCENARIO))
    if args.runs is not None:
        cfg = replace(cfg, runs=args.runs)

    reports = harness.sweep(cfg, "p_r", VALUES, out_dir=args.out)
    base = reports[0.0].mean_travel_time
    print(f"{'p_r':>5} {'mean travel':>12} {'vs p_r=0':>10}")
    for v in VALUES:
        m = reports[v].mean_travel_time
        print(f"{v:>5.1f} {m:>12.1f} {100 * (m - base) / base:>+9.1f}%")
    print(f"\nartifacts written to {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
