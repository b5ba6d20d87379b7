#!/usr/bin/env python3
"""Lane-reversal benefit on the two-intersection corridor.

Runs scenarios/corridor.toml (2:1 directional demand) with and without
dynamic lane reversal over paired seeds and reports the completion-time
improvement.

Usage:
    python3 scripts/run_dlr_corridor.py [--out results/corridor] [--runs N]
"""
import argparse
import sys
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dtmsim import harness                                    # noqa: E402
from dtmsim.scenario import ScenarioConfig                    # noqa: E402

SCENARIO = Path(__file__).resolve().parent.parent / "scenarios" / "corridor.toml"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=None)
    ap.add_argument("--runs", type=int, default=None)
    args = ap.parse_args()

    cfg = ScenarioConfig.from_toml(str(SCENARIO))
    if args.runs is not None:
        cfg = replace(cfg, runs=args.runs)

    out_on = f"{args.out}/dlr" if args.out else None
    out_off = f"{args.out}/static" if args.out else None
    with_dlr = harness.run(cfg, out_dir=out_on)
    static = harness.run(replace(cfg, dlr=False), out_dir=out_off)

    diffs = [b.completion_time - a.completion_time
             for a, b in zip(with_dlr.runs, static.runs)]
    imp = ((static.mean_completion_time - with_dlr.mean_completion_time)
           / static.mean_completion_time)
    print(f"static lanes : {static.mean_completion_time:8.1f} "
          f"(sd {static.std_completion_time:.1f})")
    print(f"with reversal: {with_dlr.mean_completion_time:8.1f} "
          f"(sd {with_dlr.std_completion_time:.1f})")
    print(f"improvement  : {100 * imp:.1f}%  "
          f"(paired p = {harness.paired_one_sided(diffs):.2g}, "
          f"{cfg.runs} seeds)")
    if args.out:
        print(f"artifacts written to {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
