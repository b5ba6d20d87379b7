"""Command line entry point.

Subcommands: simulate, compare, sweep, gen-network.
Exit codes: 0 success, 1 config error, 2 runtime error, 3 a run hit the
gridlock guard (results are still written).
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import harness
from .network import NetworkError, generate_grid
from .scenario import STRATEGY_NAMES, ConfigError, ScenarioConfig

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_TRUNCATED = 3


def _load_config(args) -> ScenarioConfig:
    cfg = ScenarioConfig.from_toml(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "runs", None) is not None:
        cfg = replace(cfg, runs=args.runs)
    cfg.validate()
    return cfg


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    report = harness.run(cfg, out_dir=args.out, edge_trace=args.edges,
                         decision_trace=args.decisions)
    print(f"strategy={cfg.strategy} runs={cfg.runs} "
          f"mean_completion_time={report.mean_completion_time:.3f} "
          f"mean_travel_time={report.mean_travel_time:.3f}")
    return EXIT_TRUNCATED if report.any_truncated else EXIT_OK


def _cmd_compare(args) -> int:
    cfg = _load_config(args)
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    unknown = [s for s in strategies if s not in STRATEGY_NAMES]
    if unknown:
        raise ConfigError(f"unknown strategies: {', '.join(unknown)}")
    comparison = harness.compare(cfg, strategies, out_dir=args.out)
    for row in comparison.table():
        print(f"{row['strategy']:<12} "
              f"completion={row['mean_completion_time']:.1f} "
              f"(sd {row['std_completion_time']:.1f}) "
              f"travel={row['mean_travel_time']:.1f} "
              f"delta={row['delta_completion_pct']:+.1f}%")
    truncated = any(rep.any_truncated for rep in comparison.reports.values())
    return EXIT_TRUNCATED if truncated else EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    param = args.param.lower()
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad sweep values: {exc}") from exc
    if not values:
        raise ConfigError("sweep needs at least one value")
    reports = harness.sweep(cfg, param, values, out_dir=args.out)
    for v, rep in reports.items():
        print(f"{param}={v:g} mean_travel_time={rep.mean_travel_time:.3f} "
              f"mean_completion_time={rep.mean_completion_time:.1f}")
    truncated = any(rep.any_truncated for rep in reports.values())
    return EXIT_TRUNCATED if truncated else EXIT_OK


def _cmd_gen_network(args) -> int:
    try:
        rows_s, cols_s = args.grid.lower().split("x")
        rows, cols = int(rows_s), int(cols_s)
    except ValueError as exc:
        raise ConfigError(f"bad --grid {args.grid!r}, expected RxC") from exc
    net = generate_grid(rows, cols, block_length=args.block_m,
                        lanes=args.lanes, speed=args.speed,
                        per_lane_capacity=args.per_lane_capacity)
    with open(args.out, "w") as fh:
        fh.write(net.to_text())
    print(f"wrote {len(net.node_ids)} intersections, "
          f"{len(net.edge_ids)} edges to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtmsim",
        description="Deterministic mesoscopic road traffic simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one strategy over seeded replications")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--runs", type=int)
    p.add_argument("--out")
    p.add_argument("--edges", action="store_true",
                   help="also write per-tick edge counts (edges.csv)")
    p.add_argument("--decisions", action="store_true",
                   help="also write per-vehicle decisions (decisions.csv)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="run several strategies on shared populations")
    p.add_argument("--config", required=True)
    p.add_argument("--strategies", required=True,
                   help="comma-separated subset of " + ",".join(STRATEGY_NAMES))
    p.add_argument("--seed", type=int)
    p.add_argument("--runs", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("sweep", help="sweep one strategy parameter")
    p.add_argument("--config", required=True)
    p.add_argument("--param", required=True, help="e.g. p_r")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--seed", type=int)
    p.add_argument("--runs", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("gen-network", help="write a grid network file")
    p.add_argument("--grid", required=True, help="RxC, e.g. 10x10")
    p.add_argument("--block-m", type=float, default=500.0)
    p.add_argument("--lanes", type=int, default=2)
    p.add_argument("--speed", type=float, default=12.5)
    p.add_argument("--per-lane-capacity", type=int, default=40)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_network)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, NetworkError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:   # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
