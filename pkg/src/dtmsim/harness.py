"""Multi-seed execution, metrics, comparison tables, and CSV persistence.

Replication r runs with seed base+r; compared strategies share the exact
same populations (asserted by digest).  All outputs are bit-exact functions
of (config, seed).
"""
from __future__ import annotations

import csv
import statistics
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .engine import ARRIVED, World, step
from .network import RoadNetwork, RoutePlanner
from .scenario import (BuiltScenario, ScenarioConfig, build_scenario,
                       make_network, population_digest, sample_population)
from .strategies import Strategy, VamStrategy, make_strategy

RUNS_CSV_FIELDS = ("run_index", "strategy", "completion_time",
                   "mean_travel_time", "median_travel_time", "switches",
                   "truncated")


class GridlockError(RuntimeError):
    """A run hit max_ticks before every vehicle arrived."""


@dataclass(frozen=True)
class RunMetrics:
    run_index: int
    strategy: str
    completion_time: int
    mean_travel_time: float
    median_travel_time: float
    mean_trip_distance: float
    switches: int
    truncated: bool
    unfired_injections: int = 0


@dataclass(frozen=True)
class MetricsReport:
    runs: tuple[RunMetrics, ...]
    mean_completion_time: float
    std_completion_time: float
    mean_travel_time: float
    std_travel_time: float

    @property
    def any_truncated(self) -> bool:
        return any(r.truncated for r in self.runs)


def aggregate(runs: Sequence[RunMetrics]) -> MetricsReport:
    comp = [r.completion_time for r in runs]
    trav = [r.mean_travel_time for r in runs]
    return MetricsReport(
        runs=tuple(runs),
        mean_completion_time=statistics.fmean(comp),
        std_completion_time=statistics.stdev(comp) if len(comp) > 1 else 0.0,
        mean_travel_time=statistics.fmean(trav),
        std_travel_time=statistics.stdev(trav) if len(trav) > 1 else 0.0,
    )


def execute_run(built: BuiltScenario, strategy: Strategy, max_ticks: int,
                run_index: int, check_conservation: bool = False,
                edge_trace: Optional[list] = None,
                trace_every: int = 1) -> RunMetrics:
    """Step one world until every vehicle arrives or max_ticks elapse."""
    world = built.world
    truncated = False
    for t in range(max_ticks):
        if world.all_arrived():
            break
        for c in built.atlc_controllers:
            c.on_tick(t)
        for c in built.dlr_controllers:
            c.on_tick(t)
        strategy.before_step(world, t)
        events = step(world, t)
        for c in built.dlr_controllers:
            c.record_events(events)
        strategy.after_step(world, t, events)
        if check_conservation:
            world.check_conservation()
        if edge_trace is not None and t % trace_every == 0:
            nz = np.flatnonzero(world.counts)
            for e in nz:
                edge_trace.append((run_index, t, world.net.edge_ids[e],
                                   int(world.counts[e])))
    else:
        truncated = not world.all_arrived()

    arrived = [v for v in world.vehicles if v.state == ARRIVED]
    if arrived:
        travel = [v.arrived_at - v.departure_time for v in arrived]
        completion = max(v.arrived_at for v in arrived)
        mean_dist = statistics.fmean(v.distance for v in arrived)
    else:
        travel = [0.0]
        completion = 0
        mean_dist = 0.0
    if truncated:
        completion = max_ticks
    unfired = sum(1 for injs in world.injections.values()
                  for i in injs if not i.fired)
    return RunMetrics(
        run_index=run_index,
        strategy=strategy.name,
        completion_time=int(completion),
        mean_travel_time=float(statistics.fmean(travel)),
        median_travel_time=float(statistics.median(travel)),
        mean_trip_distance=float(mean_dist),
        switches=sum(v.switches for v in world.vehicles),
        truncated=truncated,
        unfired_injections=unfired,
    )


def _strategy_for(config: ScenarioConfig, name: str, run_index: int,
                  planner: RoutePlanner, vam_mode: str = "fast",
                  record_decisions: bool = False) -> Strategy:
    return make_strategy(name, planner, config.comms_params(),
                         config.routing_params(),
                         seed_key=(config.seed + run_index,),
                         vam_mode=vam_mode, record_decisions=record_decisions)


def run(config: ScenarioConfig, out_dir: Optional[str] = None,
        vam_mode: str = "fast", check_conservation: bool = False,
        edge_trace: bool = False, decision_trace: bool = False,
        net: Optional[RoadNetwork] = None,
        planner: Optional[RoutePlanner] = None) -> MetricsReport:
    """Execute `config.runs` independent replications and aggregate."""
    config.validate()
    if net is None:
        net = make_network(config)
    if planner is None:
        planner = RoutePlanner(net, config.k + 1)
    rows: list[RunMetrics] = []
    etrace: Optional[list] = [] if edge_trace else None
    decisions: list = []
    for r in range(config.runs):
        built = build_scenario(config, r, net=net, planner=planner)
        strategy = _strategy_for(config, config.strategy, r, planner,
                                 vam_mode=vam_mode,
                                 record_decisions=decision_trace)
        rows.append(execute_run(built, strategy, config.effective_max_ticks, r,
                                check_conservation=check_conservation,
                                edge_trace=etrace))
        if decision_trace and isinstance(strategy, VamStrategy):
            decisions.extend((r, d.tick, d.vid, d.current_est, d.best_alt_est,
                              d.recommended, d.complied)
                             for d in strategy.decisions)
    report = aggregate(rows)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_runs_csv(out / "runs.csv", rows)
        write_aggregate_csv(out / "aggregate.csv", {config.strategy: report})
        if etrace is not None:
            _write_csv(out / "edges.csv",
                       ("run_index", "tick", "edge_id", "count"), etrace)
        if decision_trace:
            _write_csv(out / "decisions.csv",
                       ("run_index", "tick", "vehicle", "current_est",
                        "best_alt_est", "recommended", "complied"),
                       [(r, t, v, _fmt(c), _fmt(b), int(rec), int(comp))
                        for r, t, v, c, b, rec, comp in decisions])
    return report


@dataclass(frozen=True)
class Comparison:
    strategies: tuple[str, ...]
    reports: dict
    population_digests: tuple[str, ...]

    def table(self) -> list[dict]:
        base = self.reports[self.strategies[0]].mean_completion_time
        rows = []
        for s in self.strategies:
            rep = self.reports[s]
            rows.append({
                "strategy": s,
                "mean_completion_time": rep.mean_completion_time,
                "std_completion_time": rep.std_completion_time,
                "mean_travel_time": rep.mean_travel_time,
                "delta_completion_pct":
                    100.0 * (rep.mean_completion_time - base) / base if base else 0.0,
            })
        return rows


def compare(config: ScenarioConfig, strategies: Sequence[str],
            out_dir: Optional[str] = None, vam_mode: str = "fast") -> Comparison:
    """Run several strategies over identical populations and seeds.

    All non-strategy fields come from `config`; per-strategy configs are
    derived, never supplied, so population invariance holds by construction
    and is additionally asserted by digest.
    """
    config.validate()
    names = list(strategies)
    if len(set(names)) != len(names):
        raise ValueError("duplicate strategy names")
    net = make_network(config)
    planner = RoutePlanner(net, config.k + 1)
    per_strategy: dict[str, list[RunMetrics]] = {s: [] for s in names}
    digests = []
    for r in range(config.runs):
        population = sample_population(net, config, r, planner)
        digest = population_digest(population)
        digests.append(digest)
        for s in names:
            cfg = replace(config, strategy=s)
            built = build_scenario(cfg, r, net=net, planner=planner,
                                   population=population)
            assert population_digest(built.population) == digest
            strategy = _strategy_for(cfg, s, r, planner, vam_mode=vam_mode)
            per_strategy[s].append(
                execute_run(built, strategy, cfg.effective_max_ticks, r))
    reports = {s: aggregate(per_strategy[s]) for s in names}
    comparison = Comparison(strategies=tuple(names), reports=reports,
                            population_digests=tuple(digests))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        all_rows = [m for s in names for m in per_strategy[s]]
        write_runs_csv(out / "runs.csv", all_rows)
        write_aggregate_csv(out / "aggregate.csv", reports)
        _write_csv(out / "comparison.csv",
                   ("strategy", "mean_completion_time", "std_completion_time",
                    "mean_travel_time", "delta_completion_pct"),
                   [(row["strategy"], _fmt(row["mean_completion_time"]),
                     _fmt(row["std_completion_time"]),
                     _fmt(row["mean_travel_time"]),
                     _fmt(row["delta_completion_pct"]))
                    for row in comparison.table()])
    return comparison


def sweep(config: ScenarioConfig, param: str, values: Sequence[float],
          out_dir: Optional[str] = None, vam_mode: str = "fast") -> dict:
    """Run the scenario once per parameter value over identical populations."""
    config.validate()
    if param not in ("p_r", "epsilon", "d_r", "i_t", "n", "k"):
        raise ValueError(f"unsupported sweep parameter {param!r}")
    net = make_network(config)
    planner = RoutePlanner(net, config.k + 1)
    reports: dict[float, MetricsReport] = {}
    rows_out = []
    populations = [sample_population(net, config, r, planner)
                   for r in range(config.runs)]
    for value in values:
        cfg = replace(config, **{param: type(getattr(config, param))(value)})
        per_value: list[RunMetrics] = []
        for r in range(cfg.runs):
            built = build_scenario(cfg, r, net=net, planner=planner,
                                   population=populations[r])
            strategy = _strategy_for(cfg, cfg.strategy, r, planner,
                                     vam_mode=vam_mode)
            m = execute_run(built, strategy, cfg.effective_max_ticks, r)
            per_value.append(m)
            rows_out.append((param, _fmt(value), r, m.completion_time,
                             _fmt(m.mean_travel_time),
                             _fmt(m.median_travel_time), m.switches,
                             int(m.truncated)))
        reports[value] = aggregate(per_value)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "sweep.csv",
                   ("param", "value", "run_index", "completion_time",
                    "mean_travel_time", "median_travel_time", "switches",
                    "truncated"), rows_out)
        _write_csv(out / "sweep_aggregate.csv",
                   ("param", "value", "mean_completion_time",
                    "mean_travel_time", "std_travel_time"),
                   [(param, _fmt(v), _fmt(rep.mean_completion_time),
                     _fmt(rep.mean_travel_time), _fmt(rep.std_travel_time))
                    for v, rep in reports.items()])
    return reports


# -- CSV helpers -----------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(round(x, 9))
    return str(x)


def _write_csv(path, fields, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(fields)
        w.writerows(rows)


def write_runs_csv(path, rows: Sequence[RunMetrics]) -> None:
    _write_csv(path, RUNS_CSV_FIELDS,
               [(m.run_index, m.strategy, m.completion_time,
                 _fmt(m.mean_travel_time), _fmt(m.median_travel_time),
                 m.switches, int(m.truncated)) for m in rows])


def write_aggregate_csv(path, reports: dict) -> None:
    _write_csv(path,
               ("strategy", "runs", "mean_completion_time",
                "std_completion_time", "mean_travel_time", "std_travel_time"),
               [(s, len(rep.runs), _fmt(rep.mean_completion_time),
                 _fmt(rep.std_completion_time), _fmt(rep.mean_travel_time),
                 _fmt(rep.std_travel_time)) for s, rep in reports.items()])


# -- paired statistics (used by the acceptance suite) ------------------------

def paired_one_sided(diffs: Sequence[float]) -> float:
    """p-value for H1: mean(diff) > 0 under a paired t-test."""
    from scipy import stats

    d = np.asarray(diffs, dtype=float)
    if np.allclose(d, d[0]):
        return 0.0 if d[0] > 0 else 1.0
    t, p_two = stats.ttest_1samp(d, 0.0)
    return p_two / 2.0 if t > 0 else 1.0 - p_two / 2.0
