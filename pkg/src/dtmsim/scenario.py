"""Scenario configuration and deterministic world construction.

A scenario fixes the network, the seeded vehicle population (O-D pairs and
departure times), the strategy and its parameters, infrastructure options
(adaptive signals, lane reversal), and forced-stop congestion injections.
Identical config + seed always produces an identical world.
"""
from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:   # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .comms import CommsParams
from .control import AtlcController, DlrController, install_dlr, install_signals
from .engine import CostModelParams, World
from .network import RoadNetwork, RoutePlanner, generate_grid, load_network
from .routing import RoutingParams

CONFIG_FORMAT_VERSION = 1
POPULATION_PURPOSE = 1

STRATEGY_NAMES = ("vam", "centralized", "alert", "none")


class ConfigError(ValueError):
    """Invalid scenario configuration."""


@dataclass(frozen=True)
class GridSpec:
    rows: int = 10
    cols: int = 10
    block_m: float = 500.0
    lanes: int = 2
    speed_mps: float = 12.5
    per_lane_capacity: int = 40


@dataclass(frozen=True)
class InjectionSpec:
    vehicle_index: int
    edge: str
    at: int
    duration: int = 30


@dataclass(frozen=True)
class ScenarioConfig:
    grid: Optional[GridSpec] = GridSpec()
    network_file: Optional[str] = None
    vehicle_count: int = 1000
    t_dep: int = 1000
    strategy: str = "vam"
    d_r: float = 5000.0
    i_t: int = 5
    n: int = 5
    k: int = 2
    p_r: float = 0.85
    epsilon: float = 0.05
    switch_cooldown: int = 0
    decision_cohorts: int = 1
    alpha: float = 0.15
    beta: float = 4.0
    saturation_flow: float = 0.5
    atlc: bool = True
    signals: bool = True
    cycle: int = 60
    lost_time: int = 8
    min_green: int = 5
    max_green: Optional[int] = None
    dlr: bool = False
    dlr_window: int = 2
    dlr_cooldown: int = 60
    injections: tuple[InjectionSpec, ...] = ()
    od: Optional[tuple[tuple[str, str, int], ...]] = None
    seed: int = 1
    runs: int = 30
    max_ticks: int = 0   # 0 -> 20 * t_dep

    def validate(self) -> None:
        if self.vehicle_count < 1:
            raise ConfigError("vehicle_count must be >= 1")
        if self.t_dep < 0:
            raise ConfigError("departure window must be >= 0")
        if self.strategy not in STRATEGY_NAMES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.grid is None and self.network_file is None:
            raise ConfigError("scenario needs either a grid spec or a network file")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.od is not None:
            total = sum(c for _, _, c in self.od)
            if total > self.vehicle_count:
                raise ConfigError(
                    f"od counts sum to {total}, exceeding vehicle_count "
                    f"{self.vehicle_count}")

    @property
    def effective_max_ticks(self) -> int:
        return self.max_ticks if self.max_ticks > 0 else max(20 * self.t_dep, 2000)

    def comms_params(self) -> CommsParams:
        return CommsParams(d_r=self.d_r, i_t=self.i_t, n=self.n)

    def routing_params(self) -> RoutingParams:
        return RoutingParams(p_r=self.p_r, epsilon=self.epsilon,
                             switch_cooldown=self.switch_cooldown,
                             decision_cohorts=self.decision_cohorts)

    def cost_params(self) -> CostModelParams:
        return CostModelParams(alpha=self.alpha, beta=self.beta,
                               saturation_flow=self.saturation_flow)

    @classmethod
    def from_toml(cls, path: str) -> "ScenarioConfig":
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"unparseable config {path!r}: {exc}") from exc
        if data.get("format_version") != CONFIG_FORMAT_VERSION:
            raise ConfigError(
                f"unsupported config format_version {data.get('format_version')!r}")

        net = data.get("network", {})
        net_file = net.get("file")
        if net_file is not None:
            # relative network paths resolve against the config's directory
            from pathlib import Path
            p = Path(net_file)
            if not p.is_absolute():
                net_file = str(Path(path).resolve().parent / p)
        grid = None
        if "grid" in net:
            try:
                grid = GridSpec(**net["grid"])
            except TypeError as exc:
                raise ConfigError(f"bad grid spec: {exc}") from exc
        demand = data.get("demand", {})
        strat = data.get("strategy", {})
        cost = data.get("cost", {})
        sig = data.get("signals", {})
        dlr = data.get("dlr", {})
        runcfg = data.get("run", {})
        od = demand.get("od")
        try:
            injections = tuple(
                InjectionSpec(
                    vehicle_index=int(i["vehicle_index"]),
                    edge=str(i["edge"]),
                    at=int(i["at"]),
                    duration=int(i.get("duration", 30)),
                )
                for i in data.get("injections", [])
            )
            cfg = cls(
                grid=grid,
                network_file=net_file,
                vehicle_count=int(demand.get("vehicles", 1000)),
                t_dep=int(demand.get("departure_window", 1000)),
                od=tuple((str(o), str(d), int(c)) for o, d, c in od) if od else None,
                strategy=str(strat.get("name", "vam")),
                d_r=float(strat.get("d_r", 5000.0)),
                i_t=int(strat.get("i_t", 5)),
                n=int(strat.get("n", 5)),
                k=int(strat.get("k", 2)),
                p_r=float(strat.get("p_r", 0.85)),
                epsilon=float(strat.get("epsilon", 0.05)),
                switch_cooldown=int(strat.get("switch_cooldown", 0)),
                decision_cohorts=int(strat.get("decision_cohorts", 1)),
                alpha=float(cost.get("alpha", 0.15)),
                beta=float(cost.get("beta", 4.0)),
                saturation_flow=float(cost.get("saturation_flow", 0.5)),
                signals=bool(sig.get("enabled", True)),
                atlc=bool(sig.get("atlc", True)),
                cycle=int(sig.get("cycle", 60)),
                lost_time=int(sig.get("lost_time", 8)),
                min_green=int(sig.get("min_green", 5)),
                max_green=int(sig["max_green"]) if "max_green" in sig else None,
                dlr=bool(dlr.get("enabled", False)),
                dlr_window=int(dlr.get("window", 2)),
                dlr_cooldown=int(dlr.get("cooldown", 60)),
                injections=injections,
                seed=int(runcfg.get("seed", 1)),
                runs=int(runcfg.get("runs", 30)),
                max_ticks=int(runcfg.get("max_ticks", 0)),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad config value: {exc}") from exc
        cfg.validate()
        return cfg


@dataclass(frozen=True)
class PopulationEntry:
    origin: str
    destination: str
    depart: int


def make_network(config: ScenarioConfig) -> RoadNetwork:
    if config.network_file is not None:
        return load_network(config.network_file)
    g = config.grid
    return generate_grid(g.rows, g.cols, block_length=g.block_m, lanes=g.lanes,
                         speed=g.speed_mps, per_lane_capacity=g.per_lane_capacity)


def sample_population(net: RoadNetwork, config: ScenarioConfig, run_index: int,
                      planner: RoutePlanner) -> list[PopulationEntry]:
    """Seed-derived O-D pairs (distinct, mutually reachable) and departures
    uniform over [0, t_dep].  Replication r uses seed + r."""
    rng = np.random.default_rng(
        np.random.SeedSequence((config.seed + run_index, POPULATION_PURPOSE)))
    entries: list[PopulationEntry] = []
    if config.od is not None:
        for origin, dest, count in config.od:
            if origin == dest:
                raise ConfigError(f"od pair {origin!r}->{dest!r} is degenerate")
            for _ in range(count):
                depart = int(rng.integers(0, config.t_dep + 1))
                entries.append(PopulationEntry(origin, dest, depart))
    remainder = config.vehicle_count - len(entries)
    if remainder == 0:
        return entries
    nodes = net.node_ids
    if len(nodes) < 2:
        raise ConfigError("network too small to place distinct O-D pairs")
    for _ in range(remainder):
        for _attempt in range(100):
            o, d = rng.integers(0, len(nodes), size=2)
            if o == d:
                continue
            if planner.shortest(int(o), int(d)) is not None:
                break
        else:
            raise ConfigError("could not sample a reachable O-D pair in 100 tries")
        depart = int(rng.integers(0, config.t_dep + 1))
        entries.append(PopulationEntry(nodes[int(o)], nodes[int(d)], depart))
    return entries


def population_digest(population: Sequence[PopulationEntry]) -> str:
    import hashlib

    h = hashlib.sha256()
    for e in population:
        h.update(f"{e.origin},{e.destination},{e.depart};".encode())
    return h.hexdigest()


@dataclass
class BuiltScenario:
    world: World
    atlc_controllers: list[AtlcController]
    dlr_controllers: list[DlrController]
    population: list[PopulationEntry]


def build_scenario(config: ScenarioConfig, run_index: int,
                   net: Optional[RoadNetwork] = None,
                   planner: Optional[RoutePlanner] = None,
                   population: Optional[list[PopulationEntry]] = None
                   ) -> BuiltScenario:
    """Initialized world for one replication.

    `net`, `planner`, and `population` may be passed in to share work (and
    to guarantee identical populations) across compared strategies.
    """
    config.validate()
    if net is None:
        net = make_network(config)
    if planner is None:
        planner = RoutePlanner(net, config.k + 1)
    if population is None:
        population = sample_population(net, config, run_index, planner)

    world = World(net, config.cost_params())
    for entry in population:
        src = net.node_index(entry.origin)
        dst = net.node_index(entry.destination)
        route = planner.shortest(src, dst)
        if route is None:
            raise ConfigError(f"unreachable O-D pair {entry.origin!r} -> "
                              f"{entry.destination!r}")
        world.add_vehicle(entry.origin, entry.destination, entry.depart,
                          list(route))
    world.finalize()

    for inj in config.injections:
        if not 0 <= inj.vehicle_index < len(world.vehicles):
            raise ConfigError(f"injection vehicle index {inj.vehicle_index} "
                              f"out of range")
        world.add_injection(inj.vehicle_index, inj.edge, inj.at, inj.duration)

    atlc: list[AtlcController] = []
    if config.signals:
        atlc = install_signals(world, cycle=config.cycle,
                               lost_time=config.lost_time,
                               min_green=config.min_green,
                               max_green=config.max_green,
                               adaptive=config.atlc)
    dlr: list[DlrController] = []
    if config.dlr:
        dlr = install_dlr(world, window=config.dlr_window,
                          cooldown=config.dlr_cooldown)
    return BuiltScenario(world=world, atlc_controllers=atlc,
                         dlr_controllers=dlr, population=list(population))
