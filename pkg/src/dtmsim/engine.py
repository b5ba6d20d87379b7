"""Discrete-time mesoscopic flow engine.

Vehicles advance along edges at a congestion-scaled speed, queue at
signalized intersections, and discharge through green phases at a fixed
saturation flow.  Edge occupancy (not kinematics) drives all dynamics, so
the realized traversal time of an edge matches the BPR volume-delay law
used for route-cost estimation.

One engine mutates one world at a time; independent worlds (different
seeds) can run concurrently with no shared state.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .network import Edge, RoadNetwork

# vehicle states
PENDING, MOVING, QUEUED, STOPPED, ARRIVED = range(5)
STATE_NAMES = ("pending", "moving", "queued", "stopped", "arrived")


@dataclass(frozen=True)
class CostModelParams:
    """BPR volume-delay parameters plus queue discharge rate.

    saturation_flow is vehicles per green-second per lane.
    """

    alpha: float = 0.15
    beta: float = 4.0
    saturation_flow: float = 0.5

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if not self.beta >= 1:
            raise ValueError("beta must be >= 1")
        if not self.saturation_flow > 0:
            raise ValueError("saturation_flow must be > 0")


def edge_travel_time(edge: Edge, volume: float, params: CostModelParams) -> float:
    """BPR traversal time: t0 * (1 + alpha * (v / capacity)^beta)."""
    if volume < 0:
        raise ValueError("volume must be >= 0")
    t0 = edge.length / edge.free_flow_speed
    cap = edge.lanes * edge.per_lane_capacity
    return t0 * (1.0 + params.alpha * (volume / cap) ** params.beta)


def signal_wait_estimate(plan, approach_edge_id: str, queue_len: float,
                         params: CostModelParams, lanes: int) -> float:
    """Expected signal wait: half the red time plus queue discharge time.

    `plan` is a SignalPlan (see control module); duck-typed here to keep the
    engine import-free of the control plane.
    """
    green = None
    for approaches, g in plan.phases:
        if approach_edge_id in approaches:
            green = float(g)
            break
    if green is None:
        raise ValueError(f"approach {approach_edge_id!r} not in any phase of plan")
    red_fraction = 1.0 - green / plan.cycle
    return (red_fraction * plan.cycle) / 2.0 + queue_len / (params.saturation_flow * lanes)


@dataclass(slots=True)
class Vehicle:
    """Simulated agent.  Route and position are stored as dense indices."""

    vid: int
    origin: int
    destination: int
    departure_time: int
    route: list[int]          # edge indices, full route from origin
    pos: int = 0              # index into route of the current edge
    progress: float = 0.0     # fraction of current edge traversed
    state: int = PENDING
    stopped_until: int = -1
    arrived_at: Optional[int] = None
    departed_at: Optional[int] = None
    switches: int = 0
    distance: float = 0.0
    spare_time: float = 0.0   # sub-tick carry across an edge transition
    completed_at: int = -1    # tick the current edge was finished (queued)

    @property
    def id(self) -> str:
        return f"v{self.vid}"

    def current_edge(self) -> Optional[int]:
        if self.state in (MOVING, QUEUED, STOPPED) and self.route:
            return self.route[self.pos]
        return None

    def remaining_edges(self) -> list[int]:
        return self.route[self.pos:]


@dataclass(slots=True)
class Injection:
    """Forced stop: vehicle halts for `duration` ticks when it first enters
    `edge` at or after tick `at`."""

    vid: int
    edge: int
    at: int
    duration: int
    fired: bool = False
    fired_at: int = -1


class _NodeSignal:
    """Compiled per-intersection signal schedule used by the step loop."""

    __slots__ = ("plan", "cycle", "bounds", "phase_of_edge")

    def __init__(self, plan, net: RoadNetwork):
        self.plan = plan
        self.cycle = float(plan.cycle)
        self.bounds = []
        self.phase_of_edge = {}
        start = 0.0
        for i, (approaches, green) in enumerate(plan.phases):
            g = float(green)
            self.bounds.append((start, start + g))
            for eid in approaches:
                self.phase_of_edge[net.edge_index(eid)] = i
            start += g

    def is_green(self, edge_idx: int, tick: int) -> bool:
        i = self.phase_of_edge.get(edge_idx)
        if i is None:
            return True
        pos = tick % self.cycle
        s, e = self.bounds[i]
        return s <= pos < e

    def green_share(self, edge_idx: int) -> float:
        i = self.phase_of_edge.get(edge_idx)
        if i is None:
            return 1.0
        s, e = self.bounds[i]
        return (e - s) / self.cycle


class World:
    """Complete mutable simulation state for one replication."""

    def __init__(self, net: RoadNetwork, params: CostModelParams | None = None,
                 seconds_per_tick: float = 1.0):
        self.net = net
        self.params = params or CostModelParams()
        self.seconds_per_tick = seconds_per_tick
        self.tick = 0

        E = len(net.edge_ids)
        self.counts = np.zeros(E, dtype=np.int64)
        self.lanes = np.array(net.edge_lanes, dtype=np.float64)
        self.plcap = np.array(net.edge_plcap, dtype=np.float64)
        self.t0 = np.array(net.edge_t0, dtype=np.float64)
        self.edge_len = np.array(net.edge_length, dtype=np.float64)
        self.edge_speed = np.array(net.edge_speed, dtype=np.float64)
        self._x1 = np.array([net.node_x[i] for i in net.edge_from])
        self._y1 = np.array([net.node_y[i] for i in net.edge_from])
        self._x2 = np.array([net.node_x[i] for i in net.edge_to])
        self._y2 = np.array([net.node_y[i] for i in net.edge_to])
        self.credits = np.zeros(E, dtype=np.float64)
        # lane-reversal clearing state: vehicles still assigned to a lane
        # being cleared; -1 means the edge is not clearing
        self.clearing = np.full(E, -1, dtype=np.int64)

        self.vehicles: list[Vehicle] = []
        self.queues: list[deque] = [deque() for _ in range(E)]
        self._queued_edges: set[int] = set()
        self._onroad: list[Vehicle] = []
        self._pending: list[Vehicle] = []   # sorted by (departure, vid)
        self._pending_i = 0
        self._blocked_pending: list[Vehicle] = []
        self.signals: dict[int, _NodeSignal] = {}
        self.injections: dict[int, list[Injection]] = {}

        self.departed = 0
        self.arrived = 0
        self.peak_counts = np.zeros(E, dtype=np.int64)

    # -- setup -------------------------------------------------------------
    def add_vehicle(self, origin: str, destination: str, departure_time: int,
                    route_edges: list[int]) -> Vehicle:
        v = Vehicle(
            vid=len(self.vehicles),
            origin=self.net.node_index(origin),
            destination=self.net.node_index(destination),
            departure_time=departure_time,
            route=list(route_edges),
        )
        self.vehicles.append(v)
        return v

    def finalize(self) -> None:
        """Call once after all vehicles are added, before stepping."""
        self._pending = sorted(
            (v for v in self.vehicles if v.state == PENDING),
            key=lambda v: (v.departure_time, v.vid),
        )
        self._pending_i = 0

    def add_injection(self, vid: int, edge_id: str, at: int, duration: int) -> Injection:
        inj = Injection(vid=vid, edge=self.net.edge_index(edge_id), at=at,
                        duration=duration)
        self.injections.setdefault(vid, []).append(inj)
        return inj

    def set_signal_plan(self, plan) -> None:
        node = self.net.node_index(plan.intersection)
        self.signals[node] = _NodeSignal(plan, self.net)

    # -- derived quantities --------------------------------------------------
    def travel_times(self) -> np.ndarray:
        ratio = self.counts / (self.lanes * self.plcap)
        if self.params.beta == 4.0:
            load = np.square(np.square(ratio))
        else:
            load = ratio ** self.params.beta
        return self.t0 * (1.0 + self.params.alpha * load)

    def admission_caps(self) -> np.ndarray:
        open_lanes = np.where(self.clearing >= 0, self.lanes - 1, self.lanes)
        return open_lanes * self.plcap

    def queue_lengths(self) -> np.ndarray:
        return np.array([len(q) for q in self.queues], dtype=np.int64)

    def moving_counts(self) -> np.ndarray:
        """Vehicles per edge currently advancing (not queued or stopped)."""
        edges = [v.route[v.pos] for v in self._onroad if v.state == MOVING]
        return np.bincount(np.array(edges, dtype=np.intp),
                           minlength=len(self.net.edge_ids)).astype(np.int64)

    def mean_speed_fractions(self) -> np.ndarray:
        """Average realized speed per edge as a fraction of free flow.

        Moving vehicles travel at the congestion-scaled speed; queued and
        stopped vehicles count as standing still.  Empty edges read 1.0.
        """
        factor = self.t0 / self.travel_times()
        moving = self.moving_counts()
        out = np.ones(len(self.net.edge_ids))
        occupied = self.counts > 0
        out[occupied] = (factor[occupied] * moving[occupied]
                         / self.counts[occupied])
        return out

    def vehicle_xy(self, v: Vehicle) -> tuple[float, float]:
        e = v.current_edge()
        if e is None:
            i = v.origin if v.state == PENDING else v.destination
            return self.net.node_x[i], self.net.node_y[i]
        p = v.progress
        return (
            self._x1[e] + (self._x2[e] - self._x1[e]) * p,
            self._y1[e] + (self._y2[e] - self._y1[e]) * p,
        )

    def all_arrived(self) -> bool:
        return self.arrived == len(self.vehicles)

    def check_conservation(self) -> None:
        in_flight = sum(1 for v in self.vehicles if v.state in (MOVING, QUEUED))
        stopped = sum(1 for v in self.vehicles if v.state == STOPPED)
        assert self.departed == self.arrived + in_flight + stopped, (
            f"conservation violated at tick {self.tick}: departed={self.departed} "
            f"arrived={self.arrived} in_flight={in_flight} stopped={stopped}"
        )
        by_edge = np.zeros(len(self.net.edge_ids), dtype=np.int64)
        for v in self.vehicles:
            e = v.current_edge()
            if e is not None:
                by_edge[e] += 1
        assert np.array_equal(by_edge, self.counts), "edge counts out of sync"


def _maybe_stop(world: World, v: Vehicle, edge: int, tick: int, events: list) -> bool:
    for inj in world.injections.get(v.vid, ()):
        if not inj.fired and inj.edge == edge and tick >= inj.at:
            inj.fired = True
            inj.fired_at = tick
            v.state = STOPPED
            v.stopped_until = tick + inj.duration
            events.append(("stop", v.vid, edge, v.stopped_until))
            return True
    return False


def step(world: World, tick: int) -> list[tuple]:
    """Advance the world by one tick; returns the event list.

    Phase order: wake stopped vehicles, advance movers, discharge queues,
    admit due departures.  Iteration orders are fixed, so the step is a
    deterministic function of the world state.
    """
    if tick != world.tick:
        raise ValueError(f"step called with tick {tick}, world is at {world.tick}")
    events: list[tuple] = []
    counts = world.counts
    caps = world.admission_caps().tolist()
    tt = world.travel_times().tolist()   # plain floats: scalar math is hot
    sat = world.params.saturation_flow

    # wake
    for v in world._onroad:
        if v.state == STOPPED and v.stopped_until <= tick:
            v.state = MOVING
            events.append(("resume", v.vid, tick))

    # advance movers
    survivors: list[Vehicle] = []
    for v in world._onroad:
        if v.state != MOVING:
            survivors.append(v)
            continue
        e = v.route[v.pos]
        v.progress += 1.0 / tt[e]
        if v.progress >= 1.0:
            if v.pos == len(v.route) - 1:
                counts[e] -= 1
                if world.clearing[e] > 0:
                    world.clearing[e] -= 1
                v.state = ARRIVED
                v.arrived_at = tick
                world.arrived += 1
                events.append(("arrive", v.vid, tick))
                continue
            v.spare_time = min((v.progress - 1.0) * tt[e], 1.0)
            v.progress = 1.0
            v.completed_at = tick
            v.state = QUEUED
            world.queues[e].append(v)
            world._queued_edges.add(e)
            events.append(("queue", v.vid, e, tick))
        survivors.append(v)
    world._onroad = survivors

    # discharge queues
    drained = []
    for e in sorted(world._queued_edges):
        q = world.queues[e]
        if not q:
            drained.append(e)
            world.credits[e] = 0.0
            continue
        sig = world.signals.get(world.net.edge_to[e])
        if sig is None or e not in sig.phase_of_edge:
            credit = float("inf")
        elif sig.is_green(e, tick):
            credit = world.credits[e] + sat * world.lanes[e]
        else:
            continue
        while q and credit >= 1.0:
            v = q[0]
            f = v.route[v.pos + 1]
            if counts[f] >= caps[f]:
                break
            q.popleft()
            counts[e] -= 1
            if world.clearing[e] > 0:
                world.clearing[e] -= 1
            counts[f] += 1
            v.pos += 1
            v.progress = (v.spare_time / tt[f]) if v.completed_at == tick else 0.0
            v.spare_time = 0.0
            v.state = MOVING
            v.distance += world.edge_len[f]
            credit -= 1.0
            events.append(("enter", v.vid, f, tick))
            _maybe_stop(world, v, f, tick, events)
        if credit != float("inf"):
            world.credits[e] = min(credit, 1.0)
        if not q:
            drained.append(e)
            world.credits[e] = 0.0
    for e in drained:
        world._queued_edges.discard(e)

    # admissions: due departures, then previously blocked ones
    due: list[Vehicle] = []
    while (world._pending_i < len(world._pending)
           and world._pending[world._pending_i].departure_time <= tick):
        due.append(world._pending[world._pending_i])
        world._pending_i += 1
    still_blocked: list[Vehicle] = []
    for v in world._blocked_pending + due:
        f = v.route[0]
        if counts[f] < caps[f]:
            counts[f] += 1
            v.state = MOVING
            v.departed_at = tick
            v.distance += world.edge_len[f]
            world.departed += 1
            world._onroad.append(v)
            events.append(("depart", v.vid, tick))
            _maybe_stop(world, v, f, tick, events)
        else:
            still_blocked.append(v)
    world._blocked_pending = still_blocked

    world.peak_counts = np.maximum(world.peak_counts, counts)
    world.tick = tick + 1
    return events
