"""Range-gated peer-to-peer beacon exchange.

Every beacon interval each on-road vehicle broadcasts its id, location,
speed, the next few edges of its current route, and the edges of its
optional routes; vehicles in range reciprocate.  The channel is lossless
and instantaneous within a round (request/response collapsed into one
symmetric exchange), and delivery is gated purely on Euclidean distance.

This module is the reference (per-object) implementation; the strategy
layer has a vectorized equivalent that is tested against it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .engine import MOVING, QUEUED, STOPPED, Vehicle, World


@dataclass(frozen=True)
class CommsParams:
    """Communication range (m), beacon interval (ticks), route-prefix
    horizon (edges)."""

    d_r: float = 5000.0
    i_t: int = 5
    n: int = 5

    def __post_init__(self):
        if not self.d_r > 0:
            raise ValueError("d_r must be > 0")
        if self.i_t < 1:
            raise ValueError("i_t must be >= 1")
        if self.n < 1:
            raise ValueError("n must be >= 1")


@dataclass(frozen=True)
class BeaconMessage:
    sender: int
    x: float
    y: float
    speed: float
    next_edges: tuple[int, ...]       # contiguous prefix of remaining route
    optional_edges: frozenset[int]    # edges on any optional route
    issued_at: int


@dataclass
class NeighborTable:
    """Latest beacon per neighbor, with stale entries evicted."""

    owner: int
    entries: dict[int, BeaconMessage] = field(default_factory=dict)


def make_beacon(world: World, v: Vehicle, params: CommsParams, tick: int,
                optional_edges: Iterable[int] = ()) -> BeaconMessage:
    x, y = world.vehicle_xy(v)
    e = v.current_edge()
    speed = 0.0 if v.state != MOVING else world.edge_speed[e]
    return BeaconMessage(
        sender=v.vid,
        x=x,
        y=y,
        speed=float(speed),
        next_edges=tuple(v.route[v.pos:v.pos + params.n]),
        optional_edges=frozenset(optional_edges),
        issued_at=tick,
    )


def on_road(world: World) -> list[Vehicle]:
    return [v for v in world.vehicles if v.state in (MOVING, QUEUED, STOPPED)]


def broadcast_round(world: World, params: CommsParams, tick: int,
                    optional_edges_of=None) -> dict[int, list[BeaconMessage]]:
    """Deliver beacons between every pair of on-road vehicles within d_r.

    The range boundary is inclusive: a pair exactly d_r apart exchanges.
    Returns the delivered messages per receiving vehicle id.
    """
    vehicles = on_road(world)
    beacons = [
        make_beacon(world, v, params, tick,
                    optional_edges_of(v) if optional_edges_of else ())
        for v in vehicles
    ]
    delivered: dict[int, list[BeaconMessage]] = {v.vid: [] for v in vehicles}
    limit = params.d_r
    for i in range(len(vehicles)):
        bi = beacons[i]
        for j in range(i + 1, len(vehicles)):
            bj = beacons[j]
            if math.hypot(bi.x - bj.x, bi.y - bj.y) <= limit:
                delivered[bi.sender].append(bj)
                delivered[bj.sender].append(bi)
    return delivered


def update_neighbor_table(table: NeighborTable, received: Iterable[BeaconMessage],
                          tick: int, params: CommsParams) -> None:
    """Keep the latest beacon per sender; evict entries older than 2 * i_t."""
    for msg in received:
        cur = table.entries.get(msg.sender)
        if cur is None or msg.issued_at >= cur.issued_at:
            table.entries[msg.sender] = msg
    horizon = 2 * params.i_t
    stale = [s for s, m in table.entries.items() if tick - m.issued_at > horizon]
    for s in stale:
        del table.entries[s]


def count_vehicles_per_edge(table: NeighborTable,
                            edges_of_interest: Optional[Iterable[int]] = None
                            ) -> dict[int, int]:
    """Distinct neighbors whose route prefix contains each edge.

    Optional-route edges in beacons indicate potential demand, not presence,
    and do not contribute.  Edges nobody reported map to 0 (no data).
    """
    counts: dict[int, int] = {}
    for msg in table.entries.values():
        for e in set(msg.next_edges):
            counts[e] = counts.get(e, 0) + 1
    if edges_of_interest is not None:
        return {e: counts.get(e, 0) for e in edges_of_interest}
    return counts
