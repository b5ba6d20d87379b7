"""Comparison strategies: omniscient centralized routing, congestion-zone
alerting, and no action.

These are the pure decision functions; the strategy layer wires them into
the simulation loop.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .engine import CostModelParams, World
from .network import Edge, RoadNetwork, Route, shortest_route


@dataclass(frozen=True)
class CongestionZone:
    """An edge whose average speed stayed below a fraction of free flow long
    enough to be declared congested."""

    center_edge: str
    radius: float
    active_since: int


def centralized_route(net: RoadNetwork, origin: str, destination: str,
                      counts: Mapping[str, int],
                      params: CostModelParams) -> Route:
    """Minimum current-cost route using exact global edge counts.

    Oracle access to the whole network state; serves as the performance
    upper bound among the strategies.
    """
    def cost(e: Edge) -> float:
        from .engine import edge_travel_time
        return edge_travel_time(e, counts.get(e.id, 0), params)

    return shortest_route(net, origin, destination, cost)


def alert_reroute(net: RoadNetwork, remaining: Route,
                  zones: Sequence[CongestionZone],
                  alert_distance_edges: int = 2,
                  penalty: float = 10.0) -> Optional[Route]:
    """Reroute around a congestion zone the vehicle is about to enter.

    Triggers only when a zone edge lies within the next few edges of the
    remaining route.  The replacement is a free-flow shortest route with
    zone edges soft-penalized (never hard-excluded, so reachability is
    preserved).  Returns None to stay on the current route.
    """
    if not zones or not remaining.edges:
        return None
    zone_edges = {z.center_edge for z in zones}
    horizon = remaining.edges[:alert_distance_edges + 1]
    if not any(e in zone_edges for e in horizon):
        return None

    def cost(e: Edge) -> float:
        base = e.free_flow_time
        return base * penalty if e.id in zone_edges else base

    return shortest_route(net, remaining.origin, remaining.destination, cost)


def no_action(*_args, **_kwargs) -> None:
    """Keep the initial free-flow shortest route forever."""
    return None
