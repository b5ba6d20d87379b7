"""Per-vehicle rerouting decision logic.

From neighbor-reported edge counts a vehicle estimates the delay of its
current route and each alternative (volume-delay travel time plus expected
signal waits), recommends the best, and follows the recommendation with
compliance probability p_r.  A small relative switch margin damps
oscillation between near-equal routes; epsilon = 0 recovers the bare
best-estimate rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .engine import CostModelParams, edge_travel_time, signal_wait_estimate
from .network import RoadNetwork, Route


@dataclass(frozen=True)
class RoutingParams:
    p_r: float = 0.85
    epsilon: float = 0.05
    switch_cooldown: int = 0   # ticks a driver sticks with a new route
    # decision rounds are split over this many staggered vehicle cohorts so
    # drivers do not all re-evaluate (and pile onto the same alternative)
    # in the same tick; 1 = everyone decides every round
    decision_cohorts: int = 1
    unknown_edge_policy: str = "free-flow"   # or "last-known"

    def __post_init__(self):
        if not 0.0 <= self.p_r <= 1.0:
            raise ValueError("p_r must be in [0, 1]")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.switch_cooldown < 0:
            raise ValueError("switch_cooldown must be >= 0")
        if self.decision_cohorts < 1:
            raise ValueError("decision_cohorts must be >= 1")
        if self.unknown_edge_policy not in ("free-flow", "last-known"):
            raise ValueError(f"unknown policy {self.unknown_edge_policy!r}")


@dataclass(frozen=True)
class RouteEstimate:
    route: Route
    total_delay: float
    breakdown: tuple[tuple[str, float, float], ...]  # (edge, travel s, wait s)
    data_coverage: float


def estimate_route(net: RoadNetwork, route: Route, counts: Mapping[str, int],
                   plans: Mapping[str, object], cost_params: CostModelParams,
                   params: RoutingParams | None = None,
                   last_known: Mapping[str, int] | None = None) -> RouteEstimate:
    """Expected delay of a route from observed per-edge counts.

    `counts` holds only edges somebody reported; missing edges follow the
    unknown-edge policy (free flow by default, or `last_known` values).
    `plans` maps intersection id -> SignalPlan for signalized nodes.
    """
    params = params or RoutingParams()
    breakdown = []
    total = 0.0
    covered = 0
    for eid in route.edges:
        edge = net.edges.get(eid)
        if edge is None:
            raise KeyError(f"route references unknown edge {eid!r}")
        if eid in counts:
            volume = counts[eid]
            covered += 1
        elif params.unknown_edge_policy == "last-known" and last_known:
            volume = last_known.get(eid, 0)
        else:
            volume = 0
        travel = edge_travel_time(edge, volume, cost_params)
        wait = 0.0
        plan = plans.get(edge.to)
        if plan is not None:
            try:
                wait = signal_wait_estimate(plan, eid, 0.0, cost_params, edge.lanes)
            except ValueError:
                wait = 0.0   # approach not signal-controlled
        breakdown.append((eid, travel, wait))
        total += travel + wait
    coverage = covered / len(route.edges) if route.edges else 1.0
    return RouteEstimate(route=route, total_delay=total,
                         breakdown=tuple(breakdown), data_coverage=coverage)


@dataclass(frozen=True)
class Decision:
    action: str                    # "stay" | "switch"
    chosen: Optional[int] = None   # index into alternatives when switching
    recommended: Optional[int] = None


def decide(current: RouteEstimate, alternatives: Sequence[RouteEstimate],
           params: RoutingParams, draw: float) -> Decision:
    """Recommend the cheapest alternative when it beats the current route by
    more than the switch margin; the driver complies iff draw < p_r.

    Ties favor the current route.  Deterministic given (estimates, params,
    draw)."""
    if not alternatives:
        return Decision("stay")
    best_i = min(range(len(alternatives)),
                 key=lambda i: (alternatives[i].total_delay, i))
    best = alternatives[best_i]
    if not best.total_delay < (1.0 - params.epsilon) * current.total_delay:
        return Decision("stay")
    if draw < params.p_r:
        return Decision("switch", chosen=best_i, recommended=best_i)
    return Decision("stay", recommended=best_i)
