"""Deterministic mesoscopic road traffic simulator and strategy library."""

from .comms import BeaconMessage, CommsParams, NeighborTable
from .engine import CostModelParams, World, edge_travel_time, step
from .network import (Edge, Intersection, NetworkError, RoadNetwork, Route,
                      RouteNotFound, RoutePlanner, generate_grid, load_network,
                      optional_routes, shortest_route)
from .routing import Decision, RouteEstimate, RoutingParams, decide, estimate_route
from .scenario import ConfigError, ScenarioConfig, build_scenario

__version__ = "0.1.0"

__all__ = [
    "BeaconMessage", "CommsParams", "NeighborTable",
    "CostModelParams", "World", "edge_travel_time", "step",
    "Edge", "Intersection", "NetworkError", "RoadNetwork", "Route",
    "RouteNotFound", "RoutePlanner", "generate_grid", "load_network",
    "optional_routes", "shortest_route",
    "Decision", "RouteEstimate", "RoutingParams", "decide", "estimate_route",
    "ConfigError", "ScenarioConfig", "build_scenario",
    "__version__",
]
