"""Shared fixtures and independent oracles used across the test suite."""
from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np
import pytest

from dtmsim.engine import MOVING, World
from dtmsim.network import Edge, Intersection, RoadNetwork

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


# -- network construction helpers -------------------------------------------

def make_net(nodes, edges) -> RoadNetwork:
    """Build a network from terse tuples.

    nodes: (id, x, y) or (id, x, y, signalized)
    edges: (id, frm, to, length) with optional lanes, speed, plcap, dual
    """
    ns = [
        Intersection(id=n[0], x=float(n[1]), y=float(n[2]),
                     signalized=bool(n[3]) if len(n) > 3 else True)
        for n in nodes
    ]
    es = []
    for e in edges:
        eid, frm, to, length = e[:4]
        lanes = e[4] if len(e) > 4 else 1
        speed = e[5] if len(e) > 5 else 10.0
        plcap = e[6] if len(e) > 6 else 10
        dual = e[7] if len(e) > 7 else None
        es.append(Edge(id=eid, frm=frm, to=to, length=float(length),
                       lanes=int(lanes), free_flow_speed=float(speed),
                       per_lane_capacity=int(plcap), dual=dual))
    return RoadNetwork(ns, es)


def triangle_net() -> RoadNetwork:
    """A->B cost 10, B->C cost 10, A->C cost 25 (free-flow seconds)."""
    return make_net(
        [("A", 0, 0), ("B", 100, 0), ("C", 200, 0)],
        [("ab", "A", "B", 100), ("bc", "B", "C", 100), ("ac", "A", "C", 250)],
    )


def line_net(n_edges: int = 2, length: float = 1000.0, speed: float = 10.0,
             plcap: int = 100, signalized: bool = False) -> RoadNetwork:
    nodes = [(f"n{i}", i * length, 0.0, signalized) for i in range(n_edges + 1)]
    edges = [(f"e{i}", f"n{i}", f"n{i+1}", length, 1, speed, plcap)
             for i in range(n_edges)]
    return make_net(nodes, edges)


def place_vehicle(world: World, edge_index: int, progress: float = 0.0,
                  route=None, destination=None):
    """Add a vehicle mid-simulation at a chosen edge and progress."""
    net = world.net
    if route is None:
        route = [edge_index]
    origin = net.node_ids[net.edge_from[route[0]]]
    dest = destination or net.node_ids[net.edge_to[route[-1]]]
    v = world.add_vehicle(origin, dest, 0, route)
    v.state = MOVING
    v.pos = route.index(edge_index)
    v.progress = progress
    world.counts[edge_index] += 1
    world._onroad.append(v)
    world.departed += 1
    return v


# -- routing oracle ----------------------------------------------------------

def enumerate_simple_paths(net: RoadNetwork, src: int, dst: int,
                           costs=None) -> list[tuple[float, tuple[int, ...]]]:
    """All node-simple paths src -> dst as (cost, edge index tuple), sorted
    by cost then edge sequence.  Exhaustive; use only on tiny graphs."""
    if costs is None:
        costs = list(net.edge_t0)
    out: list[tuple[float, tuple[int, ...]]] = []

    def walk(node, visited, path, cost):
        if node == dst and path:
            out.append((cost, tuple(path)))
            return
        for eidx, nxt in net.adjacency[node]:
            if nxt in visited:
                continue
            walk(nxt, visited | {nxt}, path + [eidx], cost + costs[eidx])

    if src == dst:
        return [(0.0, ())]
    walk(src, {src}, [], 0.0)
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def random_graph(rng: np.random.Generator, max_nodes: int = 8) -> RoadNetwork:
    """Random directed graph with distinct float edge costs (ties have
    probability zero), suitable for oracle comparison."""
    n = int(rng.integers(2, max_nodes + 1))
    nodes = [(f"n{i}", float(i * 100), float(rng.uniform(0, 100)))
             for i in range(n)]
    edges = []
    for a, b in itertools.permutations(range(n), 2):
        if rng.random() < 0.35:
            edges.append((f"e{a}-{b}", f"n{a}", f"n{b}",
                          float(rng.uniform(50.0, 150.0))))
    if not edges:
        edges.append(("e0-1", "n0", "n1", float(rng.uniform(50.0, 150.0))))
    return make_net(nodes, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
