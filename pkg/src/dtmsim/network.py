"""Road graph model, synthetic grid generation, and least-cost routing.

The network is a directed graph of intersections (nodes) and lane-bearing
edges.  Opposite-direction edges between the same pair of intersections may
be dual-paired, which is what makes them eligible for lane reversal.

Networks are immutable after construction; routing functions are pure and
reentrant.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence

FORMAT_VERSION = 1


class NetworkError(ValueError):
    """A network description violates a structural invariant."""


class RouteNotFound(LookupError):
    """Destination unreachable from origin."""


@dataclass(frozen=True)
class Intersection:
    id: str
    x: float
    y: float
    signalized: bool = True


@dataclass(frozen=True)
class Edge:
    id: str
    frm: str
    to: str
    length: float
    lanes: int
    free_flow_speed: float
    per_lane_capacity: int
    dual: Optional[str] = None

    @property
    def free_flow_time(self) -> float:
        return self.length / self.free_flow_speed


@dataclass(frozen=True)
class Route:
    """An ordered, connected sequence of edges from origin to destination.

    The empty route (origin == destination) is legal.
    """

    edges: tuple[str, ...]
    origin: str
    destination: str

    def __len__(self) -> int:
        return len(self.edges)


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


class RoadNetwork:
    """Validated directed road graph with an adjacency index.

    Edges and intersections are exposed by id; internally every edge and
    node also has a dense integer index (assigned in sorted-id order) used
    by the simulation engine.
    """

    def __init__(self, intersections: Iterable[Intersection], edges: Iterable[Edge]):
        nodes: dict[str, Intersection] = {}
        for n in intersections:
            if n.id in nodes:
                raise NetworkError(f"duplicate intersection id {n.id!r}")
            if not (_finite(n.x) and _finite(n.y)):
                raise NetworkError(f"intersection {n.id!r} has non-finite position")
            nodes[n.id] = n

        emap: dict[str, Edge] = {}
        for e in edges:
            if e.id in emap:
                raise NetworkError(f"duplicate edge id {e.id!r}")
            if e.frm not in nodes:
                raise NetworkError(f"edge {e.id!r} references unknown intersection {e.frm!r}")
            if e.to not in nodes:
                raise NetworkError(f"edge {e.id!r} references unknown intersection {e.to!r}")
            if e.frm == e.to:
                raise NetworkError(f"edge {e.id!r} is a self-loop at {e.frm!r}")
            if not (_finite(e.length) and e.length > 0):
                raise NetworkError(f"edge {e.id!r} has non-positive length")
            if not (_finite(e.free_flow_speed) and e.free_flow_speed > 0):
                raise NetworkError(f"edge {e.id!r} has non-positive free-flow speed")
            if e.lanes < 1:
                raise NetworkError(f"edge {e.id!r} has fewer than one lane")
            if e.per_lane_capacity <= 0:
                raise NetworkError(f"edge {e.id!r} has non-positive per-lane capacity")
            emap[e.id] = e
        for e in emap.values():
            if e.dual is not None:
                d = emap.get(e.dual)
                if d is None:
                    raise NetworkError(f"edge {e.id!r} pairs with unknown edge {e.dual!r}")
                if d.dual != e.id:
                    raise NetworkError(
                        f"asymmetric dual pairing: {e.id!r} -> {e.dual!r} but "
                        f"{d.id!r} -> {d.dual!r}"
                    )
                if not (d.frm == e.to and d.to == e.frm):
                    raise NetworkError(
                        f"dual pair {e.id!r}/{d.id!r} does not connect opposite directions"
                    )

        self.intersections: dict[str, Intersection] = dict(sorted(nodes.items()))
        self.edges: dict[str, Edge] = dict(sorted(emap.items()))

        self.node_ids: tuple[str, ...] = tuple(self.intersections)
        self.edge_ids: tuple[str, ...] = tuple(self.edges)
        self._nidx = {nid: i for i, nid in enumerate(self.node_ids)}
        self._eidx = {eid: i for i, eid in enumerate(self.edge_ids)}

        elist = [self.edges[eid] for eid in self.edge_ids]
        self.edge_from = [self._nidx[e.frm] for e in elist]
        self.edge_to = [self._nidx[e.to] for e in elist]
        self.edge_length = [e.length for e in elist]
        self.edge_lanes = [e.lanes for e in elist]
        self.edge_speed = [e.free_flow_speed for e in elist]
        self.edge_plcap = [e.per_lane_capacity for e in elist]
        self.edge_t0 = [e.length / e.free_flow_speed for e in elist]
        self.edge_dual = [self._eidx[e.dual] if e.dual is not None else -1 for e in elist]
        self.node_x = [n.x for n in self.intersections.values()]
        self.node_y = [n.y for n in self.intersections.values()]
        self.node_signalized = [n.signalized for n in self.intersections.values()]

        # adjacency: per node, outgoing (edge_idx, to_node) sorted by edge id
        adj: list[list[tuple[int, int]]] = [[] for _ in self.node_ids]
        for i, e in enumerate(elist):
            adj[self.edge_from[i]].append((i, self.edge_to[i]))
        self.adjacency: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(sorted(a)) for a in adj
        )

    # -- id/index helpers -------------------------------------------------
    def node_index(self, nid: str) -> int:
        try:
            return self._nidx[nid]
        except KeyError:
            raise NetworkError(f"unknown intersection id {nid!r}") from None

    def edge_index(self, eid: str) -> int:
        try:
            return self._eidx[eid]
        except KeyError:
            raise NetworkError(f"unknown edge id {eid!r}") from None

    def out_edges(self, nid: str) -> tuple[str, ...]:
        return tuple(self.edge_ids[i] for i, _ in self.adjacency[self.node_index(nid)])

    def validate_route(self, route: Route) -> None:
        if not route.edges:
            if route.origin != route.destination:
                raise NetworkError("empty route with origin != destination")
            self.node_index(route.origin)
            return
        prev_to = None
        for eid in route.edges:
            e = self.edges.get(eid)
            if e is None:
                raise NetworkError(f"route references unknown edge {eid!r}")
            if prev_to is not None and e.frm != prev_to:
                raise NetworkError(f"route breaks at edge {eid!r}: {prev_to!r} != {e.frm!r}")
            prev_to = e.to
        if self.edges[route.edges[0]].frm != route.origin:
            raise NetworkError("route does not start at its origin")
        if prev_to != route.destination:
            raise NetworkError("route does not end at its destination")

    def route_from_indices(self, idxs: Sequence[int], origin_idx: int) -> Route:
        if not idxs:
            nid = self.node_ids[origin_idx]
            return Route(edges=(), origin=nid, destination=nid)
        return Route(
            edges=tuple(self.edge_ids[i] for i in idxs),
            origin=self.node_ids[origin_idx],
            destination=self.node_ids[self.edge_to[idxs[-1]]],
        )

    # -- serialization ----------------------------------------------------
    def to_text(self) -> str:
        """Canonical TOML serialization (deterministic, sorted by id)."""
        lines = [f"format_version = {FORMAT_VERSION}", ""]
        for n in self.intersections.values():
            lines += [
                "[[intersections]]",
                f'id = "{n.id}"',
                f"x = {n.x!r}",
                f"y = {n.y!r}",
                f"signalized = {'true' if n.signalized else 'false'}",
                "",
            ]
        for e in self.edges.values():
            lines += [
                "[[edges]]",
                f'id = "{e.id}"',
                f'from = "{e.frm}"',
                f'to = "{e.to}"',
                f"length = {e.length!r}",
                f"lanes = {e.lanes}",
                f"free_flow_speed = {e.free_flow_speed!r}",
                f"per_lane_capacity = {e.per_lane_capacity}",
            ]
            if e.dual is not None:
                lines.append(f'dual = "{e.dual}"')
            lines.append("")
        return "\n".join(lines)


def load_network(source) -> RoadNetwork:
    """Build a validated RoadNetwork from a TOML description.

    `source` may be a path, TOML text, or an already-parsed mapping with
    `format_version`, `intersections`, and `edges` keys.
    """
    try:
        import tomllib
    except ModuleNotFoundError:   # Python < 3.11
        import tomli as tomllib

    if isinstance(source, Mapping):
        data = source
    else:
        s = str(source)
        try:
            with open(s, "rb") as fh:
                data = tomllib.load(fh)
        except (OSError, ValueError):
            try:
                data = tomllib.loads(s)
            except tomllib.TOMLDecodeError as exc:
                raise NetworkError(f"unparseable network description: {exc}") from exc

    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise NetworkError(f"unsupported format_version {version!r}")
    try:
        nodes = [
            Intersection(
                id=str(n["id"]),
                x=float(n["x"]),
                y=float(n["y"]),
                signalized=bool(n.get("signalized", True)),
            )
            for n in data.get("intersections", [])
        ]
        edges = [
            Edge(
                id=str(e["id"]),
                frm=str(e["from"]),
                to=str(e["to"]),
                length=float(e["length"]),
                lanes=int(e["lanes"]),
                free_flow_speed=float(e["free_flow_speed"]),
                per_lane_capacity=int(e["per_lane_capacity"]),
                dual=str(e["dual"]) if "dual" in e else None,
            )
            for e in data.get("edges", [])
        ]
    except KeyError as exc:
        raise NetworkError(f"missing field {exc.args[0]!r} in network description") from exc
    return RoadNetwork(nodes, edges)


def generate_grid(
    rows: int,
    cols: int,
    block_length: float = 500.0,
    lanes: int = 2,
    speed: float = 12.5,
    per_lane_capacity: int = 40,
    signalized: bool = True,
) -> RoadNetwork:
    """Synthetic rows x cols street grid with dual-paired edges.

    Deterministic ids: node "n{row}-{col}", edge "{from}~{to}". Every
    adjacent node pair gets one edge per direction, paired as duals.
    """
    if rows < 2 or cols < 2:
        raise NetworkError("grid requires rows >= 2 and cols >= 2")
    nodes = [
        Intersection(id=f"n{r}-{c}", x=c * block_length, y=r * block_length,
                     signalized=signalized)
        for r in range(rows)
        for c in range(cols)
    ]
    edges: list[Edge] = []

    def connect(a: str, b: str) -> None:
        eid_ab, eid_ba = f"{a}~{b}", f"{b}~{a}"
        for eid, frm, to, dual in ((eid_ab, a, b, eid_ba), (eid_ba, b, a, eid_ab)):
            edges.append(
                Edge(id=eid, frm=frm, to=to, length=block_length, lanes=lanes,
                     free_flow_speed=speed, per_lane_capacity=per_lane_capacity,
                     dual=dual)
            )

    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                connect(f"n{r}-{c}", f"n{r}-{c + 1}")
            if r + 1 < rows:
                connect(f"n{r}-{c}", f"n{r + 1}-{c}")
    return RoadNetwork(nodes, edges)


# -- pathfinding ---------------------------------------------------------

def _resolve_costs(net: RoadNetwork, cost: Optional[Callable[[Edge], float]]) -> list[float]:
    if cost is None:
        return list(net.edge_t0)
    costs = [float(cost(net.edges[eid])) for eid in net.edge_ids]
    for eid, c in zip(net.edge_ids, costs):
        if not (math.isfinite(c) and c >= 0):
            raise ValueError(f"cost({eid!r}) = {c!r} is not a finite non-negative number")
    return costs


def _dijkstra_idx(
    adjacency,
    costs: Sequence[float],
    src: int,
    dst: int,
    banned_nodes: frozenset = frozenset(),
    banned_edges: frozenset = frozenset(),
) -> Optional[tuple[float, tuple[int, ...]]]:
    """Least-cost simple path as (cost, edge index tuple), or None.

    Ties between equal-cost expansions are broken by the smaller edge-index
    sequence, which equals edge-id order because indices are assigned in
    sorted-id order.
    """
    if src == dst:
        return 0.0, ()
    heap: list[tuple[float, tuple[int, ...], int]] = [(0.0, (), src)]
    settled: set[int] = set()
    while heap:
        cost, path, node = heapq.heappop(heap)
        if node == dst:
            return cost, path
        if node in settled:
            continue
        settled.add(node)
        for eidx, nxt in adjacency[node]:
            if nxt in settled or eidx in banned_edges or nxt in banned_nodes:
                continue
            heapq.heappush(heap, (cost + costs[eidx], path + (eidx,), nxt))
    return None


def _yen_idx(
    adjacency,
    edge_to: Sequence[int],
    costs: Sequence[float],
    src: int,
    dst: int,
    kmax: int,
) -> list[tuple[float, tuple[int, ...]]]:
    """Up to kmax loop-free least-cost paths in nondecreasing cost order."""
    best = _dijkstra_idx(adjacency, costs, src, dst)
    if best is None:
        return []
    paths = [best]
    if src == dst or kmax <= 1:
        return paths[:kmax]
    candidates: list[tuple[float, tuple[int, ...]]] = []
    seen = {best[1]}
    while len(paths) < kmax:
        _, prev = paths[-1]
        pnodes = [src] + [edge_to[e] for e in prev]
        root_cost = 0.0
        for i in range(len(prev)):
            spur_node = pnodes[i]
            root = prev[:i]
            banned_edges = {
                p[i] for _, p in paths if len(p) > i and p[:i] == root
            }
            banned_nodes = frozenset(pnodes[:i])
            res = _dijkstra_idx(
                adjacency, costs, spur_node, dst,
                banned_nodes, frozenset(banned_edges),
            )
            if res is not None:
                scost, spath = res
                total = root + spath
                if total not in seen:
                    seen.add(total)
                    heapq.heappush(candidates, (root_cost + scost, total))
            root_cost += costs[prev[i]]
        if not candidates:
            break
        paths.append(heapq.heappop(candidates))
    return paths


def shortest_route(
    net: RoadNetwork,
    origin: str,
    destination: str,
    cost: Optional[Callable[[Edge], float]] = None,
) -> Route:
    """Minimum-total-cost route under a non-negative per-edge cost function.

    Default cost is free-flow traversal time.  Raises RouteNotFound when the
    destination is unreachable.
    """
    src, dst = net.node_index(origin), net.node_index(destination)
    res = _dijkstra_idx(net.adjacency, _resolve_costs(net, cost), src, dst)
    if res is None:
        raise RouteNotFound(f"no route from {origin!r} to {destination!r}")
    return net.route_from_indices(res[1], src)


def route_cost(
    net: RoadNetwork,
    route: Route,
    cost: Optional[Callable[[Edge], float]] = None,
) -> float:
    if cost is None:
        return sum(net.edges[eid].free_flow_time for eid in route.edges)
    return sum(float(cost(net.edges[eid])) for eid in route.edges)


def optional_routes(
    net: RoadNetwork,
    origin: str,
    destination: str,
    k: int,
    cost: Optional[Callable[[Edge], float]] = None,
) -> list[Route]:
    """Up to k loop-free alternatives to the shortest route.

    Alternatives are pairwise distinct, distinct from the shortest route, and
    returned in nondecreasing cost order (k-shortest-paths semantics).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    src, dst = net.node_index(origin), net.node_index(destination)
    costs = _resolve_costs(net, cost)
    paths = _yen_idx(net.adjacency, net.edge_to, costs, src, dst, k + 1)
    if not paths:
        raise RouteNotFound(f"no route from {origin!r} to {destination!r}")
    return [net.route_from_indices(p, src) for _, p in paths[1:]]


class RoutePlanner:
    """Memoized free-flow route candidates per (origin, destination) pair.

    The candidate list holds up to kmax loop-free routes (shortest first) as
    edge-index tuples.  Free-flow costs are static, so results may be shared
    across runs on the same network.
    """

    def __init__(self, net: RoadNetwork, kmax: int):
        self.net = net
        self.kmax = kmax
        self._costs = list(net.edge_t0)
        self._memo: dict[tuple[int, int], tuple[tuple[int, ...], ...]] = {}

    def candidates(self, src: int, dst: int) -> tuple[tuple[int, ...], ...]:
        key = (src, dst)
        hit = self._memo.get(key)
        if hit is None:
            paths = _yen_idx(
                self.net.adjacency, self.net.edge_to, self._costs, src, dst, self.kmax
            )
            hit = tuple(p for _, p in paths)
            self._memo[key] = hit
        return hit

    def shortest(self, src: int, dst: int) -> Optional[tuple[int, ...]]:
        cands = self.candidates(src, dst)
        return cands[0] if cands else None
