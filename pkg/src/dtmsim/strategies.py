"""Simulation-loop strategy coordinators.

A strategy observes the world before each tick and may rewrite vehicles'
remaining routes.  Four are provided:

* ``vam``          -- peer-to-peer beacon exchange, local density estimates,
                      probabilistic compliance.  Has a vectorized fast path
                      and a reference path built on the comms/routing
                      modules; both produce identical behavior.
* ``centralized``  -- omniscient recomputation from exact global counts.
* ``alert``        -- congestion-zone alerting with reactive rerouting.
* ``none``         -- initial free-flow shortest route, never changed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as csgraph_dijkstra
from scipy.spatial import cKDTree

from . import comms as comms_mod
from .baselines import CongestionZone
from .comms import CommsParams, NeighborTable
from .engine import ARRIVED, MOVING, QUEUED, STOPPED, World
from .network import RoutePlanner
from .routing import RoutingParams

COMPLIANCE_PURPOSE = 0xC0


@dataclass
class DecisionRecord:
    tick: int
    vid: int
    current_est: float
    best_alt_est: float
    recommended: bool
    complied: bool


class Strategy:
    name = "base"

    def before_step(self, world: World, tick: int) -> None:
        pass

    def after_step(self, world: World, tick: int, events: list) -> None:
        pass


class NoActionStrategy(Strategy):
    name = "none"


def _active_vehicles(world: World):
    return [v for v in world.vehicles if v.state in (MOVING, QUEUED, STOPPED)]


def _signal_wait_vector(world: World) -> np.ndarray:
    """Expected empty-queue signal wait per edge under the current plans."""
    wait = np.zeros(len(world.net.edge_ids))
    for sig in world.signals.values():
        for e, i in sig.phase_of_edge.items():
            s, t = sig.bounds[i]
            wait[e] = (1.0 - (t - s) / sig.cycle) * sig.cycle / 2.0
    return wait


def _reverse_cost_graph(world: World, edge_cost: np.ndarray):
    """Reverse-graph CSR of per-edge costs plus the chosen forward edge per
    (from, to) node pair (cheapest, then smallest edge index)."""
    net = world.net
    n = len(net.node_ids)
    best: dict[tuple[int, int], int] = {}
    for e in range(len(net.edge_ids)):
        key = (net.edge_from[e], net.edge_to[e])
        cur = best.get(key)
        if cur is None or (edge_cost[e], e) < (edge_cost[cur], cur):
            best[key] = e
    rows, cols, data, chosen = [], [], [], {}
    for (u, v), e in best.items():
        rows.append(v)
        cols.append(u)
        data.append(edge_cost[e])
        chosen[(u, v)] = e
    graph = csr_matrix((data, (rows, cols)), shape=(n, n))
    return graph, chosen


def _tree_routes(world: World, edge_cost: np.ndarray, dests: list[int]):
    """Shortest-path predecessor trees toward each destination."""
    graph, chosen = _reverse_cost_graph(world, edge_cost)
    dist, pred = csgraph_dijkstra(graph, indices=dests, return_predecessors=True)
    return dist, pred, chosen


def _walk_tree(pred_row, chosen, u: int, dest: int) -> Optional[list[int]]:
    if u == dest:
        return []
    edges = []
    node = u
    while node != dest:
        nxt = pred_row[node]
        if nxt < 0:
            return None
        edges.append(chosen[(node, nxt)])
        node = nxt
    return edges


class VamStrategy(Strategy):
    """Beacon exchange, density estimation, and probabilistic rerouting.

    Every i_t ticks each on-road vehicle exchanges beacons with peers in
    range, estimates the delay of its remaining route and of the k-shortest
    alternatives from its next intersection, and switches with probability
    p_r when the best alternative beats the current estimate by more than
    the switch margin.
    """

    name = "vam"

    def __init__(self, planner: RoutePlanner, comms: CommsParams,
                 routing: RoutingParams, seed_key: tuple[int, ...],
                 mode: str = "fast", record_decisions: bool = False):
        if mode not in ("fast", "reference"):
            raise ValueError(f"unknown mode {mode!r}")
        self.planner = planner
        self.comms = comms
        self.routing = routing
        self.seed_key = seed_key
        self.mode = mode
        self.record_decisions = record_decisions
        self.decisions: list[DecisionRecord] = []
        self._rngs: dict[int, np.random.Generator] = {}
        self._tables: dict[int, NeighborTable] = {}
        self._cooldown_until: dict[int, int] = {}
        # per-vehicle segment index arrays for its latest (route, position)
        self._seg_cache: dict[int, tuple] = {}
        self._route_ver: dict[int, int] = {}
        # fast-path beacon history: (tick, pair codes, announcement arrays)
        self._history: list[tuple[int, np.ndarray, tuple]] = []

    # -- shared helpers ----------------------------------------------------
    def _draw(self, vid: int) -> float:
        rng = self._rngs.get(vid)
        if rng is None:
            rng = np.random.default_rng(
                np.random.SeedSequence(self.seed_key + (COMPLIANCE_PURPOSE, vid)))
            self._rngs[vid] = rng
        return float(rng.random())

    def _candidate_suffixes(self, world: World, v) -> tuple[int, list[tuple[int, ...]]]:
        """Current edge plus alternative suffixes from its downstream node."""
        e = v.route[v.pos]
        u = world.net.edge_to[e]
        rem_suffix = tuple(v.route[v.pos + 1:])
        alts = [c for c in self.planner.candidates(u, v.destination) if c != rem_suffix]
        return e, alts

    def _decides_now(self, vid: int, tick: int) -> bool:
        m = self.routing.decision_cohorts
        return m == 1 or (tick // self.comms.i_t + vid) % m == 0

    def _apply_decision(self, world: World, v, tick: int, cur_cost: float,
                        alt_costs: list[float], alt_suffixes) -> None:
        if not alt_costs:
            return
        if not self._decides_now(v.vid, tick):
            return
        if tick < self._cooldown_until.get(v.vid, 0):
            return
        best_i = min(range(len(alt_costs)), key=lambda i: (alt_costs[i], i))
        best_cost = alt_costs[best_i]
        recommended = best_cost < (1.0 - self.routing.epsilon) * cur_cost
        complied = False
        if recommended:
            draw = self._draw(v.vid)
            if draw < self.routing.p_r:
                complied = True
                v.route = v.route[:v.pos + 1] + list(alt_suffixes[best_i])
                v.switches += 1
                self._route_ver[v.vid] = self._route_ver.get(v.vid, 0) + 1
                if self.routing.switch_cooldown > 0:
                    self._cooldown_until[v.vid] = tick + self.routing.switch_cooldown
        if self.record_decisions:
            self.decisions.append(DecisionRecord(
                tick=tick, vid=v.vid, current_est=cur_cost,
                best_alt_est=best_cost, recommended=recommended,
                complied=complied))

    # -- main hook -----------------------------------------------------------
    def before_step(self, world: World, tick: int) -> None:
        if tick % self.comms.i_t != 0:
            return
        if self.mode == "reference":
            self._epoch_reference(world, tick)
        else:
            self._epoch_fast(world, tick)

    # -- reference path (comms/routing modules, per-object) -----------------
    def _epoch_reference(self, world: World, tick: int) -> None:
        net = world.net

        def optional_edges_of(v):
            _, alts = self._candidate_suffixes(world, v)
            return {e for s in alts for e in s}

        delivered = comms_mod.broadcast_round(world, self.comms, tick,
                                              optional_edges_of)
        actives = _active_vehicles(world)
        wait0 = _signal_wait_vector(world)
        t0 = world.t0
        cap = world.lanes * world.plcap
        a, b = world.params.alpha, world.params.beta
        for v in actives:
            table = self._tables.setdefault(v.vid, NeighborTable(owner=v.vid))
            comms_mod.update_neighbor_table(table, delivered.get(v.vid, ()),
                                            tick, self.comms)
        for v in actives:
            if not self._decides_now(v.vid, tick):
                continue
            counts = comms_mod.count_vehicles_per_edge(self._tables[v.vid])

            def est(edges) -> float:
                total = 0.0
                for e in edges:
                    volume = counts.get(e, 0)
                    total += t0[e] * (1.0 + a * (volume / cap[e]) ** b) + wait0[e]
                return total

            e, alts = self._candidate_suffixes(world, v)
            if not alts:
                continue
            cur = est(v.route[v.pos:])
            alt_costs = [est((e,) + s) for s in alts]
            self._apply_decision(world, v, tick, cur, alt_costs, alts)

    # -- fast path (vectorized, behaviorally identical) ---------------------
    def _epoch_fast(self, world: World, tick: int) -> None:
        actives = _active_vehicles(world)
        nv = len(world.vehicles)
        E = len(world.net.edge_ids)
        vids = np.array([v.vid for v in actives], dtype=np.int64)

        # delivered pairs as sorted receiver*nv+sender codes (no self-pairs:
        # query_pairs yields i < j only)
        if actives:
            e_arr = np.array([v.route[v.pos] for v in actives], dtype=np.intp)
            p_arr = np.array([v.progress for v in actives])
            xy = np.column_stack([
                world._x1[e_arr] + (world._x2[e_arr] - world._x1[e_arr]) * p_arr,
                world._y1[e_arr] + (world._y2[e_arr] - world._y1[e_arr]) * p_arr,
            ])
            pairs = cKDTree(xy).query_pairs(self.comms.d_r, output_type="ndarray")
        else:
            pairs = np.zeros((0, 2), dtype=np.intp)
        if len(pairs):
            gi, gj = vids[pairs[:, 0]], vids[pairs[:, 1]]
            codes_now = np.concatenate([gi * nv + gj, gj * nv + gi])
        else:
            codes_now = np.zeros(0, dtype=np.int64)
        # announcements as a CSR-style (indptr by sender vid, edge columns)
        ann_cols = np.array([e for v in actives
                             for e in v.route[v.pos:v.pos + self.comms.n]],
                            dtype=np.intp)
        lens_nv = np.zeros(nv, dtype=np.intp)
        lens_nv[vids] = [min(self.comms.n, len(v.route) - v.pos)
                         for v in actives]
        ann_indptr = np.zeros(nv + 1, dtype=np.intp)
        np.cumsum(lens_nv, out=ann_indptr[1:])
        a_now = (ann_indptr, ann_cols)

        # beacons still valid from earlier rounds (staleness horizon 2*i_t):
        # latest entry per (receiver, sender) wins, so an older round only
        # contributes pairs not refreshed by a newer one.
        horizon = 2 * self.comms.i_t
        rounds = [(codes_now, a_now)]
        covered = np.zeros(nv * nv, dtype=bool)
        covered[codes_now] = True
        for (rt, rcodes, ra) in reversed(self._history):
            if tick - rt > horizon or rt >= tick:
                continue
            residual = rcodes[~covered[rcodes]]
            if len(residual):
                rounds.append((residual, ra))
                covered[residual] = True
        self._history.append((tick, codes_now, a_now))
        self._history = self._history[-3:]

        # per-receiver edge counts: scatter each delivering sender's
        # announced edges onto its receiver's row
        recv_local = np.full(nv, -1, dtype=np.int64)
        recv_local[vids] = np.arange(len(actives))
        flat_parts = []
        for codes, (indptr, acols) in rounds:
            if not len(codes):
                continue
            recv = recv_local[codes // nv]
            send = codes % nv
            keep = recv >= 0
            recv, send = recv[keep], send[keep]
            if not len(recv):
                continue
            starts_r = indptr[send]
            lengths = indptr[send + 1] - starts_r
            total = int(lengths.sum())
            if not total:
                continue
            offs = np.repeat(np.cumsum(lengths) - lengths, lengths)
            gather = np.arange(total) - offs + np.repeat(starts_r, lengths)
            flat_parts.append(np.repeat(recv, lengths) * E + acols[gather])
        if flat_parts:
            counts = np.bincount(np.concatenate(flat_parts),
                                 minlength=len(actives) * E).astype(np.float64)
            counts = counts.reshape(len(actives), E)
        else:
            counts = np.zeros((len(actives), E))

        # evaluate every vehicle's current route and alternatives in one
        # ragged reduction; BPR is applied only to the gathered entries
        cols_parts: list[np.ndarray] = []
        sizes_parts: list[np.ndarray] = []
        row_ids: list[int] = []
        totals: list[int] = []
        todo: list[tuple] = []   # (vehicle, alts, first segment index)
        nseg = 0
        seg_state = self._seg_cache
        route_ver = self._route_ver
        for i, v in enumerate(actives):
            if not self._decides_now(v.vid, tick):
                continue
            ver = route_ver.get(v.vid, 0)
            st = seg_state.get(v.vid)
            if st is not None and st[0] == ver and st[1] == v.pos:
                cached = st[2]
            else:
                e, alts = self._candidate_suffixes(world, v)
                if alts:
                    rem = v.route[v.pos:]
                    flat = list(rem)
                    sizes = [len(rem)]
                    for s in alts:
                        flat.append(e)
                        flat.extend(s)
                        sizes.append(len(s) + 1)
                    cached = (np.array(flat, dtype=np.intp),
                              np.array(sizes, dtype=np.intp), alts)
                else:
                    cached = None
                seg_state[v.vid] = (ver, v.pos, cached)
            if cached is None:
                continue
            cols_v, sizes_v, alts = cached
            cols_parts.append(cols_v)
            sizes_parts.append(sizes_v)
            row_ids.append(i)
            totals.append(len(cols_v))
            todo.append((v, alts, nseg))
            nseg += 1 + len(alts)
        if not todo:
            return
        cols_a = np.concatenate(cols_parts)
        rows_a = np.repeat(np.array(row_ids, dtype=np.intp),
                           np.array(totals, dtype=np.intp))
        sizes_a = np.concatenate(sizes_parts)
        starts = np.concatenate([[0], np.cumsum(sizes_a)[:-1]])
        cap = world.lanes * world.plcap
        wait0 = _signal_wait_vector(world)
        ratio = counts[rows_a, cols_a] / cap[cols_a]
        beta = world.params.beta
        if beta == 4.0:
            load = np.square(np.square(ratio))
        elif beta == 2.0:
            load = np.square(ratio)
        else:
            load = ratio ** beta
        vals = world.t0[cols_a] * (1.0 + world.params.alpha * load) + wait0[cols_a]
        sums = np.add.reduceat(vals, starts)
        for v, alts, first in todo:
            cur = float(sums[first])
            alt_costs = [float(c) for c in sums[first + 1:first + 1 + len(alts)]]
            self._apply_decision(world, v, tick, cur, alt_costs, alts)


class CentralizedStrategy(Strategy):
    """Coordinated routing from exact global state.

    The coordinator holds every vehicle's announced plan (not just the ones
    in radio range), prices an edge by the vehicles whose plans put them on
    it at about the same time (plan positions within a window), and
    serializes route changes within an epoch against a live demand ledger:
    each granted switch updates the ledger before the next request is
    evaluated, so switchers never pile onto the same alternative the way
    independent decision makers do.
    """

    name = "centralized"

    def __init__(self, planner: RoutePlanner, epoch: int = 2,
                 margin: float = 0.12, n: int = 5, window: int = 3):
        self.planner = planner
        self.epoch = epoch
        self.margin = margin
        self.n = n
        self.window = window
        self._seg_cache: dict[int, tuple] = {}
        self._route_ver: dict[int, int] = {}

    def _segments(self, world: World, v):
        """Cached flat segment arrays: remaining route first, then each
        alternative prefixed with the current edge.  Each flat entry carries
        its position within the segment (plan position if that segment were
        followed) and the count of the vehicle's own announcements that fall
        on that edge within the contention window, for self-exclusion."""
        ver = self._route_ver.get(v.vid, 0)
        st = self._seg_cache.get(v.vid)
        if st is not None and st[0] == ver and st[1] == v.pos:
            return st[2]
        e = v.route[v.pos]
        u = world.net.edge_to[e]
        rem_suffix = tuple(v.route[v.pos + 1:])
        alts = [c for c in self.planner.candidates(u, v.destination)
                if c != rem_suffix]
        if not alts:
            self._seg_cache[v.vid] = (ver, v.pos, None)
            return None
        n, w = self.n, self.window
        ann = np.array(v.route[v.pos:v.pos + n], dtype=np.intp)
        flat = list(v.route[v.pos:])
        sizes = [len(flat)]
        for s in alts:
            flat.append(e)
            flat.extend(s)
            sizes.append(len(s) + 1)
        cols = np.array(flat, dtype=np.intp)
        sizes_arr = np.array(sizes, dtype=np.intp)
        starts = np.zeros(len(sizes), dtype=np.intp)
        np.cumsum(sizes_arr[:-1], out=starts[1:])
        pos = np.arange(len(cols), dtype=np.intp) - np.repeat(starts, sizes_arr)
        jj = np.arange(len(ann), dtype=np.intp)
        own = ((np.abs(pos[:, None] - jj[None, :]) <= w)
               & (cols[:, None] == ann[None, :])).sum(axis=1).astype(np.float64)
        cached = (cols, np.minimum(pos, n + w), own, sizes_arr, starts,
                  tuple(alts))
        self._seg_cache[v.vid] = (ver, v.pos, cached)
        return cached

    def before_step(self, world: World, tick: int) -> None:
        if tick % self.epoch != 0:
            return
        onroad = _active_vehicles(world)
        actives = [v for v in onroad if v.pos < len(v.route) - 1]
        if not actives:
            return
        E = len(world.net.edge_ids)
        n, w = self.n, self.window
        # demand_mat[j, e]: vehicles whose plan reaches edge e in j more edges
        codes = [j * E + eid for v in onroad
                 for j, eid in enumerate(v.route[v.pos:v.pos + n])]
        demand_mat = np.bincount(np.array(codes, dtype=np.intp),
                                 minlength=n * E).reshape(n, E).astype(np.float64)
        # counts_win[i, e]: demand on e from plan positions within `window`
        # of position i; positions beyond the announcement horizon see none
        counts_win = np.zeros((n + w + 1, E), dtype=np.float64)
        for i in range(n + w):
            counts_win[i] = demand_mat[max(0, i - w):min(n, i + w + 1)].sum(axis=0)
        wait0 = _signal_wait_vector(world)
        cap = world.lanes * world.plcap
        t0 = world.t0
        alpha, beta = world.params.alpha, world.params.beta
        # realized signal queues (state only the coordinator can see), their
        # influence fading for plan positions reached further in the future
        qdelay = world.queue_lengths() / (world.params.saturation_flow
                                          * world.lanes)
        qweight = np.maximum(1.0 - np.arange(n + w + 1) / 3.0, 0.0)

        # vectorized screening pass against the epoch-start ledger, with the
        # requester's own announcements excluded from its prices
        cols_parts, pos_parts, own_parts, sizes_parts, todo = [], [], [], [], []
        for v in actives:
            cached = self._segments(world, v)
            if cached is None:
                continue
            cols_v, pos_v, own_v, sizes_v, _, _ = cached
            cols_parts.append(cols_v)
            pos_parts.append(pos_v)
            own_parts.append(own_v)
            sizes_parts.append(sizes_v)
            todo.append((v, len(sizes_v)))
        if not todo:
            return
        cols_a = np.concatenate(cols_parts)
        pos_a = np.concatenate(pos_parts)
        own_a = np.concatenate(own_parts)
        sizes_a = np.concatenate(sizes_parts)
        volume = np.maximum(counts_win[pos_a, cols_a] - own_a, 0.0)
        ratio = volume / cap[cols_a]
        load = np.square(np.square(ratio)) if beta == 4.0 else ratio ** beta
        vals = (t0[cols_a] * (1.0 + alpha * load) + wait0[cols_a]
                + qdelay[cols_a] * qweight[pos_a])
        starts = np.concatenate([[0], np.cumsum(sizes_a)[:-1]])
        sums = np.add.reduceat(vals, starts).tolist()
        seg_i = 0
        requests = []
        thresh = 1.0 - self.margin
        for v, nseg in todo:
            cur = sums[seg_i]
            if min(sums[seg_i + 1:seg_i + nseg]) < thresh * cur:
                requests.append(v)
            seg_i += nseg

        # grant requests one at a time against the live ledger; each grant
        # updates announced demand before the next request is priced
        wmat = np.zeros((n + w + 1, n), dtype=np.float64)
        for i in range(n + w):
            wmat[i, max(0, i - w):min(n, i + w + 1)] = 1.0
        for v in requests:
            cached = self._segments(world, v)
            if cached is None:
                continue
            cols_v, pos_v, own_v, sizes_v, starts_v, alts = cached
            counts = np.einsum("ij,ji->i", wmat[pos_v], demand_mat[:, cols_v])
            ratio = np.maximum(counts - own_v, 0.0) / cap[cols_v]
            load = np.square(np.square(ratio)) if beta == 4.0 else ratio ** beta
            vals_v = (t0[cols_v] * (1.0 + alpha * load) + wait0[cols_v]
                      + qdelay[cols_v] * qweight[pos_v])
            seg_sums = np.add.reduceat(vals_v, starts_v).tolist()
            cur = seg_sums[0]
            costs = seg_sums[1:]
            best = min(costs)
            best_i = costs.index(best)
            if not best < thresh * cur:
                continue
            old_ann = v.route[v.pos:v.pos + n]
            v.route = v.route[:v.pos + 1] + list(alts[best_i])
            v.switches += 1
            self._route_ver[v.vid] = self._route_ver.get(v.vid, 0) + 1
            for j, eid in enumerate(old_ann):
                demand_mat[j, eid] -= 1.0
            for j, eid in enumerate(v.route[v.pos:v.pos + n]):
                demand_mat[j, eid] += 1.0


class AlertStrategy(Strategy):
    """Congestion-zone alerting.

    An edge becomes a zone after its average realized speed stays below a
    fraction of free flow for a streak of ticks; it deactivates after an
    equally long recovery streak.  Vehicles about to enter a zone recompute
    a free-flow shortest route with zone edges soft-penalized.
    """

    name = "alert"

    def __init__(self, epoch: int = 5, speed_fraction: float = 0.3,
                 streak: int = 10, alert_distance_edges: int = 2,
                 penalty: float = 10.0, smoothing: int = 60):
        self.epoch = epoch
        self.speed_fraction = speed_fraction
        self.streak = streak
        self.alert_distance_edges = alert_distance_edges
        self.penalty = penalty
        self.smoothing = smoothing
        self._ema: Optional[np.ndarray] = None
        self._slow: Optional[np.ndarray] = None
        self._fast: Optional[np.ndarray] = None
        self._active: Optional[np.ndarray] = None
        self.zones: dict[int, CongestionZone] = {}

    def _update_zones(self, world: World, tick: int) -> None:
        E = len(world.net.edge_ids)
        if self._slow is None:
            self._ema = np.ones(E)
            self._slow = np.zeros(E, dtype=np.int64)
            self._fast = np.zeros(E, dtype=np.int64)
            self._active = np.zeros(E, dtype=bool)
        # smooth over roughly a signal cycle so an ordinary red phase does
        # not read as congestion; only persistent queues push the mean down
        frac = world.mean_speed_fractions()
        self._ema += (frac - self._ema) / self.smoothing
        slow = self._ema < self.speed_fraction
        self._slow = np.where(slow, self._slow + 1, 0)
        self._fast = np.where(~slow, self._fast + 1, 0)
        newly_on = (~self._active) & (self._slow >= self.streak)
        newly_off = self._active & (self._fast >= self.streak)
        self._active = (self._active | newly_on) & ~newly_off
        for e in np.flatnonzero(newly_on):
            eid = world.net.edge_ids[e]
            self.zones[int(e)] = CongestionZone(
                center_edge=eid, radius=world.net.edge_length[e],
                active_since=tick)
        for e in np.flatnonzero(newly_off):
            self.zones.pop(int(e), None)

    def before_step(self, world: World, tick: int) -> None:
        self._update_zones(world, tick)
        if tick % self.epoch != 0 or not self.zones:
            return
        zone_set = set(self.zones)
        alerted = []
        for v in _active_vehicles(world):
            if v.pos >= len(v.route) - 1:
                continue
            horizon = v.route[v.pos:v.pos + self.alert_distance_edges + 1]
            if any(e in zone_set for e in horizon):
                alerted.append(v)
        if not alerted:
            return
        edge_cost = np.array(world.t0)
        for e in zone_set:
            edge_cost[e] *= self.penalty
        dests = sorted({v.destination for v in alerted})
        dest_row = {d: i for i, d in enumerate(dests)}
        _, pred, chosen = _tree_routes(world, edge_cost, dests)
        for v in alerted:
            u = world.net.edge_to[v.route[v.pos]]
            suffix = _walk_tree(pred[dest_row[v.destination]], chosen,
                                u, v.destination)
            if suffix is None:
                continue
            new_route = v.route[:v.pos + 1] + suffix
            if new_route != v.route:
                v.route = new_route
                v.switches += 1


def make_strategy(name: str, planner: RoutePlanner, comms: CommsParams,
                  routing: RoutingParams, seed_key: tuple[int, ...],
                  vam_mode: str = "fast",
                  record_decisions: bool = False) -> Strategy:
    if name == "none":
        return NoActionStrategy()
    if name == "vam":
        return VamStrategy(planner, comms, routing, seed_key, mode=vam_mode,
                           record_decisions=record_decisions)
    if name == "centralized":
        return CentralizedStrategy(planner, n=comms.n)
    if name == "alert":
        return AlertStrategy(epoch=comms.i_t)
    raise ValueError(f"unknown strategy {name!r}")
