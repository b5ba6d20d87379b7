"""Road-side control plane: adaptive signal timing, dynamic lane reversal,
and dynamic-lane-grouping candidate screening.

Each controller owns exactly one intersection or dual-edge pair and uses
only local observations; there is no inter-controller coordination.
Controllers are updated sequentially in deterministic id order.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .engine import World
from .network import RoadNetwork

# ---------------------------------------------------------------------------
# adaptive traffic light control
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignalPlan:
    """Per-intersection phase set with exact (rational) green durations.

    Invariant: sum of phase greens + lost_time == cycle, exactly.  Greens
    are Fractions so the invariant survives proportional re-splits.
    """

    intersection: str
    cycle: int
    phases: tuple[tuple[frozenset, Fraction], ...]  # (approach edge ids, green)
    lost_time: int = 0
    min_green: Fraction = Fraction(0)
    max_green: Optional[Fraction] = None

    def __post_init__(self):
        usable = self.cycle - self.lost_time
        total = sum((g for _, g in self.phases), Fraction(0))
        if total != usable:
            raise ValueError(
                f"plan for {self.intersection!r}: greens sum to {total}, "
                f"expected cycle - lost_time = {usable}"
            )
        seen = set()
        for approaches, g in self.phases:
            if g < 0:
                raise ValueError("negative green duration")
            for a in approaches:
                if a in seen:
                    raise ValueError(f"approach {a!r} appears in more than one phase")
                seen.add(a)

    def green_for(self, approach: str) -> Fraction:
        for approaches, g in self.phases:
            if approach in approaches:
                return g
        raise KeyError(approach)


def equal_split_plan(intersection: str, phase_approaches: Sequence[frozenset],
                     cycle: int = 60, lost_time: int = 8,
                     min_green: int = 5, max_green: Optional[int] = None) -> SignalPlan:
    usable = Fraction(cycle - lost_time)
    n = len(phase_approaches)
    greens = [usable / n] * n
    return SignalPlan(
        intersection=intersection,
        cycle=cycle,
        phases=tuple((frozenset(a), g) for a, g in zip(phase_approaches, greens)),
        lost_time=lost_time,
        min_green=Fraction(min_green),
        max_green=Fraction(max_green) if max_green is not None else None,
    )


def proportional_greens(weights: Sequence[int | float], usable: Fraction,
                        min_green: Fraction, max_green: Optional[Fraction]) -> list[Fraction]:
    """Split `usable` proportionally to weights, clamp to [min, max], and
    redistribute the surplus among unclamped phases.  Exact rational
    arithmetic; deterministic fixed point."""
    n = len(weights)
    w = [Fraction(x).limit_denominator(10**9) if isinstance(x, float) else Fraction(x)
         for x in weights]
    total = sum(w, Fraction(0))
    if total == 0:
        w = [Fraction(1)] * n
        total = Fraction(n)
    hi = max_green if max_green is not None else usable
    greens: list[Optional[Fraction]] = [None] * n
    free = list(range(n))
    budget = usable
    wsum = total
    while free:
        changed = False
        for i in list(free):
            share = budget * w[i] / wsum if wsum > 0 else budget / len(free)
            if share < min_green or share > hi:
                greens[i] = min_green if share < min_green else hi
                budget -= greens[i]
                wsum -= w[i]
                free.remove(i)
                changed = True
        if not changed:
            for i in free:
                greens[i] = budget * w[i] / wsum if wsum > 0 else budget / len(free)
            break
    # clamping can leave a residual when min/max bounds are infeasible for
    # the usable time; spread it evenly so the cycle invariant always holds
    residual = usable - sum((g for g in greens if g is not None), Fraction(0))
    if residual != 0:
        share = residual / n
        greens = [(g if g is not None else Fraction(0)) + share for g in greens]
    assert all(g is not None for g in greens)
    return greens  # type: ignore[return-value]


def atlc_update(plan: SignalPlan, approach_counts: Mapping[str, int]) -> SignalPlan:
    """Re-split usable green time proportionally to per-phase approach counts.

    All-zero counts fall back to an equal split.  Uses only the counts
    passed in (local observation, no neighbor-intersection input).
    """
    missing = [a for approaches, _ in plan.phases for a in approaches
               if a not in approach_counts]
    if missing:
        raise ValueError(f"missing approach counts for {sorted(missing)}")
    usable = Fraction(plan.cycle - plan.lost_time)
    weights = [sum(approach_counts[a] for a in approaches)
               for approaches, _ in plan.phases]
    greens = proportional_greens(weights, usable, plan.min_green, plan.max_green)
    return replace(
        plan,
        phases=tuple((approaches, g) for (approaches, _), g in zip(plan.phases, greens)),
    )


class AtlcController:
    """Adjusts one intersection's plan from live approach counts, once per
    signal cycle."""

    def __init__(self, world: World, plan: SignalPlan):
        self.world = world
        self.plan = plan
        self.node = world.net.node_index(plan.intersection)
        self._approach_idx = {
            a: world.net.edge_index(a)
            for approaches, _ in plan.phases for a in approaches
        }
        self._last_weights: Optional[tuple[int, ...]] = None
        world.set_signal_plan(plan)

    def on_tick(self, tick: int) -> None:
        if tick % self.plan.cycle != 0:
            return
        counts = {a: int(self.world.counts[i]) for a, i in self._approach_idx.items()}
        weights = tuple(sum(counts[a] for a in approaches)
                        for approaches, _ in self.plan.phases)
        if weights == self._last_weights:
            return   # same demand split -> same plan
        self._last_weights = weights
        self.plan = atlc_update(self.plan, counts)
        self.world.set_signal_plan(self.plan)


def grid_phase_groups(net: RoadNetwork, node_id: str) -> list[frozenset]:
    """Group a node's incoming edges into axis-aligned phases (EW vs NS)."""
    node = net.node_index(node_id)
    ew, ns = set(), set()
    for i, eid in enumerate(net.edge_ids):
        if net.edge_to[i] != node:
            continue
        dx = abs(net.node_x[node] - net.node_x[net.edge_from[i]])
        dy = abs(net.node_y[node] - net.node_y[net.edge_from[i]])
        (ew if dx >= dy else ns).add(eid)
    return [frozenset(g) for g in (ew, ns) if g]


def install_signals(world: World, cycle: int = 60, lost_time: int = 8,
                    min_green: int = 5, max_green: Optional[int] = None,
                    adaptive: bool = True) -> list[AtlcController]:
    """Equal-split two-phase signals at every signalized intersection.

    Returns the ATLC controllers (empty list when adaptive=False, in which
    case fixed plans are installed)."""
    controllers = []
    for nid, node in world.net.intersections.items():
        if not node.signalized:
            continue
        groups = grid_phase_groups(world.net, nid)
        if not groups:
            continue
        plan = equal_split_plan(nid, groups, cycle=cycle, lost_time=lost_time,
                                min_green=min_green, max_green=max_green)
        if adaptive:
            controllers.append(AtlcController(world, plan))
        else:
            world.set_signal_plan(plan)
    return controllers


# ---------------------------------------------------------------------------
# dynamic lane reversal
# ---------------------------------------------------------------------------

STABLE, CLEARING = "stable", "clearing"


@dataclass
class DualEdgePair:
    """Paired opposite-direction edges whose lanes can be shifted.

    lanes_a + lanes_b == total_lanes always; neither side drops below 1.
    """

    edge_a: str
    edge_b: str
    lanes_a: int
    lanes_b: int
    state: str = STABLE
    clearing_edge: Optional[str] = None   # donor edge while clearing
    clearing_since: int = -1
    receiver_edge: Optional[str] = None
    cooldown_until: int = 0

    def __post_init__(self):
        self.total_lanes = self.lanes_a + self.lanes_b
        if self.lanes_a < 1 or self.lanes_b < 1:
            raise ValueError("each direction needs at least one lane")

    def lanes_of(self, edge: str) -> int:
        if edge == self.edge_a:
            return self.lanes_a
        if edge == self.edge_b:
            return self.lanes_b
        raise KeyError(edge)


@dataclass(frozen=True)
class DlrAction:
    kind: str                      # "none" | "begin_reversal"
    toward: Optional[str] = None   # receiving edge id


DLR_RATIO = 1.5


def dlr_check(pair: DualEdgePair, demand_a: float, demand_b: float,
              tick: int) -> DlrAction:
    """Begin a reversal toward the heavier direction iff demand is at least
    1.5x the lighter direction, the lighter side can spare a lane, the pair
    is stable, and the cooldown has passed.  Zero lighter demand with any
    heavier demand counts as satisfying the ratio."""
    if demand_a < 0 or demand_b < 0:
        raise ValueError("demands must be >= 0")
    if pair.state != STABLE or tick < pair.cooldown_until:
        return DlrAction("none")
    if demand_a >= demand_b:
        heavy, light = pair.edge_a, pair.edge_b
        hd, ld = demand_a, demand_b
    else:
        heavy, light = pair.edge_b, pair.edge_a
        hd, ld = demand_b, demand_a
    ratio_ok = (hd > 0) if ld == 0 else (hd >= DLR_RATIO * ld)
    if not ratio_ok:
        return DlrAction("none")
    if pair.lanes_of(light) <= 1:
        return DlrAction("none")
    return DlrAction("begin_reversal", toward=heavy)


def dlr_begin(pair: DualEdgePair, toward: str, tick: int) -> None:
    donor = pair.edge_b if toward == pair.edge_a else pair.edge_a
    pair.state = CLEARING
    pair.clearing_edge = donor
    pair.receiver_edge = toward
    pair.clearing_since = tick


def dlr_commit(pair: DualEdgePair, clearing_occupancy: int, tick: int,
               cooldown: int = 60) -> str:
    """Finish a reversal once the clearing lane is empty.

    Returns "committed" or "still-clearing".  Raises on a stable pair.
    """
    if pair.state != CLEARING:
        raise ValueError("dlr_commit called on a stable pair")
    if clearing_occupancy > 0:
        return "still-clearing"
    if pair.clearing_edge == pair.edge_a:
        pair.lanes_a -= 1
        pair.lanes_b += 1
    else:
        pair.lanes_b -= 1
        pair.lanes_a += 1
    assert pair.lanes_a >= 1 and pair.lanes_b >= 1
    assert pair.lanes_a + pair.lanes_b == pair.total_lanes
    pair.state = STABLE
    pair.clearing_edge = None
    pair.receiver_edge = None
    pair.cooldown_until = tick + cooldown
    return "committed"


class DlrController:
    """Monitors one dual pair's entering demand over a short window and
    drives the clear-then-commit reversal sequence on the world."""

    def __init__(self, world: World, pair: DualEdgePair,
                 window: int = 2, cooldown: int = 60):
        self.world = world
        self.pair = pair
        self.window = window
        self.cooldown = cooldown
        self.ia = world.net.edge_index(pair.edge_a)
        self.ib = world.net.edge_index(pair.edge_b)
        self._entered_a = 0
        self._entered_b = 0
        world.lanes[self.ia] = pair.lanes_a
        world.lanes[self.ib] = pair.lanes_b

    def record_events(self, events: list[tuple]) -> None:
        for ev in events:
            if ev[0] in ("enter", "depart"):
                vid = ev[1]
                e = self.world.vehicles[vid].current_edge()
                if e == self.ia:
                    self._entered_a += 1
                elif e == self.ib:
                    self._entered_b += 1

    def on_tick(self, tick: int) -> None:
        world, pair = self.world, self.pair
        if pair.state == CLEARING:
            donor = world.net.edge_index(pair.clearing_edge)
            occupancy = int(world.clearing[donor])
            if dlr_commit(pair, occupancy, tick, self.cooldown) == "committed":
                world.clearing[donor] = -1
                world.lanes[self.ia] = pair.lanes_a
                world.lanes[self.ib] = pair.lanes_b
            return
        if tick % self.window != 0:
            return
        action = dlr_check(pair, self._entered_a, self._entered_b, tick)
        self._entered_a = self._entered_b = 0
        if action.kind == "begin_reversal":
            dlr_begin(pair, action.toward, tick)
            donor = world.net.edge_index(pair.clearing_edge)
            # vehicles notionally assigned to the clearing lane: an even
            # share of current occupancy, drained as vehicles exit the edge
            world.clearing[donor] = int(world.counts[donor]) // int(world.lanes[donor])


def install_dlr(world: World, window: int = 2, cooldown: int = 60) -> list[DlrController]:
    """One controller per dual pair (each pair handled once, a-side id first)."""
    controllers = []
    seen = set()
    for eid, e in world.net.edges.items():
        if e.dual is None or eid in seen:
            continue
        seen.add(eid)
        seen.add(e.dual)
        pair = DualEdgePair(edge_a=eid, edge_b=e.dual,
                            lanes_a=e.lanes, lanes_b=world.net.edges[e.dual].lanes)
        controllers.append(DlrController(world, pair, window=window, cooldown=cooldown))
    return controllers


# ---------------------------------------------------------------------------
# dynamic lane grouping: screening only
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DlgReport:
    intersection: str
    vc_ratios: tuple[tuple[str, float], ...]
    vl_ratios: tuple[tuple[str, float], ...]
    flagged: bool
    reason: str


def dlg_screen(intersection: str, volumes: Mapping[str, float],
               lane_groups: Mapping[str, tuple[int, float]],
               flag_threshold: float = 0.9,
               imbalance_threshold: float = 0.5) -> DlgReport:
    """Volume-to-capacity screening for lane regrouping candidates.

    `lane_groups` maps approach -> (lanes, capacity per lane).  The
    intersection is flagged when one approach is near saturation while
    another is far below it, i.e. capacity is misallocated.
    """
    vc, vl = [], []
    for approach in sorted(volumes):
        vol = volumes[approach]
        if vol < 0:
            raise ValueError(f"negative volume for approach {approach!r}")
        lanes, cap = lane_groups[approach]
        if lanes <= 0 or cap <= 0:
            raise ValueError(f"zero-capacity lane group for approach {approach!r}")
        vc.append((approach, vol / (lanes * cap)))
        vl.append((approach, vol / lanes))
    ratios = [r for _, r in vc]
    flagged = bool(ratios) and max(ratios) >= flag_threshold and min(ratios) <= imbalance_threshold
    if flagged:
        reason = (f"max V/C {max(ratios):.2f} >= {flag_threshold} with "
                  f"min V/C {min(ratios):.2f} <= {imbalance_threshold}")
    else:
        reason = "capacity allocation within thresholds"
    return DlgReport(intersection=intersection, vc_ratios=tuple(vc),
                     vl_ratios=tuple(vl), flagged=flagged, reason=reason)
