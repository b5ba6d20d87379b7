"""Per-vehicle decision logic: estimates, recommendations, compliance."""
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_net
from dtmsim.control import SignalPlan
from dtmsim.engine import CostModelParams
from dtmsim.network import Route
from dtmsim.routing import (Decision, RouteEstimate, RoutingParams, decide,
                            estimate_route)


def two_edge_net():
    return make_net(
        [("A", 0, 0, False), ("B", 600, 0, False), ("C", 1200, 0, True)],
        [("ab", "A", "B", 600), ("bc", "B", "C", 600)],
    )


def half_green_plan(approach="bc", node="C"):
    return SignalPlan(intersection=node, cycle=60,
                      phases=((frozenset({approach}), Fraction(30)),
                              (frozenset({"other"}), Fraction(30))))


def test_params_validated():
    with pytest.raises(ValueError):
        RoutingParams(p_r=1.5)
    with pytest.raises(ValueError):
        RoutingParams(epsilon=-0.1)
    with pytest.raises(ValueError):
        RoutingParams(switch_cooldown=-1)
    with pytest.raises(ValueError, match="decision_cohorts"):
        RoutingParams(decision_cohorts=0)
    with pytest.raises(ValueError):
        RoutingParams(unknown_edge_policy="psychic")


# -- estimate_route ----------------------------------------------------------

def test_estimate_single_edge_free_flow():
    net = two_edge_net()
    r = Route(edges=("ab",), origin="A", destination="B")
    est = estimate_route(net, r, {}, {}, CostModelParams())
    assert est.total_delay == pytest.approx(60.0)
    assert est.data_coverage == 0.0


def test_estimate_composes_signal_wait():
    net = two_edge_net()
    r = Route(edges=("ab", "bc"), origin="A", destination="C")
    est = estimate_route(net, r, {}, {"C": half_green_plan()},
                         CostModelParams())
    # two free-flow edges (60 s each) + half-green wait 15 s
    assert est.total_delay == pytest.approx(135.0)
    assert est.breakdown[1][2] == pytest.approx(15.0)
    assert est.total_delay == pytest.approx(
        sum(t + w for _, t, w in est.breakdown))


def test_estimate_monotone_in_counts():
    net = two_edge_net()
    r = Route(edges=("ab", "bc"), origin="A", destination="C")
    base = estimate_route(net, r, {}, {}, CostModelParams())
    cap = net.edges["ab"].lanes * net.edges["ab"].per_lane_capacity
    loaded = estimate_route(net, r, {"ab": cap}, {}, CostModelParams())
    assert loaded.total_delay > base.total_delay
    assert loaded.data_coverage == 0.5


def test_estimate_unknown_edge_policies():
    net = two_edge_net()
    r = Route(edges=("ab",), origin="A", destination="B")
    with pytest.raises(KeyError):
        estimate_route(net, Route(edges=("zz",), origin="A", destination="B"),
                       {}, {}, CostModelParams())
    last = estimate_route(net, r, {}, {}, CostModelParams(),
                          params=RoutingParams(unknown_edge_policy="last-known"),
                          last_known={"ab": 10})
    free = estimate_route(net, r, {}, {}, CostModelParams())
    assert last.total_delay > free.total_delay


def test_estimate_approach_not_in_plan_is_tolerated():
    net = two_edge_net()
    r = Route(edges=("ab", "bc"), origin="A", destination="C")
    plan = SignalPlan(intersection="C", cycle=60,
                      phases=((frozenset({"unrelated"}), Fraction(60)),))
    est = estimate_route(net, r, {}, {"C": plan}, CostModelParams())
    assert est.total_delay == pytest.approx(120.0)


# -- decide ------------------------------------------------------------------

def _est(delay):
    return RouteEstimate(route=Route(edges=(), origin="A", destination="A"),
                         total_delay=delay, breakdown=(), data_coverage=1.0)


def test_stay_when_no_improvement():
    d = decide(_est(300.0), [_est(310.0)], RoutingParams(), draw=0.0)
    assert d == Decision("stay")


def test_switch_when_clearly_better():
    d = decide(_est(300.0), [_est(200.0)],
               RoutingParams(p_r=1.0, epsilon=0.05), draw=0.999)
    assert d.action == "switch" and d.chosen == 0


def test_declined_recommendation():
    d = decide(_est(300.0), [_est(200.0)],
               RoutingParams(p_r=0.85, epsilon=0.05), draw=0.9)
    assert d.action == "stay" and d.recommended == 0


def test_margin_blocks_marginal_switch():
    # 4% saving < 5% margin
    d = decide(_est(100.0), [_est(96.0)],
               RoutingParams(p_r=1.0, epsilon=0.05), draw=0.0)
    assert d.action == "stay"


def test_ties_favor_current():
    d = decide(_est(100.0), [_est(100.0)],
               RoutingParams(p_r=1.0, epsilon=0.0), draw=0.0)
    assert d.action == "stay"


def test_tied_alternatives_pick_lowest_index():
    d = decide(_est(300.0), [_est(200.0), _est(200.0)],
               RoutingParams(p_r=1.0, epsilon=0.0), draw=0.0)
    assert d.chosen == 0


def test_empty_alternatives():
    assert decide(_est(1.0), [], RoutingParams(), draw=0.0) == Decision("stay")


@given(st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
       st.lists(st.floats(min_value=1.0, max_value=1000.0), max_size=4),
       st.floats(min_value=1.0, max_value=1000.0))
def test_p_r_zero_never_switches(draw, alts, cur):
    d = decide(_est(cur), [_est(a) for a in alts],
               RoutingParams(p_r=0.0), draw=draw)
    assert d.action == "stay"


@given(st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
       st.lists(st.floats(min_value=1.0, max_value=1000.0), min_size=1,
                max_size=4),
       st.floats(min_value=1.0, max_value=1000.0))
def test_argmin_invariance_full_compliance(draw, alts, cur):
    """p_r=1, epsilon=0: the held route after deciding is always the argmin
    of all estimates, with ties favoring the current route."""
    d = decide(_est(cur), [_est(a) for a in alts],
               RoutingParams(p_r=1.0, epsilon=0.0), draw=draw)
    best = min(alts)
    if best < cur:
        assert d.action == "switch" and alts[d.chosen] == best
    else:
        assert d.action == "stay"


def test_decide_deterministic():
    args = (_est(300.0), [_est(250.0), _est(200.0)],
            RoutingParams(p_r=0.85, epsilon=0.05))
    assert decide(*args, draw=0.3) == decide(*args, draw=0.3)
    assert decide(*args, draw=0.3).action == "switch"
    assert decide(*args, draw=0.86).action == "stay"
