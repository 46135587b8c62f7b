from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from liberal_succession.core import BudgetExceeded, Community, StateGrid
from liberal_succession.relations import (
    coalitions_in_order, coincidence_report, liberal_by_scan, liberal_successor,
    liberal_successor_permissive, pareto_superior,
)
from conftest import state
from oracles import liberal_by_bitmask


def test_pareto_on_min_community(min_community):
    w = pareto_superior(min_community, state(2, 2, 2), state(1, 2, 2))
    assert w.holds and w.strict_agent == 1 and w.coalition == frozenset({1, 2, 3})
    assert not pareto_superior(min_community, state(2, 2, 2), state(2, 2, 2))


def test_line_community_has_no_pareto_pairs(line_community):
    states = line_community.states
    assert not any(pareto_superior(line_community, x, y) for x in states for y in states if x != y)


def test_liberal_on_line_community(line_community):
    w = liberal_successor(line_community, state(1), state(0))
    assert w.holds and w.coalition == frozenset({1, 3}) and w.strict_agent == 1
    p = liberal_successor_permissive(line_community, state(1), state(0))
    assert p.holds and p.coalition == frozenset({1, 3})


def test_no_liberal_without_strict_gain(min_community):
    # agent 1's interest rises, but nobody's preference changes
    assert min_community.preference(state(2, 0, 0)) == min_community.preference(state(1, 0, 0))
    assert not liberal_successor(min_community, state(2, 0, 0), state(1, 0, 0))
    assert liberal_successor_permissive(min_community, state(2, 2, 2), state(1, 2, 2))


def test_coalition_order():
    assert [sorted(J) for J in coalitions_in_order(3)] == [
        [], [1], [2], [3], [1, 2], [1, 3], [2, 3], [1, 2, 3]]


def test_reports(min_community, line_community):
    assert coincidence_report(min_community).coincide
    line = coincidence_report(line_community)
    assert (line.pareto_count, line.liberal_count, len(line.divergent)) == (0, 20, 20)
    single = Community.from_texts(StateGrid.uniform(range(4), 1), [("x1", "x1")])
    assert coincidence_report(single).coincide


def test_budget_and_agent_cap(min_community):
    with pytest.raises(BudgetExceeded):
        coincidence_report(min_community, budget=1000)
    with pytest.raises(BudgetExceeded):
        liberal_successor(min_community, state(0, 0, 0), state(1, 1, 1), max_agents=2)


utility = st.sampled_from(["x1", "x2", "-x1", "x1 + x2", "x1 - x2", "min(x1, x2)", "2*x2 - x1", "max(x1, 1)"])


@st.composite
def communities(draw):
    n = draw(st.integers(1, 4))
    agents = [(draw(utility), draw(utility)) for _ in range(n)]
    return Community.from_texts(StateGrid.uniform([0, 1, 2], 2), agents)


@settings(max_examples=60, deadline=None)
@given(communities())
def test_closed_form_matches_literal_scans(c):
    for x in c.states:
        for y in c.states:
            fast = liberal_successor(c, x, y)
            scan = liberal_by_scan(c, x, y)
            assert fast == scan
            oracle = liberal_by_bitmask(c, x, y)
            assert (oracle is not None) == fast.holds
            if fast.holds:
                assert fast.coalition == oracle and fast.strict_agent in fast.coalition
            par = pareto_superior(c, x, y)
            per = liberal_successor_permissive(c, x, y)
            assert (not par.holds or fast.holds) and (not fast.holds or per.holds)
            # utility-induced interest relations are connected, so both liberal forms agree
            assert per.holds == fast.holds
        assert not liberal_successor(c, x, x)
