from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from liberal_succession import axioms as ax
from liberal_succession.core import BudgetExceeded, Community, StateGrid
from liberal_succession.representation import synthesize_from_matrix
from conftest import state

GRID2 = StateGrid.uniform([0, 1, 2], 2)
GRID3 = StateGrid.uniform([0, 1, 2], 3)


def failing(result, c, probes=()):
    assert not result.holds and result.witness
    assert ax.recheck(c, result, probes)
    return result.witness


def test_line_community_profile(line_community):
    c = line_community
    for check in (ax.check_based_on_interests, ax.check_nonpaternalism, ax.check_nonmalevolence):
        r = check(c)
        assert r.holds and r.vacuous
    assert ax.check_separability(c).holds
    product = failing(ax.check_product_structure(c), c)
    assert product["x_1"] == state(1) and product["x_2"] == state(0)
    assert failing(ax.check_idiosyncratic_interest(c), c) == {"agent": 1}
    assert failing(ax.check_idiosyncratic_preference(c), c) == {"agent": 1}
    assert failing(ax.check_unambiguous_improvement(c), c) == {"agents": (1,)}


def test_based_on_interests_swap_community():
    c = Community.from_texts(StateGrid.uniform([0, 1], 2), [("x1", "x2"), ("x2", "x1")])
    w = failing(ax.check_based_on_interests(c), c)
    assert w == {"agent": 2, "x": state(0, 0), "y": state(0, 1)}
    # the tied pair ((1,0), (0,0)) is not itself a violation: p_1 = x2 does not move
    assert not ax.violates_based_on_interests(c, 1, state(1, 0), state(0, 0))


def test_based_on_interests_min_community(min_community):
    # the min saturates: raising v_3 can leave p_3 unchanged while the others' interests stay put
    c = Community(min_community.agents, StateGrid.uniform(range(4), 3))
    w = failing(ax.check_based_on_interests(c), c)
    assert w == {"agent": 3, "x": state(0, 0, 0), "y": state(0, 0, 1)}
    assert ax.violates_based_on_interests(c, 3, state(1, 1, 2), state(1, 1, 3))


def test_nonpaternalism(plane_community, min_community):
    assert ax.check_nonpaternalism(min_community).holds
    w = failing(ax.check_nonpaternalism(plane_community), plane_community)
    assert w == {"agent": 1, "x": state(0, 1), "y": state(0, 0)}
    assert ax.violates_nonpaternalism(plane_community, 2, state(1, 0), state(0, 0))
    single = Community.from_texts(GRID2, [("x1 + x2", "x1 + x2")])
    assert ax.check_nonpaternalism(single).holds


def test_separability(min_community, line_community):
    c = min_community
    w = failing(ax.check_separability(c), c)
    assert (w["agent"], w["J"], w["K"]) == (1, (1,), (2, 3))
    assert ax.violates_separability(c, 1, (1,), (2, 3), state(1, 2, 2), state(2, 2, 2), state(1, 0, 0), state(2, 0, 0))
    synth = synthesize_from_matrix(GRID3, None, [[2, 1, 0], [1, 3, -1], [0, 1, 1]], [1, 0, -2])
    assert ax.check_separability(synth).holds
    assert ax.check_separability(line_community).holds


def test_product_structure(min_community):
    assert ax.check_product_structure(min_community).holds
    corr = Community.from_texts(StateGrid.uniform([0, 1], 2), [("x1", "x1"), ("x1", "x1")])
    w = failing(ax.check_product_structure(corr), corr)
    assert w == {"x_1": state(0, 0), "x_2": state(1, 0)}


def test_idiosyncratic_conditions(min_community):
    r = ax.check_idiosyncratic_interest(min_community)
    assert r.holds and r.example[1] == (state(1, 0, 0), state(0, 0, 0))
    r = ax.check_idiosyncratic_preference(min_community)
    assert r.holds
    assert r.example == {1: (state(2, 1, 1), state(1, 1, 1)), 2: (state(1, 2, 1), state(1, 1, 1)),
                         3: (state(1, 1, 2), state(1, 1, 1))}


def test_idiosyncratic_preference_probes(plane_community):
    c = plane_community
    assert failing(ax.check_idiosyncratic_preference(c), c) == {"agent": 1}
    probes = [state(Fraction(1, 2), Fraction(1, 2)), state(1, Fraction(3, 4)), state(Fraction(3, 4), 1)]
    assert ax.check_idiosyncratic_preference(c, probes=probes).holds
    with pytest.raises(ValueError):
        ax.check_idiosyncratic_preference(c, probes=[state(2, 0)])


def test_unambiguous_improvement(plane_community, min_community):
    r = ax.check_unambiguous_improvement(plane_community)
    assert r.holds and r.example == {"x": state(1, 1), "y": state(0, 0)}
    assert ax.check_unambiguous_improvement(min_community).holds
    assert all(min_community.strict(a, b) for a, b in zip(min_community.preference(state(2, 2, 2)),
                                                         min_community.preference(state(1, 1, 1))))


def test_nonmalevolence(line_community, plane_community):
    assert ax.check_nonmalevolence(line_community).holds
    w = failing(ax.check_nonmalevolence(plane_community), plane_community)
    assert w["agent"] == 1
    assert ax.violates_nonmalevolence(plane_community, 2, state(1, 0), state(0, 0))
    total = Community.from_texts(GRID2, [("x1", "x1 + x2"), ("x2", "x1 + x2")])
    assert ax.check_nonmalevolence(total).holds


def test_double_cancellation():
    synth = synthesize_from_matrix(GRID2, None, [[2, 1], [1, 3]])
    r = ax.check_double_cancellation(synth)
    assert r.holds and not r.vacuous and r.details["two_factor"]
    single = Community.from_texts(GRID2, [("x1", "x1 + x2")])
    r = ax.check_double_cancellation(single)
    assert r.holds and r.vacuous


def test_double_cancellation_vacuous_on_min_community(min_community):
    small = Community(min_community.agents, GRID3)
    r = ax.check_double_cancellation(small)
    assert r.holds and r.vacuous and r.details["two_factor"] == []


def test_double_cancellation_violation():
    # p_1 is not additive in (v_1, v_2) yet monotone in both
    c = Community.from_texts(StateGrid.uniform([0, 1, 2], 2), [("x1", "x1 * x2 + x1 + x2"), ("x2", "x2")])
    r = ax.check_double_cancellation(c)
    assert r.details["two_factor"]
    if not r.holds:
        assert ax.recheck(c, r)


def test_support_sets(min_community, plane_community):
    s = ax.detect_support(min_community, 1)
    assert s.support == {1, 2, 3}
    x, y = state(2, 2, 2), state(2, 0, 2)
    assert min_community.preference(x)[0] == 1 and min_community.preference(y)[0] == 0
    assert ax.detect_support(plane_community, 1).support == {1, 2}
    own = Community.from_texts(GRID2, [("x1", "x1"), ("x2", "x2")])
    assert ax.detect_support(own, 1).support == {1}


def test_interest_cardinality(min_community):
    c = min_community
    w = failing(ax.check_interest_cardinality(c), c)
    assert (w["h"], w["i"], w["j"]) == (1, 1, 1)
    low, high = state(2, 2, 2), state(3, 2, 2)
    octuple = dict(w_h=low, x_h=high, y_h=high, z_h=low, w_i=low, x_i=high, y_i=high, z_i=low)
    assert ax.violates_interest_cardinality(c, h=2, i=1, j=1, **octuple)
    # the same two states with h = i = 1 are no counterexample
    assert not ax.violates_interest_cardinality(c, h=1, i=1, j=1, **octuple)


def test_interest_cardinality_holds_for_common_factors():
    synth = synthesize_from_matrix(GRID3, None, [[3, 1, 0], [2, 4, 1], [0, 2, 5]], [0, 1, 2])
    r = ax.check_interest_cardinality(synth)
    assert r.holds and not r.vacuous
    single = Community.from_texts(StateGrid.uniform([0, 1], 1), [("x1", "x1")])
    assert ax.check_interest_cardinality(single).holds


def test_preference_cardinality(min_community):
    c = min_community
    r = ax.check_preference_cardinality(c)
    failing(r, c)
    assert r.details["supports"] == {1: (2, 3), 2: (1, 3), 3: (1, 2)}
    a, b = state(2, 3, 3), state(3, 3, 3)
    a7, b7 = state(2, 3, 7), state(3, 3, 7)
    octuple = dict(w_h=a, x_h=b, y_h=b, z_h=a, w_i=a7, x_i=b7, y_i=b7, z_i=a7)
    assert ax.violates_preference_cardinality(c, h=2, i=3, j=1, **octuple)


def test_preference_cardinality_synthesized():
    synth = synthesize_from_matrix(GRID3, None, [[3, 1, 0], [2, 4, 1], [0, 2, 5]])
    assert ax.check_preference_cardinality(synth).holds
    single = Community.from_texts(StateGrid.uniform([0, 1], 1), [("x1", "x1")])
    r = ax.check_preference_cardinality(single)
    assert r.holds and r.vacuous


def test_budget_and_tolerance(min_community):
    with pytest.raises(BudgetExceeded):
        ax.check_separability(min_community, ax.ScanMode(budget=100))
    fuzzy = Community(min_community.agents, min_community.grid, Fraction(1, 10))
    with pytest.raises(ValueError):
        ax.check_separability(fuzzy)


def test_sampled_mode_reports_seed(min_community):
    r = ax.check_nonpaternalism(min_community, ax.ScanMode.sampled(500, seed=3))
    assert r.holds and not r.exhaustive and r.seed == 3
    r = ax.check_separability(min_community, ax.ScanMode.sampled(2000, seed=1))
    assert not r.exhaustive
    if not r.holds:
        assert ax.recheck(min_community, r)


# -- properties ---------------------------------------------------------------------------

utility = st.sampled_from(["x1", "x2", "-x1", "x1 + x2", "x1 - x2", "min(x1, x2)", "2*x2 - x1", "max(x1, x2)", "x1*x2"])


@st.composite
def communities(draw):
    n = draw(st.integers(1, 3))
    return Community.from_texts(GRID2, [(draw(utility), draw(utility)) for _ in range(n)])


@settings(max_examples=40, deadline=None)
@given(communities())
def test_witnesses_recheck(c):
    for name, check in ax.CHECKERS.items():
        r = check(c)
        if not r.holds:
            assert ax.recheck(c, r), name
        else:
            assert not r.witness


@settings(max_examples=25, deadline=None)
@given(communities(), st.integers(0, 10**6))
def test_exhaustive_pass_implies_sampled_pass(c, seed):
    mode = ax.ScanMode.sampled(300, seed)
    for name, check in ax.CHECKERS.items():
        exhaustive = check(c)
        sampled = check(c, mode)
        if exhaustive.holds:
            assert sampled.holds, name
        if not sampled.holds:
            assert ax.recheck(c, sampled), name


matrices = st.lists(st.lists(st.integers(-2, 3), min_size=2, max_size=2), min_size=2, max_size=2)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2), st.integers(0, 2))
def test_sign_constrained_family_satisfies_axioms(d1, d2, o1, o2):
    # B with positive diagonal and nonpositive off-diagonal entries; A = B^-1 then has nonnegative deltas
    from liberal_succession.linalg import inverse
    B = [[Fraction(d1 + o1), Fraction(-o1)], [Fraction(-o2), Fraction(d2 + o2)]]
    A = inverse(B)
    c = synthesize_from_matrix(GRID2, None, A)
    for check in (ax.check_based_on_interests, ax.check_nonpaternalism, ax.check_separability,
                  ax.check_double_cancellation, ax.check_interest_cardinality):
        assert check(c).holds
