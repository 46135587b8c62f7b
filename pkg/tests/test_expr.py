from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from liberal_succession.expr import (
    BinOp, Call, Coord, EvaluationError, ExprSyntaxError, Neg, Num,
    affine, coordinates_used, evaluate, parse, to_text,
)
from conftest import state


def test_min_expression_structure():
    ast = parse("min(x1/2, x2, x3)", 3)
    assert ast == Call("min", (BinOp("/", Coord(1), Num(Fraction(2))), Coord(2), Coord(3)))
    assert evaluate(ast, state(2, 2, 2)) == 1


def test_affine_expression():
    ast = parse("2*x1 - x2", 2)
    assert ast == BinOp("-", BinOp("*", Num(Fraction(2)), Coord(1)), Coord(2))
    assert evaluate(ast, state(1, 1)) == 1


def test_projection():
    assert evaluate(parse("x1", 1), state(5)) == 5


def test_coordinate_out_of_range():
    with pytest.raises(ExprSyntaxError):
        parse("x4", 3)


@pytest.mark.parametrize("text, value", [
    ("1 - 2 - 3", -4), ("2 * 3 + 4", 10), ("2 + 3 * 4", 14), ("-x1 * 2", -6),
    ("--x1", 3), ("(1 + 2) * 3", 9), ("8 / 4 / 2", 1), ("max(x1, 7/2, -1)", Fraction(7, 2)),
    ("0.5 * x1", Fraction(3, 2)), ("1.25", Fraction(5, 4)),
])
def test_precedence_and_literals(text, value):
    assert evaluate(parse(text, 1), state(3)) == value


@pytest.mark.parametrize("text, offset", [("1 +", 3), ("min(x1)", 0), ("x0", 0), ("2 $ 3", 2), ("(1", 2), ("", 0)])
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(ExprSyntaxError) as err:
        parse(text, 2)
    assert err.value.offset == offset


def test_division_by_zero_reports_state():
    with pytest.raises(EvaluationError) as err:
        evaluate(parse("1 / x1", 1), state(0))
    assert err.value.state == state(0)


def test_coordinates_used():
    assert coordinates_used(parse("min(x1, x3) + 2", 3)) == {1, 3}


def test_affine_builder_skips_zeros():
    ast = affine([2, 0, -1], [Coord(1), Coord(2), Coord(3)], Fraction(1, 2))
    assert to_text(ast) == "2 * x1 + -x3 + 0.5"
    assert evaluate(ast, state(1, 5, 1)) == Fraction(3, 2)
    assert evaluate(affine([0], [Coord(1)]), state(4)) == 0


@pytest.mark.parametrize("text", ["x1 - (x2 - x3)", "x1 / (x2 * x3)", "-(x1 + x2)", "min(x1/2, x2, x3)", "(1/3)*x1"])
def test_printer_keeps_meaning(text):
    ast = parse(text, 3)
    assert parse(to_text(ast), 3) == ast


numbers = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def exprs(depth: int = 3):
    leaves = st.one_of(numbers.map(Num), st.integers(1, 3).map(Coord))
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            inner.map(Neg),
            st.tuples(st.sampled_from("+-*"), inner, inner).map(lambda t: BinOp(*t)),
            st.tuples(st.sampled_from(["min", "max"]), st.lists(inner, min_size=2, max_size=3)).map(
                lambda t: Call(t[0], tuple(t[1]))),
        ),
        max_leaves=8,
    )


@given(exprs(), st.tuples(numbers, numbers, numbers))
def test_round_trip_is_stable(ast, point):
    text = to_text(ast)
    reparsed = parse(text, 3)
    assert parse(to_text(reparsed), 3) == reparsed
    assert evaluate(reparsed, point) == evaluate(ast, point)
