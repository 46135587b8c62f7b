"""Utility-expression language: parsing, exact evaluation, canonical printing.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | NUMBER | COORD | '(' expr ')'
            | ('min'|'max') '(' expr (',' expr)+ ')'
    COORD  := 'x' [1-9][0-9]*

Numbers are decimal literals and are converted to exact ``Fraction`` values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EvaluationError(ArithmeticError):
    def __init__(self, message: str, state: Sequence[Fraction] | None = None):
        if state is not None:
            message = f"{message} at state ({', '.join(str(c) for c in state)})"
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Coord:
    index: int  # 1-based


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str  # min or max
    args: tuple["Expr", ...]


Expr = Union[Num, Coord, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<coord>x[1-9][0-9]*)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/(),]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[pos + stripped]!r}", pos + stripped)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, dimension: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.dimension = dimension

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, text, offset = self.advance()
        if text != value or kind not in ("op",):
            found = text or "end of input"
            raise ExprSyntaxError(f"expected {value!r}, found {found!r}", offset)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        kind, text, offset = self.advance()
        if kind == "op" and text == "-":
            return Neg(self.factor())
        if kind == "num":
            return Num(Fraction(text))
        if kind == "coord":
            index = int(text[1:])
            if index > self.dimension:
                raise ExprSyntaxError(
                    f"coordinate {text} out of range for dimension {self.dimension}", offset
                )
            return Coord(index)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "name":
            if text not in ("min", "max"):
                raise ExprSyntaxError(f"unknown function {text!r}", offset)
            self.expect("(")
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.advance()
                args.append(self.expr())
            if len(args) < 2:
                raise ExprSyntaxError(f"{text} needs at least two arguments", offset)
            self.expect(")")
            return Call(text, tuple(args))
        found = text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", offset)


def parse(text: str, dimension: int) -> Expr:
    """Parse ``text`` into an AST whose coordinates are bounded by ``dimension``."""
    if not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    parser = _Parser(text, dimension)
    node = parser.expr()
    kind, tok, offset = parser.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {tok!r}", offset)
    return node


def evaluate(node: Expr, state: Sequence[Fraction]) -> Fraction:
    """Evaluate exactly at ``state`` (a sequence of rational coordinates)."""
    return compile_expr(node)(state)


def compile_expr(node: Expr) -> Callable[[Sequence[Fraction]], Fraction]:
    """Turn an AST into a closure; raises EvaluationError on division by zero."""
    if isinstance(node, Num):
        value = node.value
        return lambda s: value
    if isinstance(node, Coord):
        k = node.index - 1

        def coord(s: Sequence[Fraction]) -> Fraction:
            if k >= len(s):
                raise EvaluationError(f"state has no coordinate x{k + 1}", s)
            return s[k]

        return coord
    if isinstance(node, Neg):
        inner = compile_expr(node.operand)
        return lambda s: -inner(s)
    if isinstance(node, BinOp):
        left, right = compile_expr(node.left), compile_expr(node.right)
        if node.op == "+":
            return lambda s: left(s) + right(s)
        if node.op == "-":
            return lambda s: left(s) - right(s)
        if node.op == "*":
            return lambda s: left(s) * right(s)

        def divide(s: Sequence[Fraction]) -> Fraction:
            denom = right(s)
            if denom == 0:
                raise EvaluationError("division by zero", s)
            return Fraction(left(s)) / denom

        return divide
    if isinstance(node, Call):
        parts = [compile_expr(a) for a in node.args]
        pick = min if node.func == "min" else max
        return lambda s: pick(f(s) for f in parts)
    raise TypeError(f"not an expression node: {node!r}")


def coordinates_used(node: Expr) -> set[int]:
    if isinstance(node, Coord):
        return {node.index}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Neg):
        return coordinates_used(node.operand)
    if isinstance(node, BinOp):
        return coordinates_used(node.left) | coordinates_used(node.right)
    return set().union(*(coordinates_used(a) for a in node.args))


# precedence levels: sums 1, products 2, unary 3, atoms 4
def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return 1 if node.op in "+-" else 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Num) and (node.value < 0 or node.value.denominator != 1 and not _is_decimal(node.value)):
        return 0
    return 4


def _is_decimal(value: Fraction) -> bool:
    d = value.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def _format_number(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    if _is_decimal(value):
        digits = 0
        scaled = value
        while scaled.denominator != 1:
            scaled *= 10
            digits += 1
        sign = "-" if scaled < 0 else ""
        s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
        return f"{sign}{s[:-digits]}.{s[-digits:]}"
    return f"{value.numerator}/{value.denominator}"


def to_text(node: Expr) -> str:
    """Canonical text with minimal parentheses; ``parse(to_text(e))`` evaluates like ``e``.

    For trees produced by :func:`parse` the round trip is exact.
    """
    if isinstance(node, Num):
        text = _format_number(node.value)
        return f"({text})" if _prec(node) == 0 else text
    if isinstance(node, Coord):
        return f"x{node.index}"
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        return f"-{inner}" if _prec(node.operand) >= 3 else f"-({inner})"
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_text(a) for a in node.args)})"
    mine = _prec(node)
    left = to_text(node.left)
    if _prec(node.left) < mine:
        left = f"({left})"
    right = to_text(node.right)
    # left associativity: an equal-precedence right operand keeps its parentheses
    if _prec(node.right) <= mine:
        right = f"({right})"
    return f"{left} {node.op} {right}"


def affine(coefficients: Sequence[Fraction], terms: Sequence[Expr], constant: Fraction = Fraction(0)) -> Expr:
    """Build ``sum(c * t) + constant``, skipping zero coefficients."""
    node: Expr | None = None
    for c, t in zip(coefficients, terms):
        c = Fraction(c)
        if c == 0:
            continue
        if c == 1:
            piece: Expr = t
        elif c == -1:
            piece = Neg(t)
        else:
            piece = BinOp("*", Num(c), t)
        node = piece if node is None else BinOp("+", node, piece)
    constant = Fraction(constant)
    if node is None:
        return Num(constant)
    if constant != 0:
        node = BinOp("+", node, Num(constant))
    return node
