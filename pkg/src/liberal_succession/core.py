"""State grids, communities and the relations induced by utility values."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .expr import Expr, compile_expr, coordinates_used, parse, to_text

State = tuple[Fraction, ...]

INTEREST = "interest"
PREFERENCE = "preference"


class BudgetExceeded(RuntimeError):
    """An exhaustive scan would exceed its configured work budget."""


def as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    return Fraction(value)  # type: ignore[arg-type]


def make_state(coords: Iterable[object]) -> State:
    return tuple(as_fraction(c) for c in coords)


@dataclass(frozen=True)
class StateGrid:
    axes: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not self.axes:
            raise ValueError("grid needs at least one axis")
        axes = tuple(tuple(as_fraction(v) for v in axis) for axis in self.axes)
        for k, axis in enumerate(axes, start=1):
            if not axis:
                raise ValueError(f"axis {k} is empty")
            if any(a >= b for a, b in zip(axis, axis[1:])):
                raise ValueError(f"axis {k} levels must be strictly increasing")
        object.__setattr__(self, "axes", axes)

    @classmethod
    def uniform(cls, levels: Sequence[object], dimension: int) -> "StateGrid":
        return cls(tuple(tuple(levels) for _ in range(dimension)))

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def size(self) -> int:
        n = 1
        for axis in self.axes:
            n *= len(axis)
        return n

    def contains(self, state: Sequence[Fraction]) -> bool:
        return len(state) == self.dimension and all(c in axis for c, axis in zip(state, self.axes))

    def in_hull(self, state: Sequence[Fraction]) -> bool:
        return len(state) == self.dimension and all(
            axis[0] <= c <= axis[-1] for c, axis in zip(state, self.axes)
        )


def enumerate_states(grid: StateGrid) -> list[State]:
    """All grid states in lexicographic order."""
    return [tuple(s) for s in itertools.product(*grid.axes)]


@dataclass(frozen=True)
class AgentSpec:
    id: int
    v_expr: Expr
    p_expr: Expr

    @classmethod
    def from_text(cls, id: int, v: str, p: str, dimension: int) -> "AgentSpec":
        return cls(id, parse(v, dimension), parse(p, dimension))

    @property
    def v_text(self) -> str:
        return to_text(self.v_expr)

    @property
    def p_text(self) -> str:
        return to_text(self.p_expr)


@dataclass(frozen=True)
class UtilityTable:
    """Interest and preference utilities tabulated on a list of states."""

    states: tuple[State, ...]
    v: tuple[tuple[Fraction, ...], ...]  # v[s][i]
    p: tuple[tuple[Fraction, ...], ...]  # p[s][i]
    index: dict = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class Community:
    agents: tuple[AgentSpec, ...]
    grid: StateGrid
    tolerance: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        agents = tuple(self.agents)
        if not agents:
            raise ValueError("community needs at least one agent")
        ids = [a.id for a in agents]
        if ids != list(range(1, len(agents) + 1)):
            raise ValueError(f"agent ids must be 1..n without gaps, got {ids}")
        for a in agents:
            used = coordinates_used(a.v_expr) | coordinates_used(a.p_expr)
            if used and max(used) > self.grid.dimension:
                raise ValueError(f"agent {a.id} references a coordinate beyond dimension {self.grid.dimension}")
        tol = as_fraction(self.tolerance)
        if tol < 0:
            raise ValueError("tolerance must be nonnegative")
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "tolerance", tol)

    @classmethod
    def from_texts(
        cls,
        grid: StateGrid,
        agents: Sequence[tuple[str, str]],
        tolerance: object = 0,
    ) -> "Community":
        """Build from ``(v_text, p_text)`` pairs; ids are assigned 1..n."""
        specs = tuple(
            AgentSpec.from_text(i, v, p, grid.dimension) for i, (v, p) in enumerate(agents, start=1)
        )
        return cls(specs, grid, as_fraction(tolerance))

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def ids(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def _compiled(self):
        return (
            [compile_expr(a.v_expr) for a in self.agents],
            [compile_expr(a.p_expr) for a in self.agents],
        )

    def interest(self, state: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(f(state) for f in self._compiled[0])

    def preference(self, state: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(f(state) for f in self._compiled[1])

    def utility(self, agent: int, role: str, state: Sequence[Fraction]) -> Fraction:
        funcs = self._compiled[0] if role == INTEREST else self._compiled[1]
        return funcs[agent - 1](state)

    def tabulate(self, states: Sequence[State]) -> UtilityTable:
        states = tuple(states)
        return UtilityTable(
            states,
            tuple(self.interest(s) for s in states),
            tuple(self.preference(s) for s in states),
            {s: k for k, s in enumerate(states)},
        )

    @cached_property
    def states(self) -> list[State]:
        return enumerate_states(self.grid)

    @cached_property
    def table(self) -> UtilityTable:
        """Utilities on every grid state (computed once)."""
        return self.tabulate(self.states)

    # ordering helpers on raw utility values, honouring the tolerance band
    def weak(self, a: Fraction, b: Fraction) -> bool:
        return a >= b - self.tolerance

    def strict(self, a: Fraction, b: Fraction) -> bool:
        return a > b + self.tolerance

    def equiv(self, a: Fraction, b: Fraction) -> bool:
        return abs(a - b) <= self.tolerance


def relation(
    community: Community,
    agent: int,
    role: str,
    kind: str,
    x: Sequence[Fraction],
    y: Sequence[Fraction],
) -> bool:
    """W/V/E (role=interest) or R/P/I (role=preference) of ``agent`` between x and y.

    ``kind`` is ``weak``, ``strict`` or ``equiv``.
    """
    if agent not in community.ids:
        raise ValueError(f"no agent {agent}")
    if role not in (INTEREST, PREFERENCE):
        raise ValueError(f"unknown role {role!r}")
    ux = community.utility(agent, role, x)
    uy = community.utility(agent, role, y)
    if kind == "weak":
        return community.weak(ux, uy)
    if kind == "strict":
        return community.strict(ux, uy)
    if kind == "equiv":
        return community.equiv(ux, uy)
    raise ValueError(f"unknown relation kind {kind!r}")
