"""Unanimous (Pareto) succession, liberal succession and coincidence reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .core import BudgetExceeded, Community, State

MAX_AGENTS = 20
DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class SuccessionWitness:
    holds: bool
    coalition: frozenset[int] = frozenset()
    strict_agent: int | None = None

    def __bool__(self) -> bool:
        return self.holds


_NO = SuccessionWitness(False)


@dataclass(frozen=True)
class PairProfile:
    """Which agents weakly/strictly prefer x to y and whose interest x does not lower."""

    n: int
    weak_pref: frozenset[int]
    strict_pref: frozenset[int]
    weak_interest: frozenset[int]
    not_worse_interest: frozenset[int]  # not y V_k x


def pair_profile(c: Community, vx, vy, px, py) -> PairProfile:
    ids = c.ids
    return PairProfile(
        c.n,
        frozenset(i for i in ids if c.weak(px[i - 1], py[i - 1])),
        frozenset(i for i in ids if c.strict(px[i - 1], py[i - 1])),
        frozenset(i for i in ids if c.weak(vx[i - 1], vy[i - 1])),
        frozenset(i for i in ids if not c.strict(vy[i - 1], vx[i - 1])),
    )


def _profile(c: Community, x: Sequence[Fraction], y: Sequence[Fraction]) -> PairProfile:
    return pair_profile(c, c.interest(x), c.interest(y), c.preference(x), c.preference(y))


def _check_size(c: Community, max_agents: int) -> None:
    if c.n > max_agents:
        raise BudgetExceeded(f"{c.n} agents exceeds the coalition-scan cap of {max_agents}")


def pareto_from_profile(prof: PairProfile) -> SuccessionWitness:
    if len(prof.weak_pref) == prof.n and prof.strict_pref:
        return SuccessionWitness(True, frozenset(range(1, prof.n + 1)), min(prof.strict_pref))
    return _NO


def liberal_from_profile(prof: PairProfile, permissive: bool = False) -> SuccessionWitness:
    """First coalition in (size, lexicographic) order, with J = I whenever x is Pareto superior."""
    pareto = pareto_from_profile(prof)
    if pareto:
        return pareto
    if not prof.strict_pref:
        return _NO
    outsiders_ok = prof.not_worse_interest if permissive else prof.weak_interest
    required = frozenset(range(1, prof.n + 1)) - outsiders_ok
    if not required <= prof.weak_pref:
        return _NO
    strict_inside = required & prof.strict_pref
    if required and strict_inside:
        return SuccessionWitness(True, required, min(strict_inside))
    # one strict member must be added; the smallest id gives the lexicographically first set
    j = min(prof.strict_pref - required)
    return SuccessionWitness(True, required | {j}, j)


def coalitions_in_order(n: int) -> Iterator[frozenset[int]]:
    """Every coalition of 1..n ordered by size, then lexicographically."""
    for size in range(n + 1):
        for members in combinations(range(1, n + 1), size):
            yield frozenset(members)


def liberal_by_scan(c: Community, x: Sequence[Fraction], y: Sequence[Fraction], permissive: bool = False) -> SuccessionWitness:
    """Literal coalition scan; used as the reference for :func:`liberal_successor`."""
    prof = _profile(c, x, y)
    pareto = pareto_from_profile(prof)
    if pareto:
        return pareto
    outsiders_ok = prof.not_worse_interest if permissive else prof.weak_interest
    for J in coalitions_in_order(c.n):
        if not J <= prof.weak_pref:
            continue
        strict = J & prof.strict_pref
        if not strict:
            continue
        if all(k in outsiders_ok for k in c.ids if k not in J):
            return SuccessionWitness(True, J, min(strict))
    return _NO


def pareto_superior(c: Community, x: Sequence[Fraction], y: Sequence[Fraction]) -> SuccessionWitness:
    return pareto_from_profile(_profile(c, x, y))


def liberal_successor(
    c: Community, x: Sequence[Fraction], y: Sequence[Fraction], max_agents: int = MAX_AGENTS
) -> SuccessionWitness:
    _check_size(c, max_agents)
    return liberal_from_profile(_profile(c, x, y))


def liberal_successor_permissive(
    c: Community, x: Sequence[Fraction], y: Sequence[Fraction], max_agents: int = MAX_AGENTS
) -> SuccessionWitness:
    """Liberal succession whose outsider clause only forbids strict interest losses."""
    _check_size(c, max_agents)
    return liberal_from_profile(_profile(c, x, y), permissive=True)


@dataclass
class Divergence:
    x: State
    y: State
    pareto: SuccessionWitness
    liberal: SuccessionWitness


@dataclass
class CoincidenceReport:
    pairs_examined: int
    pareto_count: int
    liberal_count: int
    permissive_count: int
    divergent: list[Divergence] = field(default_factory=list)

    @property
    def coincide(self) -> bool:
        return not self.divergent


def coincidence_report(
    c: Community,
    budget: int = DEFAULT_BUDGET,
    max_agents: int = MAX_AGENTS,
    states: Sequence[State] | None = None,
) -> CoincidenceReport:
    """Compare Pareto and liberal succession on every ordered pair of grid states."""
    _check_size(c, max_agents)
    table = c.table if states is None else c.tabulate(states)
    m = len(table)
    cost = m * m * 2**c.n
    if cost > budget:
        raise BudgetExceeded(f"{m}^2 pairs x 2^{c.n} coalitions = {cost} exceeds budget {budget}")
    report = CoincidenceReport(m * m, 0, 0, 0)
    for a in range(m):
        va, pa = table.v[a], table.p[a]
        for b in range(m):
            prof = pair_profile(c, va, table.v[b], pa, table.p[b])
            par = pareto_from_profile(prof)
            lib = liberal_from_profile(prof)
            per = liberal_from_profile(prof, permissive=True)
            report.pareto_count += par.holds
            report.liberal_count += lib.holds
            report.permissive_count += per.holds
            if par.holds != lib.holds:
                report.divergent.append(Divergence(table.states[a], table.states[b], par, lib))
    return report
