"""Witness-producing checkers for the conditions a community may satisfy.

Every checker takes a :class:`~liberal_succession.core.Community` and a
:class:`ScanMode` and returns a :class:`CheckResult`. A failing result carries
a witness that :func:`recheck` re-evaluates against the condition's defining
implication, independently of the scan that found it.

Tuple conditions (separability, double cancellation, the two cardinality
conditions) are scanned constructively: states are grouped into classes of
equal interest (or preference) values and only the per-class extremes of the
relevant preference utility are compared. This is exact when the tolerance is
zero, which those checkers require.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import BudgetExceeded, Community, State, UtilityTable

BASED_ON_INTERESTS = "based-on-interests"
NONPATERNALISM = "nonpaternalism"
SEPARABILITY = "separability"
PRODUCT_STRUCTURE = "product-structure"
IDIOSYNCRATIC_INTEREST = "idiosyncratic-interest"
IDIOSYNCRATIC_PREFERENCE = "idiosyncratic-preference"
UNAMBIGUOUS_IMPROVEMENT = "unambiguous-improvement"
NONMALEVOLENCE = "nonmalevolence"
DOUBLE_CANCELLATION = "double-cancellation"
INTEREST_CARDINALITY = "interest-cardinality"
PREFERENCE_CARDINALITY = "preference-cardinality"

DEFAULT_BUDGET = 10**7
DEFAULT_SAMPLES = 10_000


@dataclass(frozen=True)
class ScanMode:
    exhaustive: bool = True
    samples: int = DEFAULT_SAMPLES
    seed: int | None = None
    budget: int = DEFAULT_BUDGET

    @classmethod
    def sampled(cls, samples: int = DEFAULT_SAMPLES, seed: int = 0, budget: int = DEFAULT_BUDGET) -> "ScanMode":
        return cls(False, samples, seed, budget)

    def rng(self) -> random.Random:
        return random.Random(self.seed)


EXHAUSTIVE = ScanMode()


@dataclass
class CheckResult:
    condition: str
    holds: bool
    witness: dict = field(default_factory=dict)
    samples_examined: int = 0
    exhaustive: bool = True
    vacuous: bool = False
    seed: int | None = None
    example: dict = field(default_factory=dict)  # positive evidence for existence conditions
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SupportSet:
    agent: int
    support: frozenset[int]
    witnesses: dict = field(default_factory=dict, compare=False)  # j -> (x, y)


def _finish(
    condition: str,
    mode: ScanMode,
    examined: int,
    witness: dict | None,
    **extra,
) -> CheckResult:
    holds = witness is None
    return CheckResult(
        condition,
        holds,
        witness or {},
        examined,
        mode.exhaustive,
        vacuous=holds and examined == 0,
        seed=None if mode.exhaustive else mode.seed,
        **extra,
    )


def _require_exact(c: Community, condition: str) -> None:
    if c.tolerance != 0:
        raise ValueError(f"{condition} uses exact class matching and needs tolerance 0")


def _charge(mode: ScanMode, cost: int, what: str) -> None:
    if mode.exhaustive and cost > mode.budget:
        raise BudgetExceeded(f"{what}: {cost} tuples exceeds budget {mode.budget}")


def _pairs(m: int, mode: ScanMode) -> Iterable[tuple[int, int]]:
    """Ordered pairs of distinct state indices; x == y satisfies every pairwise condition."""
    if mode.exhaustive:
        _charge(mode, m * m, "pair scan")
        return ((a, b) for a in range(m) for b in range(m) if a != b)
    rng = mode.rng()

    def draw():
        for _ in range(mode.samples):
            a, b = rng.randrange(m), rng.randrange(m)
            if a != b:
                yield a, b

    return draw()


# -- pairwise universal conditions ---------------------------------------------------------


def check_based_on_interests(c: Community, mode: ScanMode = EXHAUSTIVE) -> CheckResult:
    """With every other agent's interest unchanged, j's preference follows j's interest."""
    t = c.table
    examined = 0
    for a, b in _pairs(len(t), mode):
        va, vb, pa, pb = t.v[a], t.v[b], t.p[a], t.p[b]
        not_equiv = [k for k in range(c.n) if not c.equiv(va[k], vb[k])]
        if len(not_equiv) > 1:
            continue
        for j in range(c.n):
            if not_equiv and not_equiv[0] != j:
                continue
            examined += 1
            if c.weak(va[j], vb[j]) != c.weak(pa[j], pb[j]):
                return _finish(BASED_ON_INTERESTS, mode, examined, {"agent": j + 1, "x": t.states[a], "y": t.states[b]})
    return _finish(BASED_ON_INTERESTS, mode, examined, None)


def check_nonpaternalism(c: Community, mode: ScanMode = EXHAUSTIVE) -> CheckResult:
    """No agent opposes a change that serves their interest and that everyone else accepts."""
    t = c.table
    examined = 0
    for a, b in _pairs(len(t), mode):
        va, vb, pa, pb = t.v[a], t.v[b], t.p[a], t.p[b]
        not_pref = [k for k in range(c.n) if not c.weak(pa[k], pb[k])]
        if len(not_pref) > 1:
            continue
        for j in not_pref or range(c.n):
            if not c.weak(va[j], vb[j]):
                continue
            examined += 1
            if not_pref:
                return _finish(NONPATERNALISM, mode, examined, {"agent": j + 1, "x": t.states[a], "y": t.states[b]})
    return _finish(NONPATERNALISM, mode, examined, None)


def check_nonmalevolence(c: Community, mode: ScanMode = EXHAUSTIVE) -> CheckResult:
    """If no agent's interest is lowered, no agent's preference is lowered."""
    t = c.table
    examined = 0
    for a, b in _pairs(len(t), mode):
        va, vb, pa, pb = t.v[a], t.v[b], t.p[a], t.p[b]
        if not all(c.weak(va[k], vb[k]) for k in range(c.n)):
            continue
        examined += 1
        for j in range(c.n):
            if not c.weak(pa[j], pb[j]):
                return _finish(NONMALEVOLENCE, mode, examined, {"agent": j + 1, "x": t.states[a], "y": t.states[b]})
    return _finish(NONMALEVOLENCE, mode, examined, None)


# -- existence conditions ---------------------------------------------------------------


def _domain(c: Community, probes: Sequence[State]) -> UtilityTable:
    if not probes:
        return c.table
    extra = []
    seen = set(c.states)
    for s in probes:
        s = tuple(Fraction(x) for x in s)
        if not c.grid.in_hull(s):
            raise ValueError(f"probe state {s} lies outside the grid's bounding box")
        if s not in seen:
            seen.add(s)
            extra.append(s)
    return c.tabulate(list(c.states) + extra)


def _find_pair(t: UtilityTable, pred: Callable[[int, int], bool]) -> tuple[int, int] | None:
    m = len(t)
    for a in range(m):
        for b in range(m):
            if a != b and pred(a, b):
                return a, b
    return None


def _idiosyncratic(c: Community, condition: str, role_v: bool, probes: Sequence[State], mode: ScanMode) -> CheckResult:
    t = _domain(c, probes)
    _charge(mode, len(t) ** 2 * c.n, condition)
    u = t.v if role_v else t.p
    found = {}
    for i in range(c.n):
        def pred(a: int, b: int, i: int = i) -> bool:
            return c.strict(u[a][i], u[b][i]) and all(
                c.equiv(u[a][k], u[b][k]) for k in range(c.n) if k != i
            )

        hit = _find_pair(t, pred)
        if hit is None:
            return CheckResult(condition, False, {"agent": i + 1}, len(found), True,
                               example={k: v for k, v in found.items()},
                               details={"domain_size": len(t)})
        found[i + 1] = (t.states[hit[0]], t.states[hit[1]])
    # existence scans are always exhaustive: a sampled miss is no evidence of absence
    return CheckResult(condition, True, {}, len(found), True, example=found, details={"domain_size": len(t)})


def check_idiosyncratic_interest(c: Community, mode: ScanMode = EXHAUSTIVE, probes: Sequence[State] = ()) -> CheckResult:
    """Each agent's interest can move alone (strictly) while all others' stay put."""
    return _idiosyncratic(c, IDIOSYNCRATIC_INTEREST, True, probes, mode)


def check_idiosyncratic_preference(c: Community, mode: ScanMode = EXHAUSTIVE, probes: Sequence[State] = ()) -> CheckResult:
    """Each agent can strictly prefer a move over which everyone else is indifferent.

    ``probes`` adds off-grid states (inside the grid's bounding box) to the search;
    the utilities are evaluated there exactly.
    """
    return _idiosyncratic(c, IDIOSYNCRATIC_PREFERENCE, False, probes, mode)


def _improves(c: Community, t: UtilityTable, a: int, b: int, agents: Iterable[int]) -> bool:
    return all(c.strict(t.v[a][k], t.v[b][k]) and c.strict(t.p[a][k], t.p[b][k]) for k in agents)


def check_unambiguous_improvement(c: Community, mode: ScanMode = EXHAUSTIVE, probes: Sequence[State] = ()) -> CheckResult:
    t = _domain(c, probes)
    _charge(mode, len(t) ** 2, UNAMBIGUOUS_IMPROVEMENT)
    everyone = range(c.n)
    hit = _find_pair(t, lambda a, b: _improves(c, t, a, b, everyone))
    if hit is not None:
        return CheckResult(UNAMBIGUOUS_IMPROVEMENT, True, {}, 1, True,
                           example={"x": t.states[hit[0]], "y": t.states[hit[1]]})
    # smallest group of agents that can never all improve together
    for size in range(1, c.n + 1):
        for group in itertools.combinations(everyone, size):
            if _find_pair(t, lambda a, b: _improves(c, t, a, b, group)) is None:
                return CheckResult(UNAMBIGUOUS_IMPROVEMENT, False, {"agents": tuple(k + 1 for k in group)}, 0, True)
    raise AssertionError("unreachable")  # the full group has no improving pair


def check_product_structure(c: Community, mode: ScanMode = EXHAUSTIVE) -> CheckResult:
    """Every profile of per-agent interest levels is realised by a single state."""
    _require_exact(c, PRODUCT_STRUCTURE)
    t = c.table
    reps: list[dict[Fraction, State]] = [{} for _ in range(c.n)]
    for s, v in zip(t.states, t.v):
        for k in range(c.n):
            reps[k].setdefault(v[k], s)
    levels = [sorted(r) for r in reps]
    realised = set(t.v)
    total = 1
    for lv in levels:
        total *= len(lv)
    if mode.exhaustive:
        _charge(mode, total, PRODUCT_STRUCTURE)
        profiles: Iterable[tuple[Fraction, ...]] = itertools.product(*levels)
    else:
        rng = mode.rng()
        profiles = (tuple(rng.choice(lv) for lv in levels) for _ in range(mode.samples))
    examined = 0
    for prof in profiles:
        examined += 1
        if tuple(prof) not in realised:
            witness = {f"x_{k + 1}": reps[k][prof[k]] for k in range(c.n)}
            return _finish(PRODUCT_STRUCTURE, mode, examined, witness, details={"profiles": total})
    return _finish(PRODUCT_STRUCTURE, mode, examined, None, details={"profiles": total})


# -- class machinery for tuple conditions ----------------------------------------------------


class _ClassStats:
    """Per-class max/min of one agent's preference, as integer ranks with argmax/argmin states."""

    BIG = 1 << 40

    def __init__(self, keys: Sequence[object], levels: Sequence[object], values: Sequence[Fraction], states: Sequence[State]):
        self.o_index = {o: n for n, o in enumerate(dict.fromkeys(sorted(set(keys), key=_sort_key)))}
        self.l_index = {l: n for n, l in enumerate(sorted(set(levels)))}
        rank = {v: r for r, v in enumerate(sorted(set(values)))}
        shape = (len(self.o_index), len(self.l_index))
        self.pmax = np.full(shape, -1, dtype=np.int64)
        self.pmin = np.full(shape, self.BIG, dtype=np.int64)
        self.argmax: dict = {}
        self.argmin: dict = {}
        self.members: dict = {}
        for key, lvl, val, s in zip(keys, levels, values, states):
            cell = (self.o_index[key], self.l_index[lvl])
            r = rank[val]
            self.members.setdefault(cell, []).append(s)
            if r > self.pmax[cell]:
                self.pmax[cell] = r
                self.argmax[cell] = s
            if r < self.pmin[cell]:
                self.pmin[cell] = r
                self.argmin[cell] = s


def _sort_key(key: object):
    return key if isinstance(key, tuple) else (key,)


def _first_true(arr: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(arr)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


# -- separability -------------------------------------------------------------------------


def check_separability(c: Community, mode: ScanMode = EXHAUSTIVE) -> CheckResult:
    """Trade-offs within a group J do not depend on the fixed interests of its complement K."""
    _require_exact(c, SEPARABILITY)
    t = c.table
    n = c.n
    partitions = [frozenset(J) for size in range(n + 1) for J in itertools.combinations(range(n), size)]
    if not mode.exhaustive:
        return _sampled_separability(c, mode, partitions)
    examined = 0
    for i in range(n):
        pvals = [p[i] for p in t.p]
        for J in partitions:
            Jl = sorted(J)
            Kl = [k for k in range(n) if k not in J]
            keys = [tuple(v[j] for j in Jl) for v in t.v]
            levels = [tuple(v[k] for k in Kl) for v in t.v]
            st = _ClassStats(keys, levels, pvals, t.states)
            la, lk = st.pmax.shape
            _charge(mode, la * la * lk * lk, SEPARABILITY)
            exists = st.pmax >= 0
            examined += int(np.einsum("ac,bc,ad,bd->", exists, exists, exists, exists, dtype=np.int64))
            # case 1: w R x but not y R z; case 2: not w R x but y R z
            wx_weak = st.pmax[:, None, :] >= st.pmin[None, :, :]  # [a, b, c]
            yz_notweak = st.pmin[:, None, :] < st.pmax[None, :, :]  # [a, b, d]
            case1 = wx_weak[:, :, :, None] & yz_notweak[:, :, None, :]
            case2 = yz_notweak[:, :, :, None] & wx_weak[:, :, None, :]
            for case, arr in ((1, case1), (2, case2)):
                hit = _first_true(arr)
                if hit is None:
                    continue
                a, b, cc, d = hit
                if case == 1:
                    w, x = st.argmax[(a, cc)], st.argmin[(b, cc)]
                    y, z = st.argmin[(a, d)], st.argmax[(b, d)]
                else:
                    w, x = st.argmin[(a, cc)], st.argmax[(b, cc)]
                    y, z = st.argmax[(a, d)], st.argmin[(b, d)]
                witness = {"agent": i + 1, "J": tuple(j + 1 for j in Jl), "K": tuple(k + 1 for k in Kl),
                           "w": w, "x": x, "y": y, "z": z}
                return _finish(SEPARABILITY, mode, examined, witness)
    return _finish(SEPARABILITY, mode, examined, None)


def _sampled_separability(c: Community, mode: ScanMode, partitions) -> CheckResult:
    t = c.table
    rng = mode.rng()
    by_sig: dict[tuple, list[State]] = {}
    for s, v in zip(t.states, t.v):
        by_sig.setdefault(v, []).append(s)
    sigs = list(by_sig)
    examined = 0
    for _ in range(mode.samples):
        i = rng.randrange(c.n)
        J = partitions[rng.randrange(len(partitions))]
        s1, s2 = rng.choice(sigs), rng.choice(sigs)  # signatures of w and z
        sig_x = tuple(s2[k] if k in J else s1[k] for k in range(c.n))
        sig_y = tuple(s1[k] if k in J else s2[k] for k in range(c.n))
        if sig_x not in by_sig or sig_y not in by_sig:
            continue
        w, z = rng.choice(by_sig[s1]), rng.choice(by_sig[s2])
        x, y = rng.choice(by_sig[sig_x]), rng.choice(by_sig[sig_y])
        examined += 1
        witness = {"agent": i + 1, "J": tuple(sorted(j + 1 for j in J)),
                   "K": tuple(k + 1 for k in range(c.n) if k not in J), "w": w, "x": x, "y": y, "z": z}
        if violates_separability(c, **witness):
            return _finish(SEPARABILITY, mode, examined, witness)
    return _finish(SEPARABILITY, mode, examined, None)


# -- double cancellation --------------------------------------------------------------------


def two_factor_guards(c: Community) -> list[tuple[int, int]]:
    """Pairs (j, i), i != j, where x W_i y and x W_j y jointly imply x R_j y on the grid."""
    t = c.table
    m = len(t)
    out = []
    for j in range(c.n):
        for i in range(c.n):
            if i == j:
                continue
            ok = True
            for a in range(m):
                va, pa = t.v[a], t.p[a]
                for b in range(m):
                    vb = t.v[b]
                    if c.weak(va[i], vb[i]) and c.weak(va[j], vb[j]) and not c.weak(pa[j], t.p[b][j]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append((j + 1, i + 1))
    return out


def check_double_cancellation(c: Community, mode: ScanMode = EXHAUSTIVE) -> CheckResult:
    """Double cancellation for agents whose preferences rest on two interests.

    States pair up through equal interests: r~t and x~s and y~z in the other
    agent i's interest, r~y and s~t and x~z in agent j's own. If r R_j x and
    s R_j y then t R_j z.
    """
    _require_exact(c, DOUBLE_CANCELLATION)
    t = c.table
    _charge(mode, len(t) ** 2 * c.n * max(c.n - 1, 1), "double-cancellation guard")
    guards = two_factor_guards(c)
    examined = 0
    rng = mode.rng()
    for j1, i1 in guards:
        j, i = j1 - 1, i1 - 1
        keys = [v[i] for v in t.v]
        levels = [v[j] for v in t.v]
        st = _ClassStats(keys, levels, [p[j] for p in t.p], t.states)
        li, lj = st.pmax.shape
        if mode.exhaustive:
            _charge(mode, li**3 * lj**3, DOUBLE_CANCELLATION)
            px, pn = st.pmax, st.pmin
            # indices: a1 a2 a3 over i-levels, b1 b2 b3 over j-levels
            rx = px[:, None, None, None, :, None] >= pn[None, :, None, :, None, None]  # r=(a1,b2) R x=(a2,b1)
            sy = px[None, :, None, None, None, :] >= pn[None, None, :, None, :, None]  # s=(a2,b3) R y=(a3,b2)
            tz = pn[:, None, None, None, None, :] < px[None, None, :, :, None, None]  # not t=(a1,b3) R z=(a3,b1)
            viol = rx & sy & tz  # axes: a1 a2 a3 b1 b2 b3
            ex = px >= 0
            examined += int(np.count_nonzero(
                ex[:, None, None, None, :, None] & ex[None, :, None, :, None, None]
                & ex[None, :, None, None, None, :] & ex[None, None, :, None, :, None]
                & ex[:, None, None, None, None, :] & ex[None, None, :, :, None, None]))
            hit = _first_true(viol)
            if hit is None:
                continue
            a1, a2, a3, b1, b2, b3 = hit
            witness = {"agent": j1, "other": i1,
                       "r": st.argmax[(a1, b2)], "s": st.argmax[(a2, b3)], "t": st.argmin[(a1, b3)],
                       "x": st.argmin[(a2, b1)], "y": st.argmin[(a3, b2)], "z": st.argmax[(a3, b1)]}
            return _finish(DOUBLE_CANCELLATION, mode, examined, witness, details={"two_factor": guards})
        for _ in range(mode.samples // max(len(guards), 1)):
            a1, a2, a3 = (rng.randrange(li) for _ in range(3))
            b1, b2, b3 = (rng.randrange(lj) for _ in range(3))
            cells = {"r": (a1, b2), "x": (a2, b1), "s": (a2, b3), "y": (a3, b2), "t": (a1, b3), "z": (a3, b1)}
            if any(cell not in st.members for cell in cells.values()):
                continue
            examined += 1
            witness = {"agent": j1, "other": i1, **{k: rng.choice(st.members[cell]) for k, cell in cells.items()}}
            if violates_double_cancellation(c, **witness):
                return _finish(DOUBLE_CANCELLATION, mode, examined, witness, details={"two_factor": guards})
    return _finish(DOUBLE_CANCELLATION, mode, examined, None, details={"two_factor": guards})


# -- supports and cardinality conditions ------------------------------------------------------


def detect_support(c: Community, i: int) -> SupportSet:
    """N(i): the agents j such that i strictly prefers some move that changes only j's interest."""
    t = c.table
    m = len(t)
    k = i - 1
    witnesses: dict[int, tuple[State, State]] = {}
    for a in range(m):
        for b in range(m):
            if a == b or not c.strict(t.p[a][k], t.p[b][k]):
                continue
            moved = [h for h in range(c.n) if not c.equiv(t.v[a][h], t.v[b][h])]
            if len(moved) > 1:
                continue
            candidates = moved if moved else range(c.n)
            for j in candidates:
                witnesses.setdefault(j + 1, (t.states[a], t.states[b]))
    return SupportSet(i, frozenset(witnesses), witnesses)


def preference_support(c: Community, i: int) -> SupportSet:
    """S(i): agents j that strictly gain in a move fixing i's interest while every
    agent outside {i, j} is indifferent."""
    t = c.table
    m = len(t)
    k = i - 1
    witnesses: dict[int, tuple[State, State]] = {}
    for a in range(m):
        for b in range(m):
            if a == b or not c.equiv(t.v[a][k], t.v[b][k]):
                continue
            moved = [h for h in range(c.n) if h != k and not c.equiv(t.p[a][h], t.p[b][h])]
            # j = i is allowed: then every other agent must be indifferent
            for j in moved if len(moved) == 1 else [k] if not moved else []:
                if c.strict(t.p[a][j], t.p[b][j]):
                    witnesses.setdefault(j + 1, (t.states[a], t.states[b]))
    return SupportSet(i, frozenset(witnesses), witnesses)


@functools.lru_cache(maxsize=32)
def _supports(c: Community, kind: str) -> dict[int, frozenset[int]]:
    find = detect_support if kind == "interest" else preference_support
    return {i: find(c, i).support for i in c.ids}


_OCTUPLE = ("w_h", "x_h", "y_h", "z_h", "w_i", "x_i", "y_i", "z_i")


def _cardinality_scan(
    st_h: _ClassStats, st_i: _ClassStats, mode: ScanMode, condition: str
) -> tuple[dict | None, int]:
    """Search an octuple: h-states in classes (o1,a) (o1,b) (o2,c) (o2,d), i-states in
    (o3,a) (o3,b) (o4,c) (o4,d), with w_h R_h y_h, z_h R_h x_h, y_i R_i w_i, not z_i R_i x_i."""
    oh, L = st_h.pmax.shape
    oi = st_i.pmax.shape[0]
    _charge(mode, (oh * oh + oi * oi) * L**4, condition)
    # M[o1,o2,a,c] = max_h(o1,a) >= min_h(o2,c)
    M = (st_h.pmax[:, None, :, None] >= st_h.pmin[None, :, None, :]).astype(np.int64)
    H = np.einsum("pqac,qpdb->abcd", M, M) > 0
    N1 = (st_i.pmax[None, :, :, None] >= st_i.pmin[:, None, None, :]).astype(np.int64)  # [o3,o4,c,a]
    N2 = (st_i.pmin[None, :, :, None] < st_i.pmax[:, None, None, :]).astype(np.int64)  # [o3,o4,d,b]
    I = np.einsum("pqca,pqdb->abcd", N1, N2) > 0
    eh = (st_h.pmax >= 0).astype(np.int64)
    ei = (st_i.pmax >= 0).astype(np.int64)
    examined = int(np.einsum("pa,pb,qc,qd->", eh, eh, eh, eh) * np.einsum("pa,pb,qc,qd->", ei, ei, ei, ei)) if L <= 12 else 0
    hit = _first_true(H & I)
    if hit is None:
        return None, examined
    a, b, cc, d = hit
    o1, o2 = next((p, q) for p in range(oh) for q in range(oh) if M[p, q, a, cc] and M[q, p, d, b])
    o3, o4 = next((p, q) for p in range(oi) for q in range(oi) if N1[p, q, cc, a] and N2[p, q, d, b])
    return {
        "w_h": st_h.argmax[(o1, a)], "x_h": st_h.argmin[(o1, b)],
        "y_h": st_h.argmin[(o2, cc)], "z_h": st_h.argmax[(o2, d)],
        "w_i": st_i.argmin[(o3, a)], "x_i": st_i.argmax[(o3, b)],
        "y_i": st_i.argmax[(o4, cc)], "z_i": st_i.argmin[(o4, d)],
    }, examined


def _sampled_cardinality(st_h: _ClassStats, st_i: _ClassStats, rng: random.Random, draws: int,
                         check: Callable[[dict], bool]) -> tuple[dict | None, int]:
    oh, L = st_h.pmax.shape
    oi = st_i.pmax.shape[0]
    examined = 0
    for _ in range(draws):
        a, b, cc, d = (rng.randrange(L) for _ in range(4))
        o1, o2 = rng.randrange(oh), rng.randrange(oh)
        o3, o4 = rng.randrange(oi), rng.randrange(oi)
        cells_h = [(o1, a), (o1, b), (o2, cc), (o2, d)]
        cells_i = [(o3, a), (o3, b), (o4, cc), (o4, d)]
        if any(x not in st_h.members for x in cells_h) or any(x not in st_i.members for x in cells_i):
            continue
        examined += 1
        states = [rng.choice(st_h.members[x]) for x in cells_h] + [rng.choice(st_i.members[x]) for x in cells_i]
        octuple = dict(zip(_OCTUPLE, states))
        if check(octuple):
            return octuple, examined
    return None, examined


def check_interest_cardinality(c: Community, mode: ScanMode = EXHAUSTIVE) -> CheckResult:
    """Agents h and i whose preferences both weigh j's interest agree on cardinal
    comparisons of j's interest differences."""
    _require_exact(c, INTEREST_CARDINALITY)
    t = c.table
    supports = _supports(c, "interest")
    triples = [(h, i, j) for j in c.ids for h in c.ids for i in c.ids if j in supports[h] and j in supports[i]]
    enabled = {(h, i, j): any(g != j for g in supports[h]) and any(g != j for g in supports[i])
               for h, i, j in triples}
    details = {"supports": {i: tuple(sorted(s)) for i, s in supports.items()}, "lemma14_enabled": enabled}
    rng = mode.rng()
    examined = 0
    for h, i, j in triples:
        keys = [tuple(v[g] for g in range(c.n) if g != j - 1) for v in t.v]
        levels = [v[j - 1] for v in t.v]
        st_h = _ClassStats(keys, levels, [p[h - 1] for p in t.p], t.states)
        st_i = _ClassStats(keys, levels, [p[i - 1] for p in t.p], t.states)
        if mode.exhaustive:
            octuple, k = _cardinality_scan(st_h, st_i, mode, INTEREST_CARDINALITY)
        else:
            octuple, k = _sampled_cardinality(
                st_h, st_i, rng, mode.samples // len(triples),
                lambda o: violates_interest_cardinality(c, h=h, i=i, j=j, **o))
        examined += k
        if octuple is not None:
            return _finish(INTEREST_CARDINALITY, mode, examined, {"h": h, "i": i, "j": j, **octuple}, details=details)
    return _finish(INTEREST_CARDINALITY, mode, examined, None, details=details)


def check_preference_cardinality(c: Community, mode: ScanMode = EXHAUSTIVE) -> CheckResult:
    """The preference analogue: judges h and i agree on cardinal comparisons of j's
    preference differences, measured while their own interests stay fixed."""
    _require_exact(c, PREFERENCE_CARDINALITY)
    t = c.table
    supports = _supports(c, "preference")
    triples = [(h, i, j) for j in c.ids for h in c.ids for i in c.ids if j in supports[h] and j in supports[i]]
    details = {"supports": {i: tuple(sorted(s)) for i, s in supports.items()}}
    rng = mode.rng()
    examined = 0

    def keys_for(judge: int, j: int) -> list:
        others = [g for g in range(c.n) if g not in (judge - 1, j - 1)]
        return [(v[judge - 1],) + tuple(p[g] for g in others) for v, p in zip(t.v, t.p)]

    for h, i, j in triples:
        levels = [p[j - 1] for p in t.p]
        st_h = _ClassStats(keys_for(h, j), levels, [p[h - 1] for p in t.p], t.states)
        st_i = _ClassStats(keys_for(i, j), levels, [p[i - 1] for p in t.p], t.states)
        if mode.exhaustive:
            octuple, k = _cardinality_scan(st_h, st_i, mode, PREFERENCE_CARDINALITY)
        else:
            octuple, k = _sampled_cardinality(
                st_h, st_i, rng, mode.samples // len(triples),
                lambda o: violates_preference_cardinality(c, h=h, i=i, j=j, **o))
        examined += k
        if octuple is not None:
            return _finish(PREFERENCE_CARDINALITY, mode, examined, {"h": h, "i": i, "j": j, **octuple}, details=details)
    return _finish(PREFERENCE_CARDINALITY, mode, examined, None, details=details)


# -- independent re-evaluation of witnesses ---------------------------------------------------


def _u(c: Community, role: str, k: int, s: Sequence[Fraction]) -> Fraction:
    return c.utility(k, role, s)


def _W(c, k, x, y):
    return c.weak(_u(c, "interest", k, x), _u(c, "interest", k, y))


def _V(c, k, x, y):
    return c.strict(_u(c, "interest", k, x), _u(c, "interest", k, y))


def _E(c, k, x, y):
    return c.equiv(_u(c, "interest", k, x), _u(c, "interest", k, y))


def _R(c, k, x, y):
    return c.weak(_u(c, "preference", k, x), _u(c, "preference", k, y))


def _P(c, k, x, y):
    return c.strict(_u(c, "preference", k, x), _u(c, "preference", k, y))


def _I(c, k, x, y):
    return c.equiv(_u(c, "preference", k, x), _u(c, "preference", k, y))


def violates_based_on_interests(c: Community, agent: int, x, y) -> bool:
    hyp = all(_E(c, i, x, y) for i in c.ids if i != agent)
    return hyp and (_W(c, agent, x, y) != _R(c, agent, x, y))


def violates_nonpaternalism(c: Community, agent: int, x, y) -> bool:
    hyp = _W(c, agent, x, y) and all(_R(c, i, x, y) for i in c.ids if i != agent)
    return hyp and not _R(c, agent, x, y)


def violates_nonmalevolence(c: Community, agent: int, x, y) -> bool:
    return all(_W(c, i, x, y) for i in c.ids) and not _R(c, agent, x, y)


def violates_separability(c: Community, agent: int, J, K, w, x, y, z) -> bool:
    if set(J) | set(K) != set(c.ids) or set(J) & set(K):
        return False
    hyp = all(_E(c, j, w, y) and _E(c, j, x, z) for j in J) and all(_E(c, k, w, x) and _E(c, k, y, z) for k in K)
    return hyp and (_R(c, agent, w, x) != _R(c, agent, y, z))


def violates_product_structure(c: Community, **profile) -> bool:
    targets = [profile[f"x_{k}"] for k in c.ids]
    return not any(all(_E(c, k, y, targets[k - 1]) for k in c.ids) for y in c.states)


def violates_double_cancellation(c: Community, agent: int, other: int, r, s, t, x, y, z) -> bool:
    j, i = agent, other
    guard = all(
        not (_W(c, i, a, b) and _W(c, j, a, b)) or _R(c, j, a, b) for a in c.states for b in c.states
    )
    hyp = (_R(c, j, r, x) and _R(c, j, s, y) and _E(c, i, r, t) and _E(c, i, x, s) and _E(c, i, y, z)
           and _E(c, j, r, y) and _E(c, j, s, t) and _E(c, j, x, z))
    return guard and hyp and not _R(c, j, t, z)


def violates_interest_cardinality(c: Community, h: int, i: int, j: int, w_h, x_h, y_h, z_h, w_i, x_i, y_i, z_i) -> bool:
    supports = _supports(c, "interest")
    if j not in supports[h] or j not in supports[i]:
        return False
    match = all(_E(c, j, a, b) for a, b in ((w_h, w_i), (x_h, x_i), (y_h, y_i), (z_h, z_i)))
    others = all(
        _E(c, g, w_h, x_h) and _E(c, g, w_i, x_i) and _E(c, g, y_h, z_h) and _E(c, g, y_i, z_i)
        for g in c.ids if g != j
    )
    premises = _R(c, h, w_h, y_h) and _R(c, h, z_h, x_h) and _R(c, i, y_i, w_i)
    return match and others and premises and not _R(c, i, z_i, x_i)


def violates_preference_cardinality(c: Community, h: int, i: int, j: int, w_h, x_h, y_h, z_h, w_i, x_i, y_i, z_i) -> bool:
    supports = _supports(c, "preference")
    if j not in supports[h] or j not in supports[i]:
        return False
    match = all(_I(c, j, a, b) for a, b in ((w_h, w_i), (x_h, x_i), (y_h, y_i), (z_h, z_i)))
    fixed_h = all(_I(c, g, w_h, x_h) and _I(c, g, y_h, z_h) for g in c.ids if g not in (h, j))
    fixed_i = all(_I(c, g, w_i, x_i) and _I(c, g, y_i, z_i) for g in c.ids if g not in (i, j))
    own = _E(c, h, w_h, x_h) and _E(c, h, y_h, z_h) and _E(c, i, w_i, x_i) and _E(c, i, y_i, z_i)
    premises = _R(c, h, w_h, y_h) and _R(c, h, z_h, x_h) and _R(c, i, y_i, w_i)
    return match and fixed_h and fixed_i and own and premises and not _R(c, i, z_i, x_i)


def _no_pair(c: Community, pred) -> bool:
    return not any(pred(x, y) for x in c.states for y in c.states if x != y)


def recheck(c: Community, result: CheckResult, probes: Sequence[State] = ()) -> bool:
    """True iff the failing result's witness reproduces the violation when re-evaluated."""
    if result.holds or not result.witness:
        return False
    w = result.witness
    name = result.condition
    if name == BASED_ON_INTERESTS:
        return violates_based_on_interests(c, **w)
    if name == NONPATERNALISM:
        return violates_nonpaternalism(c, **w)
    if name == NONMALEVOLENCE:
        return violates_nonmalevolence(c, **w)
    if name == SEPARABILITY:
        return violates_separability(c, **w)
    if name == PRODUCT_STRUCTURE:
        return violates_product_structure(c, **w)
    if name == DOUBLE_CANCELLATION:
        return violates_double_cancellation(c, **w)
    if name == INTEREST_CARDINALITY:
        return violates_interest_cardinality(c, **w)
    if name == PREFERENCE_CARDINALITY:
        return violates_preference_cardinality(c, **w)
    domain = list(c.states) + [tuple(Fraction(v) for v in s) for s in probes]
    if name in (IDIOSYNCRATIC_INTEREST, IDIOSYNCRATIC_PREFERENCE):
        k = w["agent"]
        strict, eq = (_V, _E) if name == IDIOSYNCRATIC_INTEREST else (_P, _I)
        return not any(
            strict(c, k, x, y) and all(eq(c, g, x, y) for g in c.ids if g != k)
            for x in domain for y in domain
        )
    if name == UNAMBIGUOUS_IMPROVEMENT:
        group = w["agents"]
        return not any(all(_V(c, k, x, y) and _P(c, k, x, y) for k in group) for x in domain for y in domain)
    raise ValueError(f"unknown condition {name!r}")


CHECKERS: dict[str, Callable[..., CheckResult]] = {
    BASED_ON_INTERESTS: check_based_on_interests,
    NONPATERNALISM: check_nonpaternalism,
    SEPARABILITY: check_separability,
    PRODUCT_STRUCTURE: check_product_structure,
    IDIOSYNCRATIC_INTEREST: check_idiosyncratic_interest,
    IDIOSYNCRATIC_PREFERENCE: check_idiosyncratic_preference,
    UNAMBIGUOUS_IMPROVEMENT: check_unambiguous_improvement,
    NONMALEVOLENCE: check_nonmalevolence,
    DOUBLE_CANCELLATION: check_double_cancellation,
    INTEREST_CARDINALITY: check_interest_cardinality,
    PREFERENCE_CARDINALITY: check_preference_cardinality,
}
