"""Affine-additive representations p = A v + kappa: synthesis, derived coefficients,
additive fitting, common-factor recovery and coincidence certification."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import axioms
from .axioms import CheckResult, ScanMode
from .cone import ConeCertificate, cone_membership
from .core import Community, StateGrid, AgentSpec, State, as_fraction
from .expr import Coord, Expr, affine, parse
from .linalg import SingularMatrixError, inverse, rank, solve
from .relations import CoincidenceReport, coincidence_report

LEMMA_SIGNS = "lemma-signs"
NONMALEVOLENCE_EQUIVALENCE = "nonmalevolence-equivalence"
COMMON_FACTOR = "common-factor"


class DegenerateCoefficient(ArithmeticError):
    """gamma_ii == 1, so the explicit form would divide by zero."""


class FitError(ValueError):
    """The additive least-squares system has no unique solution on this grid."""


@dataclass(frozen=True)
class AffineRepresentation:
    A: tuple[tuple[Fraction, ...], ...]
    kappa: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        A = tuple(tuple(as_fraction(x) for x in row) for row in self.A)
        kappa = tuple(as_fraction(x) for x in self.kappa)
        n = len(A)
        if n == 0 or any(len(row) != n for row in A):
            raise ValueError("A must be a nonempty square matrix")
        if len(kappa) != n:
            raise ValueError(f"kappa has length {len(kappa)}, expected {n}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "kappa", kappa)

    @classmethod
    def of(cls, A: Sequence[Sequence[object]], kappa: Sequence[object] | None = None) -> "AffineRepresentation":
        return cls(tuple(tuple(row) for row in A), tuple(kappa) if kappa is not None else (0,) * len(A))

    @property
    def n(self) -> int:
        return len(self.A)


@dataclass(frozen=True)
class DerivedCoefficients:
    B: tuple[tuple[Fraction, ...], ...]
    gamma: tuple[tuple[Fraction, ...], ...]
    delta: tuple[tuple[Fraction, ...], ...]
    mu: tuple[Fraction, ...]
    lam: tuple[Fraction, ...]


def projection_exprs(n: int) -> list[Expr]:
    """Interests v_i = x_i."""
    return [Coord(i) for i in range(1, n + 1)]


def synthesize_from_matrix(
    grid: StateGrid,
    v_exprs: Sequence[Expr | str] | None,
    A: Sequence[Sequence[object]],
    kappa: Sequence[object] | None = None,
    tolerance: object = 0,
) -> Community:
    """Community whose preferences are p_i = sum_j A[i][j] v_j + kappa_i exactly.

    ``v_exprs=None`` means coordinate projections.
    """
    rep = A if isinstance(A, AffineRepresentation) else AffineRepresentation.of(A, kappa)
    n = rep.n
    if v_exprs is None:
        v_exprs = projection_exprs(n)
    vs = [parse(v, grid.dimension) if isinstance(v, str) else v for v in v_exprs]
    if len(vs) != n:
        raise ValueError(f"{len(vs)} interest expressions for a {n}x{n} matrix")
    agents = tuple(AgentSpec(i + 1, vs[i], affine(rep.A[i], vs, rep.kappa[i])) for i in range(n))
    return Community(agents, grid, as_fraction(tolerance))


def derive_coefficients(rep: AffineRepresentation) -> DerivedCoefficients:
    """Explicit form p_i = delta_ii v_i + sum_{k != i} delta_ik p_k + mu_i.

    Raises SingularMatrixError for singular A and DegenerateCoefficient when some
    gamma_ii equals 1. The result is verified against A and kappa before returning.
    """
    A, kappa, n = rep.A, rep.kappa, rep.n
    B = inverse(A)
    gamma = [[sum((A[i][j] * B[j][k] for j in range(n) if j != i), Fraction(0)) for k in range(n)] for i in range(n)]
    lam = [kappa[i] - sum((gamma[i][k] * kappa[k] for k in range(n)), Fraction(0)) for i in range(n)]
    delta = [[Fraction(0)] * n for _ in range(n)]
    mu = []
    for i in range(n):
        denom = 1 - gamma[i][i]
        if denom == 0:
            raise DegenerateCoefficient(f"gamma_{i + 1}{i + 1} = 1")
        for k in range(n):
            delta[i][k] = (A[i][i] if k == i else gamma[i][k]) / denom
        mu.append(lam[i] / denom)
    coeffs = DerivedCoefficients(
        tuple(map(tuple, B)), tuple(map(tuple, gamma)), tuple(map(tuple, delta)), tuple(mu), tuple(lam)
    )
    if not back_substitution_identity(rep, coeffs):
        raise AssertionError("explicit coefficients fail back-substitution")
    return coeffs


def back_substitution_identity(rep: AffineRepresentation, coeffs: DerivedCoefficients) -> bool:
    """Check the explicit form as an identity of affine functions of v (coefficients and constants)."""
    A, kappa, d, n = rep.A, rep.kappa, coeffs.delta, rep.n
    for i in range(n):
        for j in range(n):
            lhs = (d[i][i] if i == j else 0) + sum((d[i][k] * A[k][j] for k in range(n) if k != i), Fraction(0))
            if lhs != A[i][j]:
                return False
        const = coeffs.mu[i] + sum((d[i][k] * kappa[k] for k in range(n) if k != i), Fraction(0))
        if const != kappa[i]:
            return False
    return True


def back_substitution_on_grid(c: Community, coeffs: DerivedCoefficients) -> tuple[State, int] | None:
    """First (state, agent) where the explicit form misses p on the grid, or None."""
    d = coeffs.delta
    n = c.n
    t = c.table
    for s, v, p in zip(t.states, t.v, t.p):
        for i in range(n):
            rhs = d[i][i] * v[i] + sum((d[i][k] * p[k] for k in range(n) if k != i), Fraction(0)) + coeffs.mu[i]
            if rhs != p[i]:
                return s, i + 1
    return None


def lemma_sign_checks(coeffs: DerivedCoefficients) -> CheckResult:
    """Diagonal delta strictly positive, off-diagonal delta nonnegative."""
    d = coeffs.delta
    n = len(d)
    for i in range(n):
        for k in range(n):
            bad = d[i][k] <= 0 if i == k else d[i][k] < 0
            if bad:
                return CheckResult(LEMMA_SIGNS, False, {"i": i + 1, "k": k + 1, "delta": d[i][k]}, n * i + k + 1)
    return CheckResult(LEMMA_SIGNS, True, {}, n * n)


# -- certification ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeQuery:
    coalition: frozenset[int]
    outsider: int
    certificate: ConeCertificate


@dataclass
class Theorem1Report:
    status: str  # certified | preconditions-failed | refused-signs | refused-cone | divergent
    preconditions: list[CheckResult] = field(default_factory=list)
    coefficients: DerivedCoefficients | None = None
    signs: CheckResult | None = None
    cone_queries: list[ConeQuery] = field(default_factory=list)
    coincidence: CoincidenceReport | None = None
    error: str | None = None

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    @property
    def cones_feasible(self) -> bool:
        return all(q.certificate.feasible for q in self.cone_queries)

    @property
    def consistent(self) -> bool:
        """Cone feasibility for every coalition forces coincidence; a divergence with all cones feasible is a bug."""
        if self.coincidence is None or not self.cone_queries:
            return True
        return not (self.cones_feasible and not self.coincidence.coincide)


def coalition_cone_queries(rep: AffineRepresentation) -> list[ConeQuery]:
    """For each proper coalition J and outsider k: is p_k in the cone of {v_i : i not in J} and {p_j : j in J}?

    Vectors are coefficient vectors in the v-basis; constants are dropped.
    """
    n = rep.n
    unit = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    out = []
    for size in range(n):
        for J in itertools.combinations(range(n), size):
            gens = [unit[i] for i in range(n) if i not in J] + [list(rep.A[j]) for j in J]
            for k in range(n):
                if k in J:
                    continue
                cert = cone_membership(rep.A[k], gens)
                out.append(ConeQuery(frozenset(j + 1 for j in J), k + 1, cert))
    return out


def idiosyncratic_probes(grid: StateGrid, rep: AffineRepresentation, c: Community) -> list[State]:
    """Pairs of in-box states between which only p_i moves, one pair per agent.

    Only available when interests are the coordinate projections: the move
    direction is column i of A^{-1}, scaled to fit around the box centre.
    """
    n = rep.n
    if grid.dimension < n or any(a.v_expr != Coord(a.id) for a in c.agents):
        return []
    try:
        B = inverse(rep.A)
    except SingularMatrixError:
        return []
    centre = [(axis[0] + axis[-1]) / 2 for axis in grid.axes]
    half = [(axis[-1] - axis[0]) / 2 for axis in grid.axes]
    probes: list[State] = []
    for i in range(n):
        direction = [B[k][i] for k in range(n)]
        scales = [half[k] / abs(direction[k]) for k in range(n) if direction[k] != 0]
        step = min(scales)
        if step == 0:
            continue
        upper = tuple(centre[k] + step * direction[k] if k < n else centre[k] for k in range(grid.dimension))
        probes.extend([tuple(centre), upper])
    return probes


def theorem1_certify(
    c: Community,
    rep: AffineRepresentation,
    mode: ScanMode = axioms.EXHAUSTIVE,
    budget: int = 10**7,
) -> Theorem1Report:
    """Preconditions, then explicit-coefficient signs, coalition cones and the coincidence scan."""
    probes = idiosyncratic_probes(c.grid, rep, c)
    pre = [
        axioms.check_product_structure(c, mode),
        axioms.check_idiosyncratic_interest(c, mode),
        axioms.check_idiosyncratic_preference(c, mode, probes=probes),
        axioms.check_unambiguous_improvement(c, mode),
    ]
    report = Theorem1Report("preconditions-failed", pre)
    if not all(r.holds for r in pre):
        return report
    try:
        coeffs = derive_coefficients(rep)
    except (SingularMatrixError, DegenerateCoefficient) as exc:
        report.status, report.error = "refused-signs", str(exc)
        return report
    report.coefficients = coeffs
    report.signs = lemma_sign_checks(coeffs)
    report.cone_queries = coalition_cone_queries(rep)
    report.coincidence = coincidence_report(c, budget=budget)
    if not report.signs.holds:
        report.status = "refused-signs"
    elif not report.cones_feasible:
        report.status = "refused-cone"
    elif not report.coincidence.coincide:
        report.status = "divergent"
    else:
        report.status = "certified"
    return report


def nonmalevolence_equivalence(rep: AffineRepresentation, grid: StateGrid, mode: ScanMode = axioms.EXHAUSTIVE) -> CheckResult:
    """Compare 'every alpha_ij >= 0' with the grid scan of nonmalevolence on the synthesized community."""
    negative = next(
        ((i + 1, j + 1) for i in range(rep.n) for j in range(rep.n) if rep.A[i][j] < 0), None
    )
    c = synthesize_from_matrix(grid, None, rep)
    scan = axioms.check_nonmalevolence(c, mode)
    agree = (negative is None) == scan.holds
    witness = {} if agree else {"negative_alpha": negative, "grid_witness": scan.witness}
    return CheckResult(
        NONMALEVOLENCE_EQUIVALENCE,
        agree,
        witness,
        scan.samples_examined,
        scan.exhaustive,
        details={"alpha_nonnegative": negative is None, "negative_alpha": negative,
                 "grid_holds": scan.holds, "grid_witness": scan.witness},
    )


def interest_image_full_dimensional(c: Community) -> bool:
    """Single-axis moves from the lowest corner give n independent interest differences."""
    base = tuple(axis[0] for axis in c.grid.axes)
    v0 = c.interest(base)
    diffs = []
    for k, axis in enumerate(c.grid.axes):
        if len(axis) < 2:
            continue
        moved = base[:k] + (axis[1],) + base[k + 1:]
        diffs.append([a - b for a, b in zip(c.interest(moved), v0)])
    return rank(diffs) == c.n if diffs else False


# -- additive fitting -----------------------------------------------------------------------


@dataclass(frozen=True)
class AdditiveFit:
    agent: int
    levels: tuple[tuple[Fraction, ...], ...]  # sorted distinct v_j values, per factor j
    tables: tuple[tuple[Fraction, ...], ...]  # u_ij at each level; first level anchored at 0
    offset: Fraction
    residual: Fraction  # max |p_i - fit| over the grid
    sum_squares: Fraction

    @property
    def support(self) -> frozenset[int]:
        return frozenset(j + 1 for j, tab in enumerate(self.tables) if any(tab))

    def value(self, v: Sequence[Fraction]) -> Fraction:
        total = self.offset
        for j, tab in enumerate(self.tables):
            total += tab[self.levels[j].index(v[j])]
        return total


def fit_additive(c: Community) -> list[AdditiveFit]:
    """Exact least-squares fit of each p_i by a sum of per-interest-level tables."""
    t = c.table
    n = c.n
    levels = [tuple(sorted({v[j] for v in t.v})) for j in range(n)]
    # unknowns: offset, then levels[j][1:] for each j
    column_of: dict[tuple[int, int], int] = {}
    for j in range(n):
        for l in range(1, len(levels[j])):
            column_of[(j, l)] = len(column_of) + 1
    width = len(column_of) + 1
    rows = []
    for v in t.v:
        cols = [0] + [column_of[(j, levels[j].index(v[j]))] for j in range(n) if levels[j].index(v[j]) > 0]
        rows.append(cols)
    gram = [[Fraction(0)] * width for _ in range(width)]
    for cols in rows:
        for a in cols:
            for b in cols:
                gram[a][b] += 1
    fits = []
    for i in range(n):
        rhs = [Fraction(0)] * width
        for cols, p in zip(rows, t.p):
            for a in cols:
                rhs[a] += p[i]
        try:
            theta = solve(gram, rhs)
        except SingularMatrixError as exc:
            raise FitError("additive design is rank deficient on this grid") from exc
        tables = tuple(
            tuple(Fraction(0) if l == 0 else theta[column_of[(j, l)]] for l in range(len(levels[j])))
            for j in range(n)
        )
        errors = [p[i] - sum((theta[a] for a in cols), Fraction(0)) for cols, p in zip(rows, t.p)]
        fits.append(AdditiveFit(i + 1, tuple(levels), tables, theta[0],
                                max(abs(e) for e in errors), sum((e * e for e in errors), Fraction(0))))
    return fits


def affine_relation(base: Sequence[Fraction], image: Sequence[Fraction]) -> tuple[Fraction, Fraction] | tuple[int, int, int]:
    """(sigma, tau) with image = sigma * base + tau, or a level triple where no such pair fits.

    Returns a 2-tuple of Fractions on success and a 3-tuple of level indices on failure.
    """
    base = [Fraction(b) for b in base]
    image = [Fraction(v) for v in image]
    if len(base) != len(image):
        raise ValueError("tables must have equal length")
    pivot = next((k for k in range(1, len(base)) if base[k] != base[0]), None)
    if pivot is None:
        if all(v == image[0] for v in image):
            return Fraction(0), image[0] if image else Fraction(0)
        bad = next(k for k in range(len(image)) if image[k] != image[0])
        return (0, bad, bad)
    sigma = (image[pivot] - image[0]) / (base[pivot] - base[0])
    tau = image[0] - sigma * base[0]
    for k in range(len(base)):
        if image[k] != sigma * base[k] + tau:
            return (0, pivot, k)
    return sigma, tau


def common_factor_check(fit_h: AdditiveFit, fit_i: AdditiveFit, j: int) -> CheckResult:
    """Is h's table for factor j an affine image of i's? Details carry sigma and tau."""
    if fit_h.residual != 0 or fit_i.residual != 0:
        raise ValueError("common-factor check needs exact (zero-residual) fits")
    if j not in fit_h.support or j not in fit_i.support:
        raise ValueError(f"factor {j} is not in both supports")
    if fit_h.levels[j - 1] != fit_i.levels[j - 1]:
        raise ValueError("fits disagree on the level set of factor j")
    rel = affine_relation(fit_i.tables[j - 1], fit_h.tables[j - 1])
    tag = {"h": fit_h.agent, "i": fit_i.agent, "j": j}
    if len(rel) == 3:
        levels = [fit_h.levels[j - 1][k] for k in rel]
        return CheckResult(COMMON_FACTOR, False, {**tag, "levels": tuple(levels)}, len(fit_h.levels[j - 1]))
    return CheckResult(COMMON_FACTOR, True, {}, len(fit_h.levels[j - 1]),
                       details={**tag, "sigma": rel[0], "tau": rel[1]})


@dataclass(frozen=True)
class CommonFactorRepresentation:
    representation: AffineRepresentation
    iota: tuple[int | None, ...]  # first agent whose support contains j
    levels: tuple[tuple[Fraction, ...], ...]
    factors: tuple[tuple[Fraction, ...], ...]  # new interest tables v_j := u_{iota(j) j}
    residual: Fraction

    def factor_values(self, v: Sequence[Fraction]) -> list[Fraction]:
        return [self.factors[j][self.levels[j].index(v[j])] for j in range(len(self.factors))]


class CommonFactorError(ValueError):
    def __init__(self, h: int, i: int, j: int):
        super().__init__(f"common-factor check failed for h={h}, i={i}, j={j}")
        self.h, self.i, self.j = h, i, j


def canonical_common_factors(fits: Sequence[AdditiveFit], c: Community | None = None) -> CommonFactorRepresentation:
    """Rebuild one affine representation from per-agent additive fits.

    Factor j is taken from the first agent whose support contains it; every other
    agent's table for j must be an affine image of that one. When ``c`` is given
    the result is checked against p on the grid and the maximal error recorded.
    """
    n = len(fits)
    levels = fits[0].levels
    iota: list[int | None] = []
    factors = []
    for j in range(1, n + 1):
        owner = next((f.agent for f in fits if j in f.support), None)
        iota.append(owner)
        factors.append(fits[owner - 1].tables[j - 1] if owner else tuple(Fraction(0) for _ in levels[j - 1]))
    A = [[Fraction(0)] * n for _ in range(n)]
    kappa = [f.offset for f in fits]
    for h, fit_h in enumerate(fits):
        for j in range(1, n + 1):
            if j not in fit_h.support:
                continue
            owner = iota[j - 1]
            if owner == fit_h.agent:
                A[h][j - 1] = Fraction(1)
                continue
            result = common_factor_check(fit_h, fits[owner - 1], j)
            if not result.holds:
                raise CommonFactorError(fit_h.agent, owner, j)
            A[h][j - 1] = result.details["sigma"]
            kappa[h] += result.details["tau"]
    rep = AffineRepresentation.of(A, kappa)
    out = CommonFactorRepresentation(rep, tuple(iota), levels, tuple(factors), Fraction(0))
    if c is not None:
        worst = Fraction(0)
        for v, p in zip(c.table.v, c.table.p):
            u = out.factor_values(v)
            for h in range(n):
                worst = max(worst, abs(p[h] - sum((A[h][j] * u[j] for j in range(n)), Fraction(0)) - kappa[h]))
        out = CommonFactorRepresentation(rep, tuple(iota), levels, tuple(factors), worst)
    return out


# -- seeded generators ----------------------------------------------------------------------


def random_dominant_matrix(rng: random.Random, n: int, max_off: int = 3) -> AffineRepresentation:
    """Positive diagonal, nonnegative off-diagonal, strictly row-diagonally dominant; random kappa."""
    A = []
    for i in range(n):
        row = [Fraction(rng.randint(0, max_off)) for _ in range(n)]
        row[i] = sum(row[k] for k in range(n) if k != i) + rng.randint(1, max_off)
        A.append(row)
    kappa = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
    return AffineRepresentation.of(A, kappa)


def random_rational(rng: random.Random, bound: int = 3, max_den: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound * max_den, bound * max_den), rng.randint(1, max_den))


def random_nonsingular_matrix(rng: random.Random, n: int) -> AffineRepresentation:
    while True:
        A = [[random_rational(rng) for _ in range(n)] for _ in range(n)]
        if rank(A) == n:
            return AffineRepresentation.of(A, [random_rational(rng) for _ in range(n)])


def random_cone_query(rng: random.Random, max_dim: int = 3, max_gens: int = 4, bound: int = 3):
    n = rng.randint(1, max_dim)
    g = rng.randint(0, max_gens)
    target = [Fraction(rng.randint(-bound, bound)) for _ in range(n)]
    gens = [[Fraction(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(g)]
    return target, gens


__all__ = [
    "AffineRepresentation", "DerivedCoefficients", "AdditiveFit", "ConeQuery", "Theorem1Report",
    "CommonFactorRepresentation", "CommonFactorError", "DegenerateCoefficient", "FitError",
    "synthesize_from_matrix", "derive_coefficients", "back_substitution_identity", "back_substitution_on_grid",
    "lemma_sign_checks", "coalition_cone_queries", "idiosyncratic_probes", "theorem1_certify",
    "nonmalevolence_equivalence", "interest_image_full_dimensional", "fit_additive", "affine_relation",
    "common_factor_check", "canonical_common_factors", "random_dominant_matrix", "random_nonsingular_matrix",
    "random_cone_query", "projection_exprs",
]
