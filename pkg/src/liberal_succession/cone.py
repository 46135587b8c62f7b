"""Exact cone membership by phase-1 simplex, with Farkas certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class ConeCertificate:
    feasible: bool
    coefficients: tuple[Fraction, ...] | None = None  # one weight per generator
    separator: tuple[Fraction, ...] | None = None  # f with f.g <= 0 for all g and f.target > 0


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def verify_certificate(
    target: Sequence[Fraction], generators: Sequence[Sequence[Fraction]], cert: ConeCertificate
) -> bool:
    """Re-check a certificate exactly."""
    target = [Fraction(t) for t in target]
    if cert.feasible:
        w = cert.coefficients
        if w is None or len(w) != len(generators) or any(x < 0 for x in w):
            return False
        combo = [sum((wk * Fraction(g[i]) for wk, g in zip(w, generators)), Fraction(0)) for i in range(len(target))]
        return combo == target
    f = cert.separator
    if f is None or len(f) != len(target):
        return False
    return all(_dot(f, [Fraction(x) for x in g]) <= 0 for g in generators) and _dot(f, target) > 0


def cone_membership(
    target: Sequence[object], generators: Sequence[Sequence[object]]
) -> ConeCertificate:
    """Decide whether ``target`` is a nonnegative combination of ``generators``.

    Feasible answers carry the weights; infeasible ones a separating functional
    read off the optimal phase-1 dual. Bland's rule keeps the pivoting finite.
    """
    t = [Fraction(x) for x in target]
    gens = [[Fraction(x) for x in g] for g in generators]
    n, m = len(t), len(gens)
    if any(len(g) != n for g in gens):
        raise ValueError("all vectors must have the target's length")

    sign = [Fraction(-1) if ti < 0 else Fraction(1) for ti in t]
    # columns 0..m-1 are weights, m..m+n-1 artificials, last is the right-hand side
    rows = [
        [sign[i] * gens[k][i] for k in range(m)]
        + [Fraction(int(i == r)) for r in range(n)]
        + [sign[i] * t[i]]
        for i in range(n)
    ]
    basis = [m + i for i in range(n)]
    cost = [Fraction(0)] * m + [Fraction(1)] * n

    while True:
        duals = [sum((cost[basis[r]] * rows[r][m + i] for r in range(n)), Fraction(0)) for i in range(n)]
        entering = None
        for k in range(m + n):
            if k in basis:
                continue
            reduced = cost[k] - sum((duals[i] * (sign[i] * gens[k][i] if k < m else Fraction(int(k - m == i))) for i in range(n)), Fraction(0))
            if reduced < 0:
                entering = k
                break
        if entering is None:
            break
        leave = None
        best = None
        for r in range(n):
            a = rows[r][entering]
            if a > 0:
                ratio = rows[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:  # cannot happen: phase-1 objective is bounded below by 0
            raise RuntimeError("unbounded phase-1 problem")
        piv = rows[leave][entering]
        rows[leave] = [x / piv for x in rows[leave]]
        for r in range(n):
            if r != leave and rows[r][entering] != 0:
                f = rows[r][entering]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[leave])]
        basis[leave] = entering

    infeasibility = sum((rows[r][-1] for r in range(n) if basis[r] >= m), Fraction(0))
    if infeasibility == 0:
        weights = [Fraction(0)] * m
        for r in range(n):
            if basis[r] < m:
                weights[basis[r]] = rows[r][-1]
        cert = ConeCertificate(True, coefficients=tuple(weights))
    else:
        duals = [sum((cost[basis[r]] * rows[r][m + i] for r in range(n)), Fraction(0)) for i in range(n)]
        cert = ConeCertificate(False, separator=tuple(s * y for s, y in zip(sign, duals)))
    if not verify_certificate(t, gens, cert):
        raise AssertionError("cone certificate failed exact re-verification")
    return cert
