"""Command line: check conditions, compare succession relations, certify representations.

Exit codes: 0 everything selected holds, 1 a check failed (witness printed),
2 input error, 3 work budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Sequence

from . import axioms
from .core import BudgetExceeded
from .document import (
    EXAMPLES,
    DocumentError,
    document_for,
    example_document,
    fmt,
    jsonable,
    load_document,
    parse_state,
)
from .expr import EvaluationError, ExprSyntaxError
from .linalg import SingularMatrixError, format_matrix
from .relations import (
    DEFAULT_BUDGET,
    coincidence_report,
    liberal_successor,
    liberal_successor_permissive,
    pareto_superior,
)
from .representation import (
    DegenerateCoefficient,
    derive_coefficients,
    lemma_sign_checks,
    random_dominant_matrix,
    synthesize_from_matrix,
    theorem1_certify,
)
from .core import StateGrid

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _emit(args, text_lines: list[str], payload: dict) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _result_payload(r: axioms.CheckResult) -> dict:
    return {"condition": r.condition, "holds": r.holds, "vacuous": r.vacuous, "exhaustive": r.exhaustive,
            "seed": r.seed, "samples_examined": r.samples_examined, "witness": r.witness, "example": r.example}


def _result_lines(r: axioms.CheckResult) -> list[str]:
    verdict = "holds" if r.holds else "FAILS"
    if r.vacuous:
        verdict += " (vacuously)"
    scope = "exhaustive" if r.exhaustive else f"sampled, seed {r.seed}"
    lines = [f"{r.condition}: {verdict} [{scope}, {r.samples_examined} cases]"]
    for key, value in r.witness.items():
        lines.append(f"  {key} = {fmt(value)}")
    return lines


def cmd_check(args) -> int:
    c = load_document(args.file).community()
    names = list(axioms.CHECKERS) if args.axioms == "all" else [a.strip() for a in args.axioms.split(",")]
    unknown = [n for n in names if n not in axioms.CHECKERS]
    if unknown:
        raise DocumentError(f"unknown condition(s) {unknown}; known: {', '.join(axioms.CHECKERS)}")
    if args.mode == "sampled":
        mode = axioms.ScanMode.sampled(args.samples, args.seed, args.budget)
    else:
        mode = axioms.ScanMode(True, args.samples, None, args.budget)
    results = [axioms.CHECKERS[n](c, mode) for n in names]
    lines = [line for r in results for line in _result_lines(r)]
    _emit(args, lines, {"results": [_result_payload(r) for r in results]})
    return EXIT_OK if all(r.holds for r in results) else EXIT_FAIL


def _witness_text(w) -> str:
    if not w.holds:
        return "no"
    return f"yes (J={fmt(w.coalition)}, strict agent {w.strict_agent})"


def cmd_relations(args) -> int:
    c = load_document(args.file).community()
    if args.pair:
        left, _, right = args.pair.partition("|")
        x, y = parse_state(left), parse_state(right)
        for s in (x, y):
            if not c.grid.contains(s):
                raise DocumentError(f"state {fmt(s)} is not on the grid")
        par, lib, per = pareto_superior(c, x, y), liberal_successor(c, x, y), liberal_successor_permissive(c, x, y)
        lines = [f"x = {fmt(x)}, y = {fmt(y)}", f"pareto: {_witness_text(par)}",
                 f"liberal: {_witness_text(lib)}", f"permissive: {_witness_text(per)}"]
        payload = {name: {"holds": w.holds, "coalition": w.coalition, "strict_agent": w.strict_agent}
                   for name, w in (("pareto", par), ("liberal", lib), ("permissive", per))}
        _emit(args, lines, payload)
        return EXIT_OK
    report = coincidence_report(c, budget=args.budget)
    lines = [f"ordered pairs: {report.pairs_examined}", f"pareto pairs: {report.pareto_count}",
             f"liberal pairs: {report.liberal_count}", f"permissive pairs: {report.permissive_count}",
             f"divergent pairs: {len(report.divergent)}"]
    for d in report.divergent[: args.show]:
        lines.append(f"  {fmt(d.x)} over {fmt(d.y)}: liberal via J={fmt(d.liberal.coalition)}")
    _emit(args, lines, {
        "pairs": report.pairs_examined, "pareto": report.pareto_count, "liberal": report.liberal_count,
        "permissive": report.permissive_count,
        "divergent": [{"x": d.x, "y": d.y, "coalition": d.liberal.coalition} for d in report.divergent],
    })
    return EXIT_OK if report.coincide else EXIT_FAIL


def _certify_lines(rep) -> tuple[list[str], dict]:
    lines = [f"certification: {rep.status}"]
    payload: dict = {"status": rep.status}
    failed = [r for r in rep.preconditions if not r.holds]
    for r in failed:
        lines.extend("  precondition " + line for line in _result_lines(r))
    payload["preconditions"] = [_result_payload(r) for r in rep.preconditions]
    if rep.error:
        lines.append(f"  {rep.error}")
        payload["error"] = rep.error
    if rep.cone_queries:
        infeasible = [q for q in rep.cone_queries if not q.certificate.feasible]
        lines.append(f"  cone queries: {len(rep.cone_queries)}, infeasible: {len(infeasible)}")
        for q in infeasible:
            lines.append(f"    p_{q.outsider} outside cone for J={fmt(q.coalition)}; separator {fmt(q.certificate.separator)}")
        payload["cones"] = [{"coalition": q.coalition, "outsider": q.outsider, "feasible": q.certificate.feasible,
                             "weights": q.certificate.coefficients, "separator": q.certificate.separator}
                            for q in rep.cone_queries]
    if rep.coincidence is not None:
        lines.append(f"  divergent pairs: {len(rep.coincidence.divergent)}")
        payload["divergent"] = len(rep.coincidence.divergent)
    return lines, payload


def cmd_repr(args) -> int:
    doc = load_document(args.file)
    rep = doc.representation()
    lines = ["A =", format_matrix(rep.A), f"kappa = {fmt(rep.kappa)}"]
    payload: dict = {"A": rep.A, "kappa": rep.kappa}
    try:
        coeffs = derive_coefficients(rep)
    except (SingularMatrixError, DegenerateCoefficient) as exc:
        lines.append(f"explicit coefficients unavailable: {exc}")
        payload["error"] = str(exc)
        _emit(args, lines, payload)
        return EXIT_FAIL
    signs = lemma_sign_checks(coeffs)
    lines += ["delta =", format_matrix(coeffs.delta), f"mu = {fmt(coeffs.mu)}"]
    lines += _result_lines(signs)
    payload.update(delta=coeffs.delta, mu=coeffs.mu, signs=_result_payload(signs))
    ok = signs.holds
    if args.certify:
        report = theorem1_certify(doc.community(), rep)
        more, cert = _certify_lines(report)
        lines += more
        payload["certification"] = cert
        ok = report.certified
    _emit(args, lines, payload)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_random(args) -> int:
    rng = random.Random(args.seed)
    grid = StateGrid.uniform(range(args.levels), args.agents)
    tally: dict[str, int] = {}
    lines = []
    for trial in range(args.trials):
        rep = random_dominant_matrix(rng, args.agents)
        c = synthesize_from_matrix(grid, None, rep)
        report = theorem1_certify(c, rep)
        tally[report.status] = tally.get(report.status, 0) + 1
        if args.verbose:
            lines.append(f"trial {trial}: {report.status} A={fmt(rep.A)} kappa={fmt(rep.kappa)}")
    certified = tally.get("certified", 0)
    lines.append(f"{certified}/{args.trials} certified")
    lines += [f"  {status}: {count}" for status, count in sorted(tally.items())]
    _emit(args, lines, {"trials": args.trials, "seed": args.seed, "outcomes": tally})
    return EXIT_OK if certified == args.trials else EXIT_FAIL


def cmd_example(args) -> int:
    doc = example_document(args.name, args.levels)
    text = doc.dumps()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liberal-succession", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--budget", type=int, default=axioms.DEFAULT_BUDGET)

    p = sub.add_parser("check", help="run condition checkers")
    p.add_argument("file", help="community JSON path or example:<name>")
    p.add_argument("--axioms", default="all", help="comma-separated condition names, or 'all'")
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=axioms.DEFAULT_SAMPLES)
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("relations", help="pareto and liberal succession")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--pair", help='two states as "(a,b)|(c,d)"')
    group.add_argument("--all", action="store_true", help="coincidence report over all ordered pairs")
    p.add_argument("--show", type=int, default=10, help="divergent pairs to list")
    common(p)
    p.set_defaults(func=cmd_relations, budget=DEFAULT_BUDGET)

    p = sub.add_parser("repr", help="explicit coefficients and certification for a matrix block")
    p.add_argument("file")
    p.add_argument("--certify", action="store_true")
    common(p)
    p.set_defaults(func=cmd_repr)

    p = sub.add_parser("random", help="certify seeded random dominant matrices")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--agents", type=int, default=3)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--verbose", action="store_true")
    common(p)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("example", help="write a built-in community document")
    p.add_argument("name", choices=EXAMPLES)
    p.add_argument("--levels", type=int, default=None, help="axis levels (sec-c, sec-f)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_example, format="text")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DocumentError, ExprSyntaxError, EvaluationError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
