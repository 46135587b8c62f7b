"""Write the three built-in fixtures and print their condition and relation reports.

Usage: python scripts/reproduce_examples.py [output_dir]
"""

import sys
from pathlib import Path

from liberal_succession import axioms
from liberal_succession.document import EXAMPLES, example_document, fmt
from liberal_succession.relations import coincidence_report


def main(out_dir: str = "fixtures") -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in EXAMPLES:
        doc = example_document(name)
        (out / f"{name}.json").write_text(doc.dumps(), encoding="utf-8")
        c = doc.community()
        print(f"== {name}: {c.n} agents, {len(c.states)} states")
        for cond, checker in axioms.CHECKERS.items():
            r = checker(c)
            tag = "holds" if r.holds else "fails"
            extra = "" if r.holds else "  " + ", ".join(f"{k}={fmt(v)}" for k, v in r.witness.items())
            print(f"  {cond:26s} {tag}{extra}")
        rep = coincidence_report(c)
        print(f"  pareto {rep.pareto_count}, liberal {rep.liberal_count}, divergent {len(rep.divergent)}")


if __name__ == "__main__":
    main(*sys.argv[1:])
