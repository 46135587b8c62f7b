"""Seeded trials on nonnegative, strictly diagonally dominant matrices.

For each trial prints the certification status and, when the sign check
refuses, whether the grid actually has liberal successions that are not
Pareto improvements. Usage: python scripts/dominant_trials.py [trials] [seed]
"""

import random
import sys
from collections import Counter

from liberal_succession.core import StateGrid
from liberal_succession.document import fmt
from liberal_succession.representation import random_dominant_matrix, synthesize_from_matrix, theorem1_certify


def main(trials: int = 50, seed: int = 2024) -> None:
    rng = random.Random(seed)
    grid = StateGrid.uniform([0, 1, 2], 3)
    tally: Counter = Counter()
    for t in range(trials):
        rep = random_dominant_matrix(rng, 3)
        report = theorem1_certify(synthesize_from_matrix(grid, None, rep), rep)
        divergent = len(report.coincidence.divergent) if report.coincidence else 0
        tally[report.status, divergent > 0] += 1
        line = f"{t:3d} {report.status:14s} divergent={divergent:2d} A={fmt(rep.A)}"
        if report.coincidence and report.coincidence.divergent:
            d = report.coincidence.divergent[0]
            line += f"  e.g. {fmt(d.x)} over {fmt(d.y)} via J={fmt(d.liberal.coalition)}"
        print(line)
    for (status, diverges), count in sorted(tally.items()):
        print(f"{status} ({'with' if diverges else 'no'} divergence): {count}")


if __name__ == "__main__":
    main(*map(int, sys.argv[1:]))
