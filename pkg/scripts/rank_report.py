#!/usr/bin/env python3
"""Print graded ranks of the standard web state spaces for a range of N.

Usage: python scripts/rank_report.py [max_N]
"""

import sys

sys.path.insert(0, "src")

from foamlab.cli import laurent_text
from foamlab.statespace import (
    circle_presentation,
    gram_matrix,
    graded_rank,
    moy_check,
    theta_presentation,
    zipped_presentation,
)


def main() -> None:
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    print("circle ranks")
    for N in range(2, max_n + 1):
        for a in range(1, N):
            L = graded_rank(gram_matrix(circle_presentation(a, N)))
            print(f"  N={N} a={a}: {laurent_text(L)}")
    print("digon ranks (both readings)")
    for N in range(2, max_n + 1):
        good = graded_rank(gram_matrix(theta_presentation(1, 1, N)))
        bad = graded_rank(gram_matrix(zipped_presentation(1, 1, N)))
        print(f"  N={N}: {laurent_text(good)}  |  {laurent_text(bad)}")
    print("relation checks")
    from foamlab.errors import InputError

    for relation in ("circle", "digon", "bad_digon", "assoc", "square"):
        for N in range(2, max_n + 1):
            try:
                rep = moy_check(relation, N)
            except InputError as exc:
                print(f"  {relation:10s} N={N}: n/a ({exc})")
                continue
            status = "ok" if rep.ok else "FAIL"
            print(f"  {relation:10s} N={N}: {status}  {rep.detail or ''}")


if __name__ == "__main__":
    main()
