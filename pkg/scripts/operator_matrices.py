#!/usr/bin/env python3
"""Print the sl2 and differential matrices on thin-circle state spaces.

Usage: python scripts/operator_matrices.py [N] [p]
"""

import sys
from fractions import Fraction

sys.path.insert(0, "src")

from foamlab.actions import ActionParams
from foamlab.polyring import GF, QQ, WittSequence
from foamlab.statespace import (
    circle_presentation,
    induced_action,
    mat_is_zero,
    operator_commutator,
    operator_power,
    mat_sub,
)


def show(name, matrix):
    print(f"{name}:")
    for row in matrix:
        print("  [" + ", ".join(str(e) for e in row) + "]")


def main() -> None:
    N = int(sys.argv[1]) if len(sys.argv) > 1 else 2
    p = int(sys.argv[2]) if len(sys.argv) > 2 else 3

    pack = ActionParams(
        ring=QQ,
        N=N,
        s=Fraction(1, 4),
        nu1=WittSequence.linear(QQ, Fraction(1, 2)),
        nu2=WittSequence.linear(QQ, Fraction(-1, 3)),
        nu3=WittSequence.linear(QQ, Fraction(1, 5)),
        t1=Fraction(2, 3),
        t2=Fraction(-1, 2),
    )
    pres = circle_presentation(1, N, QQ)
    E = induced_action("e", pack, pres)
    H = induced_action("h", pack, pres)
    F = induced_action("f", pack, pres)
    print(f"sl2 on the thin circle, N={N} (equivariant base)")
    show("e", E.matrix)
    show("h", H.matrix)
    show("f", F.matrix)
    print("  [e,f] == h :", mat_is_zero(mat_sub(operator_commutator(E, F), H.matrix)))

    dpack = ActionParams(ring=GF(p), N=N, t1=1, t2=2, t3=0)
    for base in ("equivariant", "phi0"):
        act = induced_action("d", dpack, circle_presentation(1, N, GF(p), base))
        print(f"differential over F{p}, {base} base")
        show("d", act.matrix)
        print(f"  d^{p} == 0 :", mat_is_zero(operator_power(act, p)))


if __name__ == "__main__":
    main()
