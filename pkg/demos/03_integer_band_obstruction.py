#!/usr/bin/env python3
"""The band system p_k - 2 p_{k+1} = q_k: a tale of two scalar rings.

Over the rationals, solvability at every finite level is the whole story:
the solver emits a consistent prefix of a global solution at any depth you
ask for.  Over the integers the same system is solvable at every level too
— but the solutions at deeper levels are forced to run away to infinity,
so no single integer sequence works at all levels at once.  The minimal
first coordinate grows like (1/3)*2^i, and the table below prints it.
"""

from fractions import Fraction

from prolim.fields import QQ
from prolim.closure import verify_certificate
from prolim.counterexamples import (IntBandSystem, example1_min_norm,
                                    example1_over_field,
                                    example1_per_level_solvable,
                                    example1_towermap)
from prolim.towers import reindex_cofinal


def main():
    depth = 24
    sys1 = IntBandSystem.alternating(depth)
    print("target: q = (1, 0, 1, 0, ...) to depth", depth)
    print()
    print("  i   min |p_1|   2^i/3      ratio")
    for i in range(1, depth + 1):
        a = example1_min_norm(sys1, i)
        ref = Fraction(2 ** i, 3)
        print(f" {i:3}   {a:9}   {str(ref):>10}   {float(a / ref):.4f}")

    print()
    solvable, witness = example1_per_level_solvable(sys1, depth)
    print(f"level-{depth} system solvable over Z:", solvable)
    print("witness head:", witness[:6], "...")
    print("(every level solves; the witnesses just refuse to agree)")

    print()
    print("over Q instead:")
    cert = example1_over_field(IntBandSystem.alternating(40), 40)
    print("  certificate to depth 40, all checks pass:", cert.all_checks_pass())
    print("  confirmed (not depth-conditional):", not cert.depth_conditional)
    tmap = reindex_cofinal(example1_towermap(QQ))
    ok, failures = verify_certificate(tmap, cert)
    print("  independent re-verification:", ok, failures)
    v = cert.v[-1]
    print("  depth-40 lift starts", tuple(str(x) for x in v[:4]))
    print("  and indeed p_1 - 2 p_2 =", v[0] - 2 * v[1])


if __name__ == "__main__":
    main()
