#!/usr/bin/env python3
"""Exact linear algebra: canonical echelon forms and the subspace lattice.

Everything below is computed in exact arithmetic — Fractions over the
rationals, canonical residues over a prime field — so every printed
equality is a real equality, not a tolerance.
"""

from fractions import Fraction

from prolim.fields import QQ, GF
from prolim.linalg import (Matrix, Subspace, kernel_basis, matrix_image,
                           matrix_inverse, rref, solve_particular)


def rule(title):
    print()
    print(title)
    print("-" * len(title))


def show_matrix(m, label):
    print(f"{label}:")
    for row in m.data:
        print("   ", "  ".join(str(x) for x in row))


def main():
    rule("reduced echelon form over Q")
    m = Matrix(QQ, ((1, 2, 3), (2, 4, 8), (1, 2, 5)))
    canon, rank, pivots = rref(m)
    show_matrix(m, "input")
    show_matrix(canon, "canonical form")
    print(f"rank {rank}, pivot columns {pivots}")

    rule("kernels and particular solutions")
    ker = kernel_basis(m)
    print("kernel:", ker)
    show_matrix(ker.basis, "kernel basis")
    b = (1, 2, 1)
    x = solve_particular(m, b)
    print(f"one solution of m x = {b}:", x)
    print("residual is exactly zero:",
          all(sum(r * s for r, s in zip(row, x)) == bx
              for row, bx in zip(m.data, b)))

    rule("the same, over F_5")
    m5 = Matrix(GF(5), ((1, 2, 3), (2, 4, 8), (1, 2, 5)))
    canon5, rank5, _ = rref(m5)
    show_matrix(canon5, "canonical form mod 5")
    print("rank over Q:", rank, " rank over F_5:", rank5)

    rule("subspaces are canonical data")
    # two different spanning sets for the same plane give the same object
    a = Subspace.from_spanning(QQ, 3, [(1, 0, 1), (0, 1, 1)])
    b = Subspace.from_spanning(QQ, 3, [(1, 1, 2), (1, -1, 0)])
    print("span{(1,0,1),(0,1,1)} == span{(1,1,2),(1,-1,0)}:", a == b)
    line = Subspace.from_spanning(QQ, 3, [(2, 2, 4)])
    print("their intersection with x+y=z is the whole plane:",
          (a & a) == a)
    print("the line (1,1,2)Q sits inside:", a.contains(line))
    print("sum with the z-axis fills the space:",
          (a + Subspace.from_spanning(QQ, 3, [(0, 0, 1)])).dim == 3)

    rule("inverse, exactly")
    hilbert = Matrix(QQ, tuple(tuple(Fraction(1, r + c + 1) for c in range(4))
                               for r in range(4)))
    inv = matrix_inverse(hilbert)
    prod = hilbert @ inv
    print("4x4 Hilbert matrix times its inverse is the identity:",
          prod == Matrix.identity(QQ, 4))
    print("largest inverse entry:", max(max(abs(x) for x in row)
                                        for row in inv.data))

    rule("column spaces")
    img = matrix_image(m)
    print("image of the first example:", img)
    print("(1,2,1) lies in it:", img.contains_vector((1, 2, 1)))
    print("(1,0,0) does not:", not img.contains_vector((1, 0, 0)))


if __name__ == "__main__":
    main()
