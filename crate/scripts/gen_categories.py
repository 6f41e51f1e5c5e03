#!/usr/bin/env python3
"""Writes the shipped category data files.

All structure scalars here are roots of unity, so they are tracked as
exponents of z modulo the root order and printed at the end.
"""
import itertools
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "categories")


def fmt(e, n):
    e %= n
    if e == 0:
        return "1"
    if 2 * e == n:
        return "-1"
    return f"z^{e}"


def write(name, n, G, Gmul, L, Lmul, grade, act, dim, A, A0, P, P0, B, rank, comment):
    lines = [f"# {comment}", "[scalars]", f"root_order = {n}", ""]
    for title, elems, mul in (("group", G, Gmul), ("labels", L, Lmul)):
        lines.append(f"[{title}]")
        lines.append("elements = " + " ".join(elems))
        for a in elems:
            lines.append(f"{a} = " + " ".join(mul(a, b) for b in elems))
        lines.append("")
    lines.append("[grade]")
    lines += [f"{x} = {grade(x)}" for x in L]
    lines += ["", "[dim]"]
    lines += [f"{x} = {fmt(dim(x), n)}" for x in L]
    lines += ["", "[crossing]"]
    for a in G:
        for x in L:
            if act(a, x) != x:
                lines.append(f"act {a} {x} = {act(a, x)}")
    for a in G:
        for x in L:
            for y in L:
                if A(a, x, y) % n:
                    lines.append(f"phiA2 {a} {x} {y} = {fmt(A(a, x, y), n)}")
    for a in G:
        if A0(a) % n:
            lines.append(f"phiA0 {a} = {fmt(A0(a), n)}")
    for a in G:
        for b in G:
            for x in L:
                if P(a, b, x) % n:
                    lines.append(f"phi2 {a} {b} {x} = {fmt(P(a, b, x), n)}")
    for x in L:
        if P0(x) % n:
            lines.append(f"phi0 {x} = {fmt(P0(x), n)}")
    lines += ["", "[braiding]"]
    for x in L:
        for y in L:
            lines.append(f"{x} {y} = {fmt(B(x, y), n)}")
    lines += ["", "[rank]", f"D = {rank}", ""]
    with open(os.path.join(OUT, name), "w") as fh:
        fh.write("\n".join(lines))


def zero(*_):
    return 0


def cyc(k):
    names = [str(i) for i in range(k)]
    return names, (lambda a, b: str((int(a) + int(b)) % k))


def gauged(n, G, Gmul, unit_g, L, Lmul, unit_l, grade, act, A, A0, P, P0, B, eta):
    def A2(a, x, y):
        return A(a, x, y) + eta(a, Lmul(x, y)) - eta(a, x) - eta(a, y)

    def A02(a):
        return A0(a) + eta(a, unit_l)

    def P2(a, b, x):
        return P(a, b, x) + eta(Gmul(b, a), x) - eta(a, act(b, x)) - eta(b, x)

    def P02(x):
        return P0(x) + eta(unit_g, x)

    def B2(x, y):
        return B(x, y) + eta(grade(y), x)

    return A2, A02, P2, P02, B2


def main():
    os.makedirs(OUT, exist_ok=True)
    # trivial
    g1, m1 = cyc(1)
    write("trivial.cat", 1, g1, m1, g1, m1, lambda x: "0", lambda a, x: x, zero, zero, zero, zero, zero, zero,
          "1", "trivial category")

    # Z/3 pointed modular: B(j,k) = ζ_3^{jk}, ζ_3 = z^4 in Q(ζ_12)
    l3, m3 = cyc(3)
    write("z3.cat", 12, g1, m1, l3, m3, lambda x: "0", lambda a, x: x, zero, zero, zero, zero, zero,
          lambda x, y: 4 * int(x) * int(y), "z^1 + z^11", "Z/3 pointed modular category")

    # Z/2 with the sign bicharacter, one label per grade
    g2, m2 = cyc(2)
    write("z2_bichar.cat", 2, g2, m2, g2, m2, lambda x: x, lambda a, x: x, zero, zero, zero, zero, zero,
          lambda x, y: int(x) * int(y), "1", "Z/2-crossed category with the sign bicharacter")

    # L = Z/6 = Z/3 x Z/2 graded over G = Z/2
    l6, m6 = cyc(6)

    def ab(x):
        return int(x) % 3, int(x) % 2

    def B6(x, y):
        (a1, b1), (a2, b2) = ab(x), ab(y)
        return 4 * a1 * a2 + 6 * b1 * b2

    grade6 = lambda x: str(ab(x)[1])
    dim6 = lambda x: 6 * ab(x)[1]
    write("z6_over_z2.cat", 12, g2, m2, l6, m6, grade6, lambda a, x: x, dim6, zero, zero, zero, zero, B6,
          "z^1 + z^11", "Z/6 labels graded over Z/2, bicharacter braiding")

    eta6 = lambda a, x: (5 * int(a) + 7 * int(x) * int(x) + 3 * int(a) * int(x) + 1) % 12
    A, A0, P, P0, B = gauged(12, g2, m2, "0", l6, m6, "0", grade6, lambda a, x: x, zero, zero, zero, zero, B6, eta6)
    write("z6_over_z2_gauged.cat", 12, g2, m2, l6, m6, grade6, lambda a, x: x, dim6, A, A0, P, P0, B,
          "z^1 + z^11", "gauge transform of z6_over_z2.cat")

    # G = S_3, L = S_3 x Z/3, conjugation action on the S_3 factor
    perms = list(itertools.permutations(range(3)))
    pname = {p: n for p, n in zip([(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)],
                                  ["e", "r", "r2", "f", "fr", "fr2"])}
    assert set(pname) == set(perms)
    byname = {v: k for k, v in pname.items()}
    order = ["e", "r", "r2", "f", "fr", "fr2"]

    def pmul(p, q):  # apply q, then p
        return tuple(p[q[i]] for i in range(3))

    def pinv(p):
        r = [0] * 3
        for i, v in enumerate(p):
            r[v] = i
        return tuple(r)

    Smul = lambda a, b: pname[pmul(byname[a], byname[b])]
    Sinv = lambda a: pname[pinv(byname[a])]
    labels = [f"{s}_{j}" for s in order for j in range(3)]

    def split(x):
        s, j = x.split("_")
        return s, int(j)

    Lmul = lambda x, y: f"{Smul(split(x)[0], split(y)[0])}_{(split(x)[1] + split(y)[1]) % 3}"
    gradeS = lambda x: split(x)[0]
    actS = lambda a, x: f"{Smul(Smul(Sinv(a), split(x)[0]), a)}_{split(x)[1]}"
    BS = lambda x, y: 4 * split(x)[1] * split(y)[1]
    write("s3_z3.cat", 12, order, Smul, labels, Lmul, gradeS, actS, zero, zero, zero, zero, zero, BS,
          "z^1 + z^11", "S_3-crossed category with labels S_3 x Z/3")

    gi = {g: i for i, g in enumerate(order)}
    li = {x: i for i, x in enumerate(labels)}
    etaS = lambda a, x: (3 * gi[a] * gi[a] + 5 * li[x] + 2 * gi[a] * li[x] + li[x] * li[x]) % 12
    A, A0, P, P0, B = gauged(12, order, Smul, "e", labels, Lmul, "e_0", gradeS, actS, zero, zero, zero, zero, BS, etaS)
    write("s3_z3_gauged.cat", 12, order, Smul, labels, Lmul, gradeS, actS, zero, A, A0, P, P0, B,
          "z^1 + z^11", "gauge transform of s3_z3.cat")


if __name__ == "__main__":
    main()
