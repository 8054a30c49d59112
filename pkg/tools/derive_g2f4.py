"""Derive the restriction matrix of g2 + f4 inside e8 and write it as a data file.

Route: e8 > so(16) > so(8) + so(8).  g2 sits in the first so(8) as the
fixed points of triality, so its coroots are (beta_1 + beta_3 + beta_4)
and beta_2 in the first factor.  The Cartan subalgebra of f4 is that of
the second so(8); the long roots of f4 are the roots of so(8) and the
short ones are the weights of the three 8-dimensional modules.  A simple
system is read off from a generic linear functional.

Usage: python tools/derive_g2f4.py [output.json]
"""
import sys
from fractions import Fraction

from levelone.affine import finite_character
from levelone.embed import Embedding, classify, embedding_from_json, embedding_to_json, resolve
from levelone.rootsys import _invert, build, inner


def f4_simple_coroots(d4):
    roots = set(d4.roots)
    for top in ((1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
        roots |= set(finite_character(d4, top))
    generic = (Fraction(1), Fraction(1, 3), Fraction(1, 7), Fraction(1, 11))
    inv = _invert([list(r) for r in d4.form])

    def height(w):
        return sum(generic[i] * sum(inv[i][j] * w[j] for j in range(4)) for i in range(4))

    positive = [r for r in roots if height(r) > 0]
    pos_set = set(positive)
    simple = [
        r for r in positive
        if not any(tuple(a - b for a, b in zip(r, s)) in pos_set for s in positive if s != r)
    ]
    assert len(simple) == 4, simple
    lengths = [inner(d4, r, r) for r in simple]
    cartan = [[int(2 * inner(d4, a, b) / inner(d4, a, a)) for b in simple] for a in simple]
    ((series, rank, order),) = classify(cartan, lengths)
    assert (series, rank) == ("F", 4)
    simple = [simple[i] for i in order]
    # coroot 2 r / |r|^2 in simple-coroot coordinates of so(8) (simply laced, alpha_j^vee = alpha_j)
    cinv = _invert([[Fraction(x) for x in row] for row in d4.cartan])
    rows = []
    for r in simple:
        sq = inner(d4, r, r)
        coeffs = [sum(cinv[j][i] * r[i] for i in range(4)) * 2 / sq for j in range(4)]
        assert all(c.denominator == 1 for c in coeffs)
        rows.append([int(c) for c in coeffs])
    return rows


def main(argv):
    chain = resolve("e8:D4+D4")
    d4 = build("D4")
    g2_rows = [[1, 0, 1, 1] + [0] * 4, [0, 1, 0, 0] + [0] * 4]
    f4_rows = [[0] * 4 + row for row in f4_simple_coroots(d4)]
    local = g2_rows + f4_rows
    restriction = tuple(
        tuple(sum(local[i][m] * chain.restriction[m][j] for m in range(8)) for j in range(8)) for i in range(6)
    )
    e = Embedding(build("E8"), build("G2+F4"), restriction, (1, 1), "E8:G2+F4")
    text = embedding_to_json(
        e,
        experimental=True,
        source="derived by tools/derive_g2f4.py via so(16) > so(8)+so(8), g2 by triality folding",
    )
    embedding_from_json(text)
    out = argv[1] if len(argv) > 1 else None
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main(sys.argv)
