"""Rebuild data/c4c5-third-repaired.json from the verbatim p=1/3 certificate.

The shipped matrices miss the constant-graphon kernel vector (8,4,4,4,2,2,2,1)
by a rounding residue, which leaves each with one tiny negative eigenvalue.
This adds the least-norm exact correction that keeps every slack unchanged and
forces M_i v = 0. Needs sympy (not a runtime dependency of the package).
"""
from fractions import Fraction

import sympy as sp

from commonpairs.certificate import data_path, load_certificate, save_certificate, verify
from commonpairs.flags import gluing_table
from commonpairs.graphs import enumerate_classes

KERNEL = (8, 4, 4, 4, 2, 2, 2, 1)


def q(x):
    return sp.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else sp.Integer(x)


def main():
    cert = load_certificate(data_path("c4c5-third.json"))
    cols = [(i, a, b) for i in range(4) for a in range(8) for b in range(a, 8)]
    where = {k: n for n, k in enumerate(cols)}

    def var(i, a, b):
        return where[(i, min(a, b), max(a, b))]

    rows, rhs = [], []
    table = gluing_table()
    for j in enumerate_classes(5).graphs():
        row = [0] * len(cols)
        for i, cm in enumerate(table.matrices(j)):
            for a in range(8):
                for b in range(8):
                    row[var(i, a, b)] += cm[a][b]
        rows.append(row)
        rhs.append(0)
    for i, m in enumerate(cert.matrices):
        for a in range(8):
            row = [0] * len(cols)
            for b in range(8):
                row[var(i, a, b)] += KERNEL[b]
            rows.append(row)
            rhs.append(-sum(m[a][b] * KERNEL[b] for b in range(8)))

    A = sp.Matrix([[q(x) for x in r] for r in rows])
    b = sp.Matrix([q(x) for x in rhs])
    _, pivots = A.T.rref()
    A = A.extract(list(pivots), list(range(A.cols)))
    b = b.extract(list(pivots), [0])
    x = A.T * (A * A.T).LUsolve(b)

    new = [[[None] * 8 for _ in range(8)] for _ in range(4)]
    for (i, a, c), n in where.items():
        val = cert.matrices[i][a][c] + Fraction(int(x[n].p), int(x[n].q))
        new[i][a][c] = new[i][c][a] = val
    fixed = cert.with_matrices(new)
    report = verify(fixed)
    print(report.verdict, report.equality_count, report.min_slack)
    save_certificate(fixed, data_path("c4c5-third-repaired.json"))


if __name__ == "__main__":
    main()
