"""Independent reference computations used to cross-check the library."""
from fractions import Fraction
from itertools import combinations
from math import gcd


def det(rows):
    """Exact determinant by fraction Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return int(out)


def determinantal_divisors(rows):
    """d_k = gcd of all k x k minors, for k = 1..rank."""
    nr, nc = len(rows), len(rows[0]) if rows else 0
    out = []
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for ri in combinations(range(nr), k):
            for ci in combinations(range(nc), k):
                g = gcd(g, det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors(rows):
    """Non-zero SNF diagonal from determinantal divisors."""
    d = determinantal_divisors(rows)
    return [d[0]] + [d[i] // d[i - 1] for i in range(1, len(d))] if d else []


def cokernel_signature(rows):
    """(free rank, torsion factors > 1) of Z^rows / column span."""
    f = invariant_factors(rows)
    return len(rows) - len(f), tuple(x for x in f if x > 1)
