"""Exact linear algebra on small integer and rational matrices.

Matrices are tuples of row tuples, vectors are flat tuples.  Everything is
arbitrary precision: plain ints wherever possible, Fractions only where a
division is genuinely required.  No floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Vec = tuple
Mat = tuple


def identity_matrix(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_vec(m: Mat, v: Sequence) -> Vec:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(p))
        for i in range(n)
    )


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def det(m: Mat) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def invert_rational(m: Mat) -> Mat:
    """Exact inverse with Fraction entries; raises on singular input."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def invert_unimodular(m: Mat) -> Mat:
    """Inverse of an integer matrix with determinant +-1, as an integer matrix."""
    inv = invert_rational(m)
    out = []
    for row in inv:
        irow = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            irow.append(int(x))
        out.append(tuple(irow))
    return tuple(out)


def solve(m: Mat, v: Sequence) -> Optional[Vec]:
    """Solve m x = v exactly; None if the system is singular."""
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(v[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] for i in range(n))


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError("length mismatch in pairing")
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_neg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vec_scale(u: Vec, c) -> Vec:
    return tuple(c * a for a in u)


def vec_gcd(u: Sequence) -> int:
    g = 0
    for a in u:
        g = gcd(g, abs(a))
    return g


def primitive(u: Vec) -> Vec:
    """Divide out the gcd, then normalise the first nonzero entry positive."""
    g = vec_gcd(u)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    w = tuple(a // g for a in u)
    for a in w:
        if a != 0:
            return w if a > 0 else vec_neg(w)
    raise ValueError("unreachable")


def integer_multiple_of(v: Vec, u: Vec) -> Optional[int]:
    """Return k with v == k*u, or None.  u must be nonzero."""
    lead = next((i for i, a in enumerate(u) if a != 0), None)
    if lead is None:
        raise ValueError("u is zero")
    if v[lead] % u[lead] != 0:
        return None
    k = v[lead] // u[lead]
    return k if v == tuple(k * a for a in u) else None


def is_colinear(v: Vec, u: Vec) -> bool:
    """True when v lies on the rational line through u (u nonzero)."""
    if all(a == 0 for a in u):
        raise ValueError("u is zero")
    return all(v[i] * u[j] == v[j] * u[i] for i in range(len(u)) for j in range(i + 1, len(u)))
