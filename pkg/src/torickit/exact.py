"""Small exact linear algebra kernel over fractions.Fraction."""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def frac(value) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def frac_str(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def mat_copy(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rank(rows) -> int:
    """Rank by fraction-exact Gaussian elimination."""
    m = mat_copy(rows)
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def det(rows) -> Fraction:
    m = mat_copy(rows)
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def solve(rows, rhs):
    """Solve a square exact system; None when singular."""
    n = len(rows)
    m = [list(row) + [b] for row, b in zip(mat_copy(rows), rhs)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return None
        m[c], m[pivot] = m[pivot], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return tuple(m[i][n] for i in range(n))


def inverse(rows):
    """Exact inverse of a nonsingular square matrix."""
    n = len(rows)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat_copy(rows))]
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[pivot] = m[pivot], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return tuple(tuple(m[i][n + j] for j in range(n)) for i in range(n))


def kernel_vector(rows, ncols: int):
    """One nonzero kernel vector of a rank-deficient system, or None.

    For a (ncols-1)-rank matrix this spans the kernel.
    """
    m = mat_copy(rows)
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    j = free[0]
    vec = [Fraction(0)] * ncols
    vec[j] = Fraction(1)
    for row, c in zip(m, pivots):
        vec[c] = -row[j]
    return tuple(vec)


def affine_rank(points) -> int:
    """Dimension of the affine span of exact points."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if len(pts) <= 1:
        return 0
    base = pts[0]
    return rank([[x - y for x, y in zip(p, base)] for p in pts[1:]])


def primitive(vector):
    """Primitive integer vector along an exact rational direction."""
    vec = [Fraction(x) for x in vector]
    if all(x == 0 for x in vec):
        raise ValueError("zero vector has no primitive direction")
    scale = 1
    for x in vec:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)
