"""Canonical-form matrix constructors and small polynomial utilities.

Conventions, used everywhere in the package:

* companion matrices carry ones on the subdiagonal and the negated
  coefficients of the polynomial in the last column, constant term first;
* Jordan and realification blocks are lower triangular (ones, resp. identity
  blocks, below the diagonal).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fields import Field, FieldError
from .linalg import Matrix, ShapeError
from .polynomial import Polynomial, monic_polynomials


def companion(f: Polynomial) -> Matrix:
    if not f.is_monic:
        raise ValueError("companion matrix needs a monic polynomial")
    n = f.degree
    if n < 1:
        raise ValueError("companion matrix needs a polynomial of positive degree")
    field = f.field
    arr = field.zeros((n, n))
    for i in range(1, n):
        arr[i, i - 1] = field.one
    for i in range(n):
        arr[i, n - 1] = field.neg(f.coeffs[i])
    return Matrix.wrap(field, arr)


def companion_of_power(f: Polynomial, k: int) -> Matrix:
    """Companion matrix of ``f**k``."""
    if not f.is_monic:
        raise ValueError("f must be monic")
    if k < 1:
        raise ValueError("k must be a positive integer")
    return companion(f ** k)


def jordan_block(field: Field, a, n: int) -> Matrix:
    """``a * I_n`` plus ones on the subdiagonal."""
    if n < 1:
        raise ValueError("Jordan block size must be positive")
    a = field.coerce(a)
    arr = field.zeros((n, n))
    for i in range(n):
        arr[i, i] = a
        if i:
            arr[i, i - 1] = field.one
    return Matrix.wrap(field, arr)


def realification_block(field: Field, alpha, beta, n: int) -> Matrix:
    """The 2n x 2n block matrix with R = [[alpha, beta], [-beta, alpha]] on the
    diagonal and identity blocks on the block subdiagonal."""
    if n < 1:
        raise ValueError("block count must be positive")
    alpha, beta = field.coerce(alpha), field.coerce(beta)
    if beta == 0:
        raise ValueError("beta = 0: x^2 - 2 alpha x + alpha^2 is not irreducible")
    arr = field.zeros((2 * n, 2 * n))
    for b in range(n):
        r = 2 * b
        arr[r, r] = alpha
        arr[r, r + 1] = beta
        arr[r + 1, r] = field.neg(beta)
        arr[r + 1, r + 1] = alpha
        if b:
            arr[r, r - 2] = field.one
            arr[r + 1, r - 1] = field.one
    return Matrix.wrap(field, arr)


def charpoly(m: Matrix) -> Polynomial:
    """``det(x I - M)`` by cofactor expansion over the polynomial ring.

    Division-free, so it is valid over every field; memoized on column
    subsets, which keeps it usable up to n of about 10.
    """
    if not m.is_square:
        raise ShapeError("characteristic polynomial of a non-square matrix")
    field = m.field
    n = m.rows
    x = Polynomial.x(field)
    entries = [[(x if i == j else Polynomial(field)) - Polynomial.constant(field, m[i, j])
                for j in range(n)] for i in range(n)]
    memo: dict[tuple[int, ...], Polynomial] = {}

    def minor(row: int, cols: tuple[int, ...]) -> Polynomial:
        if row == n:
            return Polynomial(field, [1])
        if cols in memo:
            return memo[cols]
        total = Polynomial(field)
        for k, c in enumerate(cols):
            e = entries[row][c]
            if e.is_zero():
                continue
            term = e * minor(row + 1, cols[:k] + cols[k + 1:])
            total = total + (term if k % 2 == 0 else -term)
        memo[cols] = total
        return total

    return minor(0, tuple(range(n)))


def is_irreducible_gfp(f: Polynomial) -> bool:
    """Irreducibility over GF(p) by trial division with every monic polynomial
    of degree at most ``deg(f) // 2``."""
    if not f.field.is_finite:
        raise FieldError("irreducibility is only decided over GF(p); over Q the caller asserts it")
    if f.degree < 1:
        raise ValueError("constants are neither irreducible nor reducible")
    if f.degree > 8:
        raise ValueError("trial division limited to degree <= 8")
    for d in range(1, f.degree // 2 + 1):
        for g in monic_polynomials(f.field, d):
            if (f % g).is_zero():
                return False
    return True


def rational_root_warning(f: Polynomial) -> list[Fraction]:
    """Rational roots of an integer-normalizable polynomial over Q.

    Only a heuristic: an empty list does not prove irreducibility in degree >= 4.
    """
    if f.field.is_finite:
        raise FieldError("rational roots are a Q-only heuristic")
    if f.degree < 1:
        return []
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    while ints and ints[0] == 0:
        ints.pop(0)
    roots = [Fraction(0)] if len(ints) < len(f.coeffs) else []
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(k):
        return [d for d in range(1, k + 1) if k % d == 0]

    for pnum in divisors(a0):
        for q in divisors(an):
            for cand in (Fraction(pnum, q), Fraction(-pnum, q)):
                if cand not in roots and f(cand) == 0:
                    roots.append(cand)
    return sorted(roots)
