"""Deterministic enumeration of matrices over GF(p).

Matrices come out in row-major lexicographic order of their entries
(``0 < 1 < ... < p-1``).  Every oracle witness is "least" with respect to
this order.  The invertible stream is generated row by row, skipping any row
that lies in the span of the rows above it, so singular prefixes are never
expanded and the order is still lexicographic.

A stream can be cut into contiguous pieces by the integer value of the first
row (first entry most significant); concatenating the pieces in order gives
back the full stream.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from .fields import GF, PrimeField
from .linalg import Matrix

DEFAULT_BUDGET = 20_000_000

Rows = tuple[tuple[int, ...], ...]


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget."""

    def __init__(self, needed: int, budget: int, what: str = "candidates"):
        super().__init__(f"{needed} {what} exceed the budget of {budget}")
        self.needed = needed
        self.budget = budget


def _enumeration_field(p: int) -> PrimeField:
    # GF(2) is excluded from the algebra layer but is a fine enumeration substrate
    if p != 2:
        return GF(p)
    binary = object.__new__(PrimeField)
    object.__setattr__(binary, "p", 2)
    return binary


def gl_order(p: int, n: int) -> int:
    """``|GL_n(F_p)| = prod_{i<n} (p^n - p^i)``."""
    out = 1
    for i in range(n):
        out *= p ** n - p ** i
    return out


def invertible_completions(p: int, n: int, k: int) -> int:
    """Number of ways to extend k independent rows (or columns) to an invertible n x n matrix."""
    out = 1
    for i in range(k, n):
        out *= p ** n - p ** i
    return out


def _row_value(row: tuple[int, ...], p: int) -> int:
    v = 0
    for x in row:
        v = v * p + x
    return v


def _row_of(value: int, p: int, n: int) -> tuple[int, ...]:
    digits = []
    for _ in range(n):
        value, d = divmod(value, p)
        digits.append(d)
    return tuple(reversed(digits))


def partition(p: int, n: int, k: int) -> list[tuple[int, int]]:
    """Split the first-row values ``[0, p**n)`` into k contiguous ranges."""
    total = p ** n
    k = max(1, min(k, total))
    bounds = [total * i // k for i in range(k + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(k)]


def iter_rows(p: int, n: int, invertible_only: bool = True,
              first_row: tuple[int, int] | None = None) -> Iterator[Rows]:
    """Raw stream of matrices as tuples of row tuples."""
    lo, hi = first_row if first_row is not None else (0, p ** n)
    all_rows = [_row_of(v, p, n) for v in range(p ** n)]
    if not invertible_only:
        for v in range(lo, hi):
            head = all_rows[v]
            for rest in itertools.product(all_rows, repeat=n - 1):
                yield (head,) + rest
        return

    def extend(prefix: list, span: set) -> Iterator[Rows]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for row in all_rows:
            if row in span:
                continue
            new_span = {tuple((s[i] + c * row[i]) % p for i in range(n))
                        for s in span for c in range(p)}
            prefix.append(row)
            yield from extend(prefix, new_span)
            prefix.pop()

    for v in range(max(lo, 1), hi):
        head = all_rows[v]
        span = {tuple((c * x) % p for x in head) for c in range(p)}
        yield from extend([head], span)


def enumerate_matrices(p: int, n: int, invertible_only: bool = True,
                       budget: int = DEFAULT_BUDGET,
                       first_row: tuple[int, int] | None = None) -> Iterator[Matrix]:
    """Matrices over GF(p) in row-major lexicographic order.

    Raises :class:`BudgetExceeded` up front when ``p**(n*n)`` exceeds ``budget``.
    """
    if n < 1:
        raise ValueError("matrix size must be positive")
    field = _enumeration_field(p)
    total = p ** (n * n)
    if total > budget:
        raise BudgetExceeded(total, budget)
    for rows in iter_rows(p, n, invertible_only, first_row):
        yield Matrix.wrap(field, rows)
