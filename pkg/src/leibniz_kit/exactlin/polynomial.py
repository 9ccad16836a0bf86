"""Univariate polynomials with exact coefficients, lowest degree first."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .fields import Field, FieldError


class Polynomial:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable = ()):
        cs = [field.coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def x(cls, field: Field) -> "Polynomial":
        return cls(field, [0, 1])

    @classmethod
    def constant(cls, field: Field, c) -> "Polynomial":
        return cls(field, [c])

    @classmethod
    def linear(cls, field: Field, root) -> "Polynomial":
        """The monic polynomial ``x - root``."""
        return cls(field, [field.neg(field.coerce(root)), 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _check(self, other: "Polynomial"):
        if other.field != self.field:
            raise FieldError(f"mixed fields {self.field} and {other.field}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial(self.field, [other])

    def __add__(self, other) -> "Polynomial":
        other = self._lift(other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (f.zero,) * (n - len(self.coeffs))
        b = other.coeffs + (f.zero,) * (n - len(other.coeffs))
        return Polynomial(f, [f.add(x, y) for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._lift(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._lift(other)
        f = self.field
        if self.is_zero() or other.is_zero():
            return Polynomial(f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Polynomial(f, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial(self.field, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        quot = [f.zero] * max(len(rem) - other.degree, 1)
        lead_inv = f.inv(other.leading)
        while len(rem) - 1 >= other.degree and rem:
            shift = len(rem) - 1 - other.degree
            c = f.mul(rem[-1], lead_inv)
            quot[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, b))
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial(f, quot), Polynomial(f, rem)

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __call__(self, x):
        """Horner evaluation at a field element."""
        f = self.field
        x = f.coerce(x)
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return f"Polynomial({self.field}, 0)"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            cs = self.field.format(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and cs == "1":
                terms.append(mono)
            else:
                terms.append(cs + ("*" + mono if mono else ""))
        return f"Polynomial({self.field}, {' + '.join(terms)})"

    def to_json(self) -> list[str]:
        return [self.field.format(c) for c in self.coeffs]


def monic_polynomials(field: Field, degree: int) -> Iterator[Polynomial]:
    """All monic polynomials of the given degree over a finite field."""
    if not field.is_finite:
        raise FieldError("enumeration needs a finite field")
    for lower in itertools.product(range(field.p), repeat=degree):
        yield Polynomial(field, list(lower) + [1])


def poly_from_roots(field: Field, roots: Sequence) -> Polynomial:
    out = Polynomial(field, [1])
    for r in roots:
        out = out * Polynomial.linear(field, r)
    return out
