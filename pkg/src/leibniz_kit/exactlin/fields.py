"""Exact scalar fields: the rationals and prime fields GF(p), p odd.

Field elements are plain Python values in canonical form: ``Fraction`` over
Q and ``int`` residues in ``[0, p)`` over GF(p).  Arrays of elements are numpy
arrays (``object`` dtype over Q, ``int64`` over GF(p)); every routine that
does arithmetic on arrays calls :meth:`Field.reduce` afterwards.

Never divide a Q array with ``/``: multiply by ``field.inv(a)`` instead, so
that integer entries never turn into floats.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

# int64 sums of two-factor products stay exact while n * p**2 < 2**63.
_INT64_PRIME_LIMIT = 1 << 20


class FieldError(ValueError):
    """Raised on invalid field parameters or mixed-field arithmetic."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Base class for the two supported fields."""

    kind: str
    dtype: object

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    @property
    def is_finite(self) -> bool:
        return False

    def coerce(self, value):
        raise NotImplementedError

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def format(self, value) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def add(self, a, b):
        return self.coerce(a + b)

    def sub(self, a, b):
        return self.coerce(a - b)

    def mul(self, a, b):
        return self.coerce(a * b)

    def neg(self, a):
        return self.coerce(-a)

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    # Exact contractions of element arrays.  Q overrides these with an
    # integer path; the generic versions reduce after numpy's own product.

    def einsum(self, subscripts: str, *operands: np.ndarray) -> np.ndarray:
        return self.reduce(np.asarray(np.einsum(subscripts, *operands)))

    def tensordot(self, a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
        return self.reduce(np.tensordot(a, b, axes=axes))

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(np.asarray(a @ b))

    def array(self, data) -> np.ndarray:
        """Build an array of canonical elements from nested sequences."""
        raw = np.array(data, dtype=object)
        if raw.size == 0:
            return np.zeros(raw.shape, dtype=self.dtype)
        flat = [self.coerce(v) for v in raw.ravel()]
        return np.array(flat, dtype=self.dtype).reshape(raw.shape)

    def zeros(self, shape) -> np.ndarray:
        out = np.zeros(shape, dtype=self.dtype)
        if self.dtype is object:
            out[...] = Fraction(0)
        return out

    def scalar(self, value) -> "Scalar":
        return Scalar(self, self.coerce(value))

    def to_json(self) -> dict:
        raise NotImplementedError


_denominator = np.frompyfunc(lambda q: q.denominator, 1, 1)
_scaled_numerator = np.frompyfunc(lambda q, d: q.numerator * (d // q.denominator), 2, 1)
_to_fraction = np.frompyfunc(lambda v, d: Fraction(int(v), d), 2, 1)


def _clear_denominators(arr: np.ndarray) -> tuple[np.ndarray, int, int]:
    """``arr = ints / d`` with integer ``ints``; also returns ``max |ints|``."""
    if arr.size == 0:
        return np.zeros(arr.shape, dtype=np.int64), 1, 0
    d = math.lcm(*set(_denominator(arr).ravel().tolist()))
    ints = _scaled_numerator(arr, d)
    return ints, d, max(map(abs, ints.ravel().tolist()))


@dataclass(frozen=True)
class Rationals(Field):
    kind = "Q"
    dtype = object

    def coerce(self, value) -> Fraction:
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldError(f"element of {value.field} used over Q")
            return value.value
        if isinstance(value, (bool, float)):
            raise FieldError(f"refusing inexact or boolean value {value!r}")
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (Integral, Rational)):
            return Fraction(int(value.numerator), int(value.denominator))
        if isinstance(value, np.integer):
            return Fraction(int(value))
        raise FieldError(f"cannot interpret {value!r} as a rational")

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def _contract(self, fn, *operands: np.ndarray) -> np.ndarray:
        # Fraction arithmetic in object arrays is slow; contract the cleared
        # numerators instead (int64 when a crude bound rules out overflow) and
        # divide once at the end.
        parts = [_clear_denominators(np.asarray(op)) for op in operands]
        bound, denom = 1, 1
        for ints, d, top in parts:
            bound *= max(top, 1) * max(ints.size, 1)
            denom *= d
        cast = np.int64 if bound < 1 << 62 else object
        out = np.asarray(fn(*(ints.astype(cast) for ints, _, _ in parts)))
        if out.ndim == 0:
            return Fraction(int(out[()]), denom)
        return np.asarray(_to_fraction(out, denom), dtype=object).reshape(out.shape)

    def einsum(self, subscripts: str, *operands: np.ndarray) -> np.ndarray:
        return self._contract(lambda *ops: np.einsum(subscripts, *ops), *operands)

    def tensordot(self, a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
        return self._contract(lambda x, y: np.tensordot(x, y, axes=axes), a, b)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._contract(lambda x, y: x @ y, a, b)

    def inv(self, a) -> Fraction:
        a = self.coerce(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def format(self, value) -> str:
        value = self.coerce(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    def parse(self, text: str) -> Fraction:
        text = text.strip()
        if "." in text or "e" in text.lower():
            raise FieldError(f"not an exact rational: {text!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"cannot parse rational {text!r}") from exc

    def to_json(self) -> dict:
        return {"kind": "Q"}

    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class PrimeField(Field):
    p: int
    kind = "GF"

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise FieldError(f"{self.p!r} is not prime")
        if self.p == 2:
            raise FieldError("characteristic 2 is not supported")

    @property
    def dtype(self):
        return np.int64 if self.p < _INT64_PRIME_LIMIT else object

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def order(self) -> int:
        return self.p

    def coerce(self, value) -> int:
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldError(f"element of {value.field} used over {self}")
            return value.value
        if isinstance(value, (bool, float)):
            raise FieldError(f"refusing inexact or boolean value {value!r}")
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (Integral, np.integer)):
            return int(value) % self.p
        if isinstance(value, Rational):
            return int(value.numerator) * pow(int(value.denominator), -1, self.p) % self.p
        raise FieldError(f"cannot interpret {value!r} in {self}")

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr % self.p

    def inv(self, a) -> int:
        a = self.coerce(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def format(self, value) -> str:
        return str(self.coerce(value))

    def parse(self, text: str) -> int:
        text = text.strip()
        try:
            if "/" in text:
                return self.coerce(Fraction(text))
            return int(text) % self.p
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"cannot parse {text!r} in {self}") from exc

    def elements(self):
        return range(self.p)

    def to_json(self) -> dict:
        return {"kind": "GF", "p": self.p}

    def __str__(self) -> str:
        return f"GF({self.p})"


Q = Rationals()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(spec: str | dict) -> Field:
    """Parse ``"Q"``, ``"GF:p"`` or the JSON form ``{"kind": "GF", "p": p}``."""
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "Q":
            return Q
        if kind == "GF" and "p" in spec:
            return GF(int(spec["p"]))
        raise FieldError(f"unknown field {spec!r}")
    text = spec.strip()
    if text.upper() in ("Q", "QQ"):
        return Q
    if text.upper().startswith("GF"):
        rest = text[2:].lstrip(":(").rstrip(")")
        try:
            return GF(int(rest))
        except ValueError as exc:
            raise FieldError(f"unknown field {spec!r}") from exc
    raise FieldError(f"unknown field {spec!r}")


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field, for standalone arithmetic."""

    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"mixed fields {self.field} and {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except FieldError:
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __str__(self) -> str:
        return self.field.format(self.value)

    def __repr__(self) -> str:
        return f"Scalar({self.field}, {self})"
