"""Dense exact matrices and echelonized subspaces over a :class:`Field`."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fields import Field, FieldError, Q


class ShapeError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _value(field: Field, v):
    # numpy scalars back to canonical python values
    if field.dtype is object:
        return v if isinstance(v, Fraction) else field.coerce(v)
    return int(v)


def rref_array(field: Field, arr: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``arr`` and its pivot columns."""
    m = np.array(arr, dtype=field.dtype, copy=True)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c] != 0)
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = field.reduce(m[r] * field.inv(_value(field, m[r, c])))
        hit = np.flatnonzero(m[:, c] != 0)
        hit = hit[hit != r]
        if len(hit):
            m[hit] = field.reduce(m[hit] - np.outer(m[hit, c], m[r]))
        pivots.append(c)
        r += 1
    return m, pivots


def kernel_basis(field: Field, arr: np.ndarray) -> np.ndarray:
    """Basis (as rows) of the right null space ``{x : arr @ x = 0}``."""
    rows, cols = arr.shape
    red, pivots = rref_array(field, arr)
    free = [c for c in range(cols) if c not in pivots]
    basis = field.zeros((len(free), cols))
    for k, fc in enumerate(free):
        basis[k, fc] = field.one
        for r, pc in enumerate(pivots):
            basis[k, pc] = field.reduce(-red[r, fc])
    return basis


class Matrix:
    """Immutable dense matrix with entries in ``field``.

    Entries read back through ``M[i, j]`` are canonical python values
    (``Fraction`` or ``int``).  Vectors are 1-D numpy arrays.
    """

    __slots__ = ("field", "data")

    def __init__(self, field: Field, rows: Sequence[Sequence] | np.ndarray):
        arr = field.array(rows)
        if arr.ndim != 2:
            raise ShapeError("matrix data must be two-dimensional")
        self.field = field
        self.data = _frozen(arr)

    @classmethod
    def wrap(cls, field: Field, arr: np.ndarray) -> "Matrix":
        # arr must already hold canonical entries of field.dtype
        m = cls.__new__(cls)
        m.field = field
        m.data = _frozen(np.array(arr, dtype=field.dtype, copy=True))
        return m

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        arr = field.zeros((n, n))
        for i in range(n):
            arr[i, i] = field.one
        return cls.wrap(field, arr)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int | None = None) -> "Matrix":
        return cls.wrap(field, field.zeros((rows, rows if cols is None else cols)))

    @classmethod
    def diag(cls, field: Field, values: Iterable) -> "Matrix":
        values = [field.coerce(v) for v in values]
        arr = field.zeros((len(values), len(values)))
        for i, v in enumerate(values):
            arr[i, i] = v
        return cls.wrap(field, arr)

    @classmethod
    def block_diag(cls, *blocks: "Matrix") -> "Matrix":
        if not blocks:
            raise ShapeError("block_diag needs at least one block")
        field = blocks[0].field
        _same_field(*blocks)
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        arr = field.zeros((rows, cols))
        r = c = 0
        for b in blocks:
            arr[r:r + b.rows, c:c + b.cols] = b.data
            r += b.rows
            c += b.cols
        return cls.wrap(field, arr)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence) -> "Matrix":
        return cls(field, np.array([list(c) for c in columns], dtype=object).T)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key):
        i, j = key
        return _value(self.field, self.data[i, j])

    def tolist(self) -> list[list]:
        return [[_value(self.field, v) for v in row] for row in self.data]

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j].copy()

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(map(tuple, self.tolist()))))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(v) for v in row) for row in self.tolist())
        return f"Matrix({self.field}, [{body}])"

    def _check_other(self, other: "Matrix"):
        if other.field != self.field:
            raise FieldError(f"mixed fields {self.field} and {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_other(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Matrix.wrap(self.field, self.field.reduce(self.data + other.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_other(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix.wrap(self.field, self.field.reduce(self.data - other.data))

    def __neg__(self) -> "Matrix":
        return Matrix.wrap(self.field, self.field.reduce(-self.data))

    def scale(self, c) -> "Matrix":
        return Matrix.wrap(self.field, self.field.reduce(self.data * self.field.coerce(c)))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            self._check_other(other)
            if self.cols != other.rows:
                raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
            return Matrix.wrap(self.field, self.field.matmul(self.data, other.data))
        vec = np.asarray(other)
        if vec.shape != (self.cols,):
            raise ShapeError(f"cannot apply {self.shape} matrix to vector of shape {vec.shape}")
        return self.field.matmul(self.data, vec)

    def apply(self, vec) -> np.ndarray:
        return self @ vec

    @property
    def T(self) -> "Matrix":
        return Matrix.wrap(self.field, self.data.T)

    def rref(self) -> tuple["Matrix", list[int]]:
        red, pivots = rref_array(self.field, self.data)
        return Matrix.wrap(self.field, red), pivots

    def rank(self) -> int:
        return len(rref_array(self.field, self.data)[1])

    def det(self):
        if not self.is_square:
            raise ShapeError("determinant of a non-square matrix")
        f = self.field
        m = np.array(self.data, copy=True)
        n = self.rows
        det = f.one
        for c in range(n):
            nz = [i for i in range(c, n) if m[i, c] != 0]
            if not nz:
                return f.zero
            i = nz[0]
            if i != c:
                m[[c, i]] = m[[i, c]]
                det = f.neg(det)
            piv = _value(f, m[c, c])
            det = f.mul(det, piv)
            inv = f.inv(piv)
            for r in range(c + 1, n):
                if m[r, c] != 0:
                    factor = f.mul(_value(f, m[r, c]), inv)
                    m[r] = f.reduce(m[r] - factor * m[c])
        return det

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise ShapeError("inverse of a non-square matrix")
        n = self.rows
        aug = np.concatenate([self.data, Matrix.identity(self.field, n).data], axis=1)
        red, pivots = rref_array(self.field, aug)
        if pivots[:n] != list(range(n)):
            raise SingularMatrixError("matrix is singular")
        return Matrix.wrap(self.field, red[:, n:])

    def kernel(self) -> "Subspace":
        return Subspace.wrap(self.field, self.cols, kernel_basis(self.field, self.data))

    def image(self) -> "Subspace":
        return Subspace.span(self.field, self.data.T, self.rows)

    def to_json(self) -> list[list[str]]:
        return [[self.field.format(v) for v in row] for row in self.tolist()]

    @classmethod
    def from_json(cls, field: Field, rows: list[list]) -> "Matrix":
        return cls(field, rows)


def _same_field(*mats: Matrix):
    fields = {m.field for m in mats}
    if len(fields) > 1:
        raise FieldError(f"mixed fields {sorted(map(str, fields))}")


class Subspace:
    """Subspace of ``field**ambient_dim`` stored by its reduced echelon basis.

    The echelon basis is canonical, so ``==`` is equality of subspaces.
    """

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field: Field, ambient_dim: int, basis: np.ndarray):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = _frozen(basis)

    @classmethod
    def wrap(cls, field: Field, ambient_dim: int, vectors: np.ndarray) -> "Subspace":
        vectors = np.asarray(vectors, dtype=field.dtype).reshape(-1, ambient_dim)
        red, pivots = rref_array(field, vectors)
        return cls(field, ambient_dim, red[: len(pivots)])

    @classmethod
    def span(cls, field: Field, vectors, ambient_dim: int) -> "Subspace":
        rows = [field.array(list(v)) for v in vectors]
        for v in rows:
            if v.shape != (ambient_dim,):
                raise ShapeError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        arr = np.array(rows, dtype=field.dtype).reshape(len(rows), ambient_dim)
        return cls.wrap(field, ambient_dim, arr)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, field.zeros((0, ambient_dim)))

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, Matrix.identity(field, ambient_dim).data.copy())

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def is_zero(self) -> bool:
        return self.dim == 0

    def vectors(self) -> list[np.ndarray]:
        return [row.copy() for row in self.basis]

    def basis_matrix(self) -> Matrix:
        return Matrix.wrap(self.field, self.basis)

    def _check(self, other: "Subspace"):
        if other.field != self.field:
            raise FieldError(f"mixed fields {self.field} and {other.field}")
        if other.ambient_dim != self.ambient_dim:
            raise ShapeError(f"ambient dimensions {self.ambient_dim} and {other.ambient_dim} differ")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.wrap(self.field, self.ambient_dim,
                             np.concatenate([self.basis, other.basis], axis=0))

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersection(other)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, self.ambient_dim)
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        # (a, b) with a.U + b.V = 0 give the common vectors a.U
        coeffs = kernel_basis(self.field, stacked.T)
        k = self.dim
        common = self.field.matmul(coeffs[:, :k], self.basis) if len(coeffs) else coeffs[:, :0]
        return Subspace.wrap(self.field, self.ambient_dim,
                             np.asarray(common).reshape(-1, self.ambient_dim))

    def __contains__(self, vector) -> bool:
        v = vector if isinstance(vector, np.ndarray) and vector.dtype == self.field.dtype \
            else self.field.array(list(vector))
        if v.shape != (self.ambient_dim,):
            raise ShapeError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        stacked = np.concatenate([self.basis, v.reshape(1, -1)], axis=0)
        return len(rref_array(self.field, stacked)[1]) == self.dim

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return (self + other).dim == other.dim

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient_dim == other.ambient_dim
                and self.basis.shape == other.basis.shape
                and bool(np.all(self.basis == other.basis)))

    def __hash__(self):
        return hash((self.field, self.ambient_dim,
                     tuple(_value(self.field, v) for v in self.basis.ravel())))

    def image(self, m: Matrix) -> "Subspace":
        """Image of the subspace under ``m``."""
        if m.cols != self.ambient_dim:
            raise ShapeError("matrix does not act on this subspace")
        if self.is_zero():
            return Subspace.zero(self.field, m.rows)
        return Subspace.wrap(self.field, m.rows, self.field.matmul(self.basis, m.data.T))

    def points(self):
        """Every vector of the subspace, for a finite field."""
        if not self.field.is_finite:
            raise FieldError("points() needs a finite field")
        p = self.field.p
        for coeffs in itertools.product(range(p), repeat=self.dim):
            if self.dim == 0:
                yield self.field.zeros(self.ambient_dim)
            else:
                yield self.field.reduce(np.array(coeffs, dtype=self.field.dtype) @ self.basis)

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "basis": [[self.field.format(_value(self.field, v)) for v in row] for row in self.basis]}

    def __repr__(self):
        rows = ", ".join("(" + ",".join(self.field.format(_value(self.field, v)) for v in row) + ")"
                         for row in self.basis)
        return f"Subspace({self.field}, dim={self.dim}/{self.ambient_dim}, [{rows}])"


def vector(field: Field, values) -> np.ndarray:
    return field.array(list(values))


def unit_vector(field: Field, n: int, i: int) -> np.ndarray:
    v = field.zeros(n)
    v[i] = field.one
    return v


__all__ = ["Matrix", "Subspace", "ShapeError", "SingularMatrixError", "rref_array",
           "kernel_basis", "vector", "unit_vector", "Q"]
