"""Leibniz algebras given by structure constants.

An algebra of dimension n over a field is an n x n x n tensor ``c`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k``.  Construction checks nothing about the
bracket; :func:`check_left_leibniz` is the gatekeeper.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

import numpy as np

from .exactlin import Field, FieldError, Matrix, ShapeError, Subspace, parse_field
from .exactlin.linalg import _value, kernel_basis


class AlgebraError(ValueError):
    """An algebra does not meet the precondition of an operation."""


@dataclass(frozen=True)
class FamilyTag:
    """Provenance of a constructed algebra: family name and its parameters."""

    family: str
    params: Mapping = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}

    def __hash__(self):
        return hash((self.family, repr(sorted(self.params.items()))))


class LeibnizAlgebra:
    __slots__ = ("field", "dim", "tensor", "tag", "_support")

    def __init__(self, field: Field, tensor, tag: FamilyTag | None = None):
        arr = tensor if isinstance(tensor, np.ndarray) and tensor.dtype == field.dtype \
            else field.array(tensor)
        if arr.ndim != 3 or not (arr.shape[0] == arr.shape[1] == arr.shape[2]):
            raise ShapeError(f"structure tensor must be n x n x n, got {arr.shape}")
        arr = np.array(arr, copy=True)
        arr.flags.writeable = False
        self.field = field
        self.dim = arr.shape[0]
        self.tensor = arr
        self.tag = tag
        self._support = None

    @property
    def support(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Nonzero structure constants as ``(i, j, k, c_ijk)`` arrays."""
        if self._support is None:
            i, j, k = np.nonzero(self.tensor != 0)
            self._support = (i, j, k, self.tensor[i, j, k])
        return self._support

    @classmethod
    def from_brackets(cls, field: Field, dim: int, brackets: Mapping, tag: FamilyTag | None = None):
        """Build from ``{(i, j): vector}`` or ``{(i, j): {k: coeff}}``; 0-based indices."""
        arr = field.zeros((dim, dim, dim))
        for (i, j), v in brackets.items():
            if isinstance(v, Mapping):
                for k, coeff in v.items():
                    arr[i, j, k] = field.reduce(arr[i, j, k] + field.coerce(coeff))
            else:
                vec = field.array(list(v))
                if vec.shape != (dim,):
                    raise ShapeError(f"bracket vector of length {len(vec)} in dimension {dim}")
                arr[i, j] = field.reduce(arr[i, j] + vec)
        return cls(field, arr, tag)

    def bracket_matrix(self, k: int) -> Matrix:
        """The k-th coordinate of the bracket as a bilinear form matrix."""
        return Matrix.wrap(self.field, self.tensor[:, :, k])

    def __eq__(self, other):
        if not isinstance(other, LeibnizAlgebra):
            return NotImplemented
        return (self.field == other.field and self.dim == other.dim
                and bool(np.all(self.tensor == other.tensor)))

    def __hash__(self):
        return hash((self.field, self.dim,
                     tuple(_value(self.field, v) for v in self.tensor.ravel())))

    def __repr__(self):
        name = self.tag.family if self.tag else "algebra"
        return f"LeibnizAlgebra({name}, dim={self.dim}, {self.field})"

    def nonzero_brackets(self):
        """``(i, j, vector)`` for every nonzero ``[e_i, e_j]``, row-major."""
        for i in range(self.dim):
            for j in range(self.dim):
                if np.any(self.tensor[i, j] != 0):
                    yield i, j, self.tensor[i, j].copy()

    def to_json(self) -> dict:
        out = {
            "field": self.field.to_json(),
            "dim": self.dim,
            "table": [{"i": i, "j": j, "v": [self.field.format(_value(self.field, x)) for x in v]}
                      for i, j, v in self.nonzero_brackets()],
        }
        if self.tag is not None:
            out["tag"] = self.tag.to_json()
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "LeibnizAlgebra":
        try:
            field = parse_field(data["field"])
            dim = int(data["dim"])
            brackets = {}
            for entry in data.get("table", []):
                i, j = int(entry["i"]), int(entry["j"])
                if not (0 <= i < dim and 0 <= j < dim):
                    raise AlgebraError(f"bracket index ({i}, {j}) out of range")
                if (i, j) in brackets:
                    raise AlgebraError(f"duplicate bracket entry ({i}, {j})")
                brackets[(i, j)] = [field.parse(str(x)) for x in entry["v"]]
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed algebra JSON: {exc}") from exc
        tag = None
        if isinstance(data.get("tag"), Mapping):
            tag = FamilyTag(data["tag"].get("family", "?"), data["tag"].get("params", {}))
        return cls.from_brackets(field, dim, brackets, tag)


def abelian(field: Field, n: int) -> LeibnizAlgebra:
    return LeibnizAlgebra(field, field.zeros((n, n, n)), FamilyTag("Abelian", {"n": n}))


def _vec(alg: LeibnizAlgebra, x) -> np.ndarray:
    v = x if isinstance(x, np.ndarray) and x.dtype == alg.field.dtype else alg.field.array(list(x))
    if v.shape != (alg.dim,):
        raise ShapeError(f"vector of length {v.shape[0]} for an algebra of dimension {alg.dim}")
    return v


def bracket(alg: LeibnizAlgebra, x, y) -> np.ndarray:
    """``[x, y] = sum_ij x_i y_j [e_i, e_j]``."""
    x, y = _vec(alg, x), _vec(alg, y)
    f = alg.field
    i, j, k, c = alg.support          # the families are sparse; sum only the nonzero terms
    out = f.zeros(alg.dim)
    np.add.at(out, k, f.reduce(x[i] * y[j] * c))
    return f.reduce(out)


@dataclass(frozen=True)
class LeibnizViolation:
    """First basis triple (0-based) where an identity fails, and the residual."""

    identity: str
    i: int
    j: int
    k: int
    residual: tuple

    def to_json(self) -> dict:
        return {"identity": self.identity, "triple": [self.i, self.j, self.k],
                "residual": [str(r) for r in self.residual]}


def _triple_tensors(alg: LeibnizAlgebra):
    c = alg.tensor
    f = alg.field
    # x_y_z[i,j,k] = [e_i,[e_j,e_k]] ; xy_z[i,j,k] = [[e_i,e_j],e_k]
    x_yz = f.einsum("jkm,imr->ijkr", c, c)
    xy_z = f.einsum("ijm,mkr->ijkr", c, c)
    return x_yz, xy_z


def _first_violation(alg, name, residual) -> LeibnizViolation | None:
    bad = np.argwhere(np.any(residual != 0, axis=-1))
    if len(bad) == 0:
        return None
    i, j, k = (int(t) for t in bad[0])
    vals = tuple(alg.field.format(_value(alg.field, v)) for v in residual[i, j, k])
    return LeibnizViolation(name, i, j, k, vals)


def check_left_leibniz(alg: LeibnizAlgebra) -> LeibnizViolation | None:
    """``[x,[y,z]] = [[x,y],z] + [y,[x,z]]`` on all basis triples; None if it holds."""
    f = alg.field
    x_yz, xy_z = _triple_tensors(alg)
    y_xz = x_yz.transpose(1, 0, 2, 3)
    return _first_violation(alg, "left", f.reduce(x_yz - xy_z - y_xz))


def check_right_leibniz(alg: LeibnizAlgebra) -> LeibnizViolation | None:
    """``[[x,y],z] = [[x,z],y] + [x,[y,z]]`` on all basis triples; None if it holds."""
    f = alg.field
    x_yz, xy_z = _triple_tensors(alg)
    xz_y = xy_z.transpose(0, 2, 1, 3)
    return _first_violation(alg, "right", f.reduce(xy_z - xz_y - x_yz))


def is_symmetric(alg: LeibnizAlgebra) -> bool:
    return check_left_leibniz(alg) is None and check_right_leibniz(alg) is None


def require_left_leibniz(alg: LeibnizAlgebra) -> None:
    violation = check_left_leibniz(alg)
    if violation is not None:
        raise AlgebraError(f"not a left Leibniz algebra: identity fails at "
                           f"{(violation.i, violation.j, violation.k)}")


def commutator_ideal(alg: LeibnizAlgebra) -> Subspace:
    n = alg.dim
    return Subspace.wrap(alg.field, n, alg.tensor.reshape(n * n, n))


def left_center(alg: LeibnizAlgebra) -> Subspace:
    """``{x : [x, g] = 0}``."""
    n = alg.dim
    system = alg.tensor.transpose(1, 2, 0).reshape(n * n, n)
    return Subspace.wrap(alg.field, n, kernel_basis(alg.field, system))


def right_center(alg: LeibnizAlgebra) -> Subspace:
    """``{x : [g, x] = 0}``."""
    n = alg.dim
    system = alg.tensor.transpose(0, 2, 1).reshape(n * n, n)
    return Subspace.wrap(alg.field, n, kernel_basis(alg.field, system))


def center(alg: LeibnizAlgebra) -> Subspace:
    return left_center(alg) & right_center(alg)


def leibniz_kernel(alg: LeibnizAlgebra) -> Subspace:
    """Span of all squares ``[x, x]``, computed by polarization (char != 2)."""
    n = alg.dim
    c = alg.tensor
    vecs = [c[i, i] for i in range(n)]
    vecs += [alg.field.reduce(c[i, j] + c[j, i]) for i in range(n) for j in range(i + 1, n)]
    if not vecs:
        return Subspace.zero(alg.field, n)
    return Subspace.wrap(alg.field, n, np.array(vecs, dtype=alg.field.dtype))


def product(alg: LeibnizAlgebra, u: Subspace, v: Subspace) -> Subspace:
    """``[U, V] = span{[u, v]}`` over basis pairs."""
    n = alg.dim
    if u.is_zero() or v.is_zero():
        return Subspace.zero(alg.field, n)
    f = alg.field
    left = f.tensordot(u.basis, alg.tensor, (1, 0))       # [u, b, k]
    vals = f.einsum("vb,ubk->uvk", v.basis, left)
    return Subspace.wrap(alg.field, n, vals.reshape(-1, n))


@dataclass(frozen=True)
class SeriesReport:
    """Terms of a derived or lower central series.

    ``step`` is the n with term n-1 nonzero and term n zero, or None when the
    series stabilizes at a nonzero subspace.
    """

    kind: str
    terms: tuple[Subspace, ...]
    step: int | None

    @property
    def dims(self) -> list[int]:
        return [t.dim for t in self.terms]


def _series(alg: LeibnizAlgebra, kind: str) -> SeriesReport:
    whole = Subspace.full(alg.field, alg.dim)
    terms = [whole]
    while True:
        last = terms[-1]
        if last.is_zero():
            return SeriesReport(kind, tuple(terms), len(terms) - 1)
        nxt = product(alg, last, last) if kind == "derived" else product(alg, whole, last)
        if nxt == last:
            return SeriesReport(kind, tuple(terms), None)
        terms.append(nxt)


def derived_series(alg: LeibnizAlgebra) -> SeriesReport:
    return _series(alg, "derived")


def lower_central_series(alg: LeibnizAlgebra) -> SeriesReport:
    return _series(alg, "lower_central")


def is_nilpotent(alg: LeibnizAlgebra) -> bool:
    return lower_central_series(alg).step is not None


def is_lie(alg: LeibnizAlgebra) -> bool:
    """Skew-symmetric bracket (equivalently ``Leib = 0`` in characteristic != 2)."""
    c = alg.tensor
    return bool(np.all(alg.field.reduce(c + c.transpose(1, 0, 2)) == 0))


def is_abelian(alg: LeibnizAlgebra) -> bool:
    return bool(np.all(alg.tensor == 0))


@dataclass(frozen=True)
class TwoStepReport:
    holds: bool
    reason: str
    pair: tuple[int, int] | None = None

    def __bool__(self):
        return self.holds


def is_two_step(alg: LeibnizAlgebra) -> TwoStepReport:
    """Two-step nilpotency: nonabelian with ``[g, g]`` central.

    A two-step algebra is also checked to be symmetric; failing that is an
    internal inconsistency and raises.
    """
    if is_abelian(alg):
        return TwoStepReport(False, "abelian")
    z = center(alg)
    if not commutator_ideal(alg) <= z:
        i, j = next((i, j) for i, j, v in alg.nonzero_brackets() if v not in z)
        return TwoStepReport(False, "bracket not central", (i, j))
    if not is_symmetric(alg):
        raise AssertionError("two-step nilpotent algebra failed the symmetric Leibniz check")
    return TwoStepReport(True, "commutator ideal is central")


def direct_sum(a: LeibnizAlgebra, b: LeibnizAlgebra) -> LeibnizAlgebra:
    if a.field != b.field:
        raise FieldError(f"direct sum of algebras over {a.field} and {b.field}")
    n, m = a.dim, b.dim
    arr = a.field.zeros((n + m, n + m, n + m))
    arr[:n, :n, :n] = a.tensor
    arr[n:, n:, n:] = b.tensor
    tag = None
    if a.tag is not None or b.tag is not None:
        tag = FamilyTag("DirectSum", {"left": a.tag.to_json() if a.tag else None,
                                      "right": b.tag.to_json() if b.tag else None})
    return LeibnizAlgebra(a.field, arr, tag)


def transport_tensor(field: Field, tensor: np.ndarray, p: Matrix, p_inv: Matrix) -> np.ndarray:
    """``out[i, j] = P [P^-1 e_i, P^-1 e_j]``."""
    q = p_inv.data
    t1 = field.tensordot(q.T, tensor, (1, 0))           # [i, b, k]
    t2 = field.tensordot(t1, q, (1, 0))                 # [i, k, j]
    t2 = t2.transpose(0, 2, 1)
    return field.tensordot(t2, p.data, (2, 1))          # [i, j, l]


def change_basis(alg: LeibnizAlgebra, p: Matrix) -> LeibnizAlgebra:
    """The algebra for which ``p`` is an isomorphism from ``alg``:
    ``[P x, P y]_out = P [x, y]``."""
    if p.field != alg.field:
        raise FieldError("basis change over a different field")
    if p.shape != (alg.dim, alg.dim):
        raise ShapeError(f"basis change matrix {p.shape} for dimension {alg.dim}")
    p_inv = p.inverse()
    return LeibnizAlgebra(alg.field, transport_tensor(alg.field, alg.tensor, p, p_inv))


def invariant_dims(alg: LeibnizAlgebra) -> tuple[int, int, int]:
    return left_center(alg).dim, right_center(alg).dim, commutator_ideal(alg).dim


@dataclass(frozen=True)
class AbelianSplit:
    core: LeibnizAlgebra
    abelian_rank: int
    basis: Matrix

    def __iter__(self):
        return iter((self.core, self.abelian_rank, self.basis))


def split_abelian_factor(alg: LeibnizAlgebra) -> AbelianSplit:
    """Split a two-step algebra with one-dimensional commutator ideal as
    ``core (+) abelian(r)``.

    The central complement is picked greedily from the echelon basis of the
    center, the rest of the core from standard basis vectors; the core basis
    ends with the commutator generator z.  ``basis`` has the core vectors and
    then the central complement as columns, so
    ``change_basis(alg, basis.inverse()) == direct_sum(core, abelian(r))``.
    """
    field, n = alg.field, alg.dim
    comm = commutator_ideal(alg)
    if comm.dim != 1:
        raise AlgebraError(f"split needs dim [g,g] = 1, got {comm.dim}")
    if not is_two_step(alg):
        raise AlgebraError("split needs a two-step nilpotent algebra")
    z = comm.basis[0]
    zc = center(alg)

    def enlarges(chosen: list, v) -> bool:
        span = Subspace.wrap(field, n, np.array(chosen, dtype=field.dtype)) if chosen \
            else Subspace.zero(field, n)
        return v not in span

    complement: list = []
    for v in zc.basis:
        if enlarges([z] + complement, v):
            complement.append(v.copy())
    core_vecs: list = []
    for k in range(n):
        e = field.zeros(n)
        e[k] = field.one
        if enlarges(complement + [z] + core_vecs, e):
            core_vecs.append(e)
    core_vecs.append(z.copy())
    columns = core_vecs + complement
    basis = Matrix.wrap(field, np.array(columns, dtype=field.dtype).T)
    moved = transport_tensor(field, alg.tensor, basis.inverse(), basis)
    t = len(core_vecs)
    core = LeibnizAlgebra(field, moved[:t, :t, :t], FamilyTag("Core", {}))
    return AbelianSplit(core, len(complement), basis)
