"""Isotopisms of Leibniz algebras, the explicit constructions between the
one-dimensional-commutator families and the Heisenberg Lie algebra, and the
isotopism classification of those algebras.

Matrices act on column coordinate vectors throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .exactlin import (DEFAULT_BUDGET, Field, FieldError, Matrix, Polynomial,
                       ShapeError)
from .exactlin.linalg import _value, kernel_basis, rref_array
from .families import glm_algebra, heisenberg_leibniz, heisenberg_lie, kronecker
from .leibniz import (FamilyTag, LeibnizAlgebra, change_basis, commutator_ideal,
                      invariant_dims, is_nilpotent, is_two_step,
                      require_left_leibniz, split_abelian_factor)


class IsotopismError(ValueError):
    def __init__(self, message: str, violation: "IsotopismViolation | None" = None):
        super().__init__(message)
        self.violation = violation


class SingularBlockError(ArithmeticError):
    """A block of the Heisenberg-to-Lie isotopism is singular."""

    def __init__(self, block: str):
        super().__init__(f"{block} singular")
        self.block = block


@dataclass(frozen=True)
class IsotopismTriple:
    """``(f, g, h)`` with ``[f x, g y]_target = h [x, y]_source``."""

    source: LeibnizAlgebra
    target: LeibnizAlgebra
    f: Matrix
    g: Matrix
    h: Matrix
    verified: bool = False

    @property
    def is_left(self) -> bool:
        return self.g == self.h

    @property
    def is_right(self) -> bool:
        return self.f == self.h

    @property
    def is_principal(self) -> bool:
        return self.h == Matrix.identity(self.h.field, self.h.rows)

    @property
    def is_isomorphism(self) -> bool:
        return self.f == self.g == self.h

    def kinds(self) -> list[str]:
        names = [("left", self.is_left), ("right", self.is_right),
                 ("principal", self.is_principal), ("isomorphism", self.is_isomorphism)]
        return [name for name, flag in names if flag]

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "f": self.f.to_json(), "g": self.g.to_json(), "h": self.h.to_json()}


@dataclass(frozen=True)
class IsotopismViolation:
    i: int
    j: int
    residual: tuple

    def to_json(self) -> dict:
        return {"pair": [self.i, self.j], "residual": list(self.residual)}


def _check_shapes(t: IsotopismTriple):
    field = t.source.field
    n = t.source.dim
    if t.target.field != field or any(m.field != field for m in (t.f, t.g, t.h)):
        raise FieldError("isotopism components over different fields")
    if t.target.dim != n or any(m.shape != (n, n) for m in (t.f, t.g, t.h)):
        raise ShapeError("isotopism components of mismatched dimensions")


def _pair_brackets(alg: LeibnizAlgebra, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """``out[i, j] = [f e_i, g e_j]`` in ``alg``."""
    field = alg.field
    left = field.tensordot(f.T, alg.tensor, (1, 0))     # [i, b, k]
    return field.einsum("bj,ibk->ijk", g, left)


def verify_isotopism(t: IsotopismTriple) -> IsotopismViolation | None:
    """Check ``[f e_i, g e_j]_target = h [e_i, e_j]_source`` on all basis pairs.

    Returns the first failing pair, or None.  Singular components raise.
    """
    _check_shapes(t)
    for name, m in (("f", t.f), ("g", t.g), ("h", t.h)):
        if m.det() == 0:
            raise IsotopismError(f"{name} is singular")
    field = t.source.field
    lhs = _pair_brackets(t.target, t.f.data, t.g.data)
    rhs = field.tensordot(t.source.tensor, t.h.data, (2, 1))
    diff = field.reduce(lhs - rhs)
    bad = np.argwhere(np.any(diff != 0, axis=-1))
    if len(bad) == 0:
        return None
    i, j = (int(v) for v in bad[0])
    return IsotopismViolation(i, j, tuple(field.format(_value(field, v)) for v in diff[i, j]))


def require_isotopism(t: IsotopismTriple) -> IsotopismTriple:
    """Verify ``t`` and return it with the verified flag set; raise otherwise."""
    violation = verify_isotopism(t)
    if violation is not None:
        raise IsotopismError(f"not an isotopism: bracket equation fails at basis pair "
                             f"{(violation.i, violation.j)}", violation)
    return replace(t, verified=True)


def transport(alg: LeibnizAlgebra, h: Matrix) -> LeibnizAlgebra:
    """The product ``*`` with ``h(x) * h(y) = h(xy)``, on the same coordinates."""
    out = change_basis(alg, h)
    return LeibnizAlgebra(out.field, out.tensor, FamilyTag("Transport", {}))


def principal_form(t: IsotopismTriple) -> tuple[IsotopismTriple, LeibnizAlgebra]:
    """Reduce a verified isotopism to a principal one.

    With ``* = transport(source, h)``, the triple ``(f h^-1, g h^-1, id)`` is an
    isotopism from ``(target, *)`` to the original target.  An input with
    ``h = id`` comes back unchanged.
    """
    if not t.verified:
        raise IsotopismError("principal_form needs a verified isotopism")
    if t.is_principal:
        return t, t.source
    star = transport(t.source, t.h)
    h_inv = t.h.inverse()
    ident = Matrix.identity(t.h.field, t.h.rows)
    principal = IsotopismTriple(star, t.target, t.f @ h_inv, t.g @ h_inv, ident)
    return require_isotopism(principal), star


def build_ex34(a: Matrix, lam, mu, alpha, beta) -> IsotopismTriple:
    """Principal isotopism ``(f, g, id)`` from the algebra ``glm_algebra(A, lam, mu)``
    onto the 3-dimensional Heisenberg Lie algebra, with
    ``f = blockdiag(A, alpha)`` and ``g = blockdiag(A diag(lam, mu), beta)``."""
    field = a.field
    alpha, beta = field.coerce(alpha), field.coerce(beta)
    if alpha == 0 or beta == 0:
        raise ValueError("alpha and beta must be nonzero")
    source = glm_algebra(a, lam, mu)
    b = a @ Matrix.diag(field, [lam, mu])
    f = Matrix.block_diag(a, Matrix(field, [[alpha]]))
    g = Matrix.block_diag(b, Matrix(field, [[beta]]))
    ident = Matrix.identity(field, 3)
    return require_isotopism(IsotopismTriple(source, heisenberg_lie(field, 1), f, g, ident))


def thm44_kronecker_matrix(field: Field, n: int) -> Matrix:
    """``(x, y, z) -> (x1+x2, ..., x_{n-1}+x_n, x_n, -y1, y1-y2, ..., y_{n-1}-y_n, z)``."""
    dim = 2 * n + 1
    arr = field.zeros((dim, dim))
    one, minus = field.one, field.neg(field.one)
    for i in range(n):
        arr[i, i] = one
        if i + 1 < n:
            arr[i, i + 1] = one
    arr[n, n] = minus
    for k in range(1, n):
        arr[n + k, n + k - 1] = one
        arr[n + k, n + k] = minus
    arr[2 * n, 2 * n] = one
    return Matrix.wrap(field, arr)


def build_thm44_kronecker(field: Field, n: int) -> IsotopismTriple:
    """Left principal isotopism ``(f, id, id)`` from the Kronecker algebra onto the
    Heisenberg Lie algebra of the same dimension."""
    if n < 1:
        raise ValueError("n must be at least 1")
    f = thm44_kronecker_matrix(field, n)
    ident = Matrix.identity(field, 2 * n + 1)
    return require_isotopism(IsotopismTriple(kronecker(field, n), heisenberg_lie(field, n),
                                             f, ident, ident))


def build_thm44_heisenberg(a: Matrix) -> IsotopismTriple:
    """Left principal isotopism ``(f, id, id)`` from the Heisenberg algebra of A onto
    the Heisenberg Lie algebra.

    ``f = blockdiag((I + A)^T, I - A, 1)`` on column vectors, i.e. the block
    matrix ``blockdiag(I + A, I - A^T, 1)`` acting on row vectors.  Raises
    :class:`SingularBlockError` when A has eigenvalue -1 or 1.
    """
    if not a.is_square:
        raise ShapeError("A must be square")
    field = a.field
    n = a.rows
    ident_n = Matrix.identity(field, n)
    plus, minus_t = ident_n + a, ident_n - a.T
    if plus.det() == 0:
        raise SingularBlockError("I+A")
    if minus_t.det() == 0:
        raise SingularBlockError("I−Aᵀ")
    f = Matrix.block_diag(plus.T, minus_t.T, Matrix.identity(field, 1))
    ident = Matrix.identity(field, 2 * n + 1)
    return require_isotopism(IsotopismTriple(heisenberg_leibniz(a), heisenberg_lie(field, n),
                                             f, ident, ident))


@dataclass(frozen=True)
class DetIdentityReport:
    det_plus: object          # det(I + A)
    rhs_plus: object          # (-1)^n f(-1)
    det_minus_t: object       # det(I - A^T)
    rhs_minus_t: object       # f(1)

    @property
    def holds(self) -> bool:
        return self.det_plus == self.rhs_plus and self.det_minus_t == self.rhs_minus_t

    @property
    def singular(self) -> bool:
        return self.det_plus == 0 or self.det_minus_t == 0


def det_identity_check(a: Matrix, f_pow: Polynomial) -> DetIdentityReport:
    """Compare ``det(I + A)`` with ``(-1)^n f(-1)`` and ``det(I - A^T)`` with ``f(1)``,
    the determinants by elimination and the right sides by evaluation."""
    if not a.is_square:
        raise ShapeError("A must be square")
    if f_pow.field != a.field:
        raise FieldError("polynomial and matrix over different fields")
    if f_pow.degree != a.rows:
        raise ShapeError(f"polynomial of degree {f_pow.degree} for a {a.rows} x {a.rows} matrix")
    field = a.field
    n = a.rows
    ident = Matrix.identity(field, n)
    sign = 1 if n % 2 == 0 else -1
    return DetIdentityReport(
        det_plus=(ident + a).det(),
        rhs_plus=field.coerce(sign * f_pow(-1)),
        det_minus_t=(ident - a.T).det(),
        rhs_minus_t=f_pow(1),
    )


def isotopy_invariants(alg: LeibnizAlgebra) -> tuple[int, int, int]:
    """``(dim Z_l, dim Z_r, dim [g, g])``."""
    require_left_leibniz(alg)
    return invariant_dims(alg)


class ClassificationError(ValueError):
    pass


@dataclass(frozen=True)
class ClassVerdict:
    """Isotopism class of a nilpotent algebra with one-dimensional commutator ideal.

    ``kind`` is DieudonneClass, HeisenbergJ1Class or HeisenbergLieIsotopyClass;
    ``invariants`` are ``(dim Z_l, dim Z_r, dim [g,g])`` of the core, whose
    dimension is ``dim``.
    """

    kind: str
    n: int
    abelian_rank: int
    invariants: tuple[int, int, int]
    dim: int

    def to_json(self) -> dict:
        return {"class": self.kind, "n": self.n, "abelian_rank": self.abelian_rank,
                "invariants": list(self.invariants), "dim": self.dim}


def classify_one_dim(alg: LeibnizAlgebra) -> ClassVerdict:
    require_left_leibniz(alg)
    comm = commutator_ideal(alg).dim
    if comm != 1:
        raise ClassificationError(f"dim [g,g] = {comm}, expected 1")
    if not is_nilpotent(alg):
        raise ClassificationError("algebra is not nilpotent")
    if not is_two_step(alg):
        raise AssertionError("nilpotent with one-dimensional commutator ideal but not two-step")
    core, rank, _ = split_abelian_factor(alg)
    t = core.dim
    inv = invariant_dims(core)
    if t < 3:
        raise ClassificationError(f"core of dimension {t} is outside the classification (t >= 3)")
    if t % 2 == 0:
        return ClassVerdict("DieudonneClass", (t - 2) // 2, rank, inv, t)
    zl = inv[0]
    if zl == 2:
        return ClassVerdict("HeisenbergJ1Class", (t - 1) // 2, rank, inv, t)
    if zl == 1:
        return ClassVerdict("HeisenbergLieIsotopyClass", (t - 1) // 2, rank, inv, t)
    raise ClassificationError(f"core has dim Z_l = {zl}; the classification expects 1 or 2")


@dataclass(frozen=True)
class LeftPrincipalReport:
    """Outcome of :func:`solve_left_principal`.

    ``outcome`` is "found", "none" or "inconclusive"; for "none" the
    ``certificate`` says why (inconsistent system, or a determinant that
    vanishes on the whole search grid).
    """

    outcome: str
    triple: IsotopismTriple | None
    certificate: str
    solution_dim: int | None
    scanned: int

    @property
    def found(self) -> bool:
        return self.outcome == "found"


def left_principal_system(src: LeibnizAlgebra, dst: LeibnizAlgebra):
    """Affine solution set of ``[f e_i, e_j]_dst = [e_i, e_j]_src`` in the entries
    of f (variable ``k*n + i`` is ``f[k, i]``): a particular solution and a kernel
    basis, or None when the system is inconsistent."""
    field = src.field
    n = src.dim
    c_dst, c_src = dst.tensor, src.tensor
    rows = []
    rhs = []
    for i in range(n):
        for j in range(n):
            for l in range(n):
                row = field.zeros(n * n)
                for k in range(n):
                    row[k * n + i] = c_dst[k, j, l]
                rows.append(row)
                rhs.append(c_src[i, j, l])
    m = np.array(rows, dtype=field.dtype)
    b = np.array(rhs, dtype=field.dtype).reshape(-1, 1)
    red, pivots = rref_array(field, np.concatenate([m, b], axis=1))
    if n * n in pivots:
        return None
    particular = field.zeros(n * n)
    for r, pc in enumerate(pivots):
        particular[pc] = red[r, n * n]
    return particular, kernel_basis(field, m)


def solve_left_principal(src: LeibnizAlgebra, dst: LeibnizAlgebra,
                         budget: int = DEFAULT_BUDGET) -> LeftPrincipalReport:
    """Decide whether a left principal isotopism ``(f, id, id)`` from src to dst exists.

    The condition is linear in f.  Over GF(p) the affine solution space is
    enumerated when it has at most ``budget`` points.  Over Q each free
    parameter runs over ``0..n``; since ``det f`` has degree at most n in each
    parameter, a determinant that is nonzero somewhere is nonzero on this grid.
    """
    if src.field != dst.field or src.dim != dst.dim:
        raise ShapeError("source and target must share field and dimension")
    field = src.field
    n = src.dim
    system = left_principal_system(src, dst)
    if system is None:
        return LeftPrincipalReport("none", None, "linear system is inconsistent", None, 0)
    particular, kernel = system
    d = len(kernel)
    values = list(field.elements()) if field.is_finite else list(range(n + 1))
    size = len(values) ** d
    if size > budget:
        return LeftPrincipalReport("inconclusive", None,
                                   f"{size} points exceed the budget of {budget}", d, 0)
    ident = Matrix.identity(field, n)
    scanned = 0
    for coeffs in itertools.product(values, repeat=d):
        scanned += 1
        vec = particular.copy()
        for c, kv in zip(coeffs, kernel):
            if c:
                vec = field.reduce(vec + field.coerce(c) * kv)
        f = Matrix.wrap(field, vec.reshape(n, n))
        if f.det() != 0:
            triple = require_isotopism(IsotopismTriple(src, dst, f, ident, ident))
            return LeftPrincipalReport("found", triple, "", d, scanned)
    how = "every point of the solution space" if field.is_finite else \
        f"the grid 0..{n} in each of {d} parameters"
    return LeftPrincipalReport("none", None, f"det f vanishes on {how}", d, scanned)
