"""Pointed racks attached to two-step nilpotent Leibniz algebras.

A polynomial rack lives on the coordinate space of its algebra with unit 0
and product ``x |> y = y + [x, y]``.  Over GF(p) it can be materialized as a
:class:`FiniteRackTable`; points are indexed row-major, first coordinate most
significant, so the unit 0 has index 0.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .exactlin import BudgetExceeded, Field, FieldError, Matrix, ShapeError, Subspace
from .exactlin.linalg import _value
from .families import heisenberg_lie
from .isotopy import IsotopismTriple, require_isotopism
from .leibniz import (AlgebraError, LeibnizAlgebra, bracket, commutator_ideal, is_abelian,
                      is_lie, is_two_step, leibniz_kernel, left_center, product)

TABLE_BUDGET = 3 ** 6


class RackError(ValueError):
    pass


class UnitNotPreserved(RackError):
    def __init__(self, which: str):
        super().__init__(f"{which} does not fix the unit")
        self.which = which


class _CoordinateRack:
    """Shared behaviour of racks whose carrier is a coordinate space."""

    field: Field
    dim: int

    def apply(self, x, y) -> np.ndarray:
        raise NotImplementedError

    def apply_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """``out[a, b] = xs[a] |> ys[b]`` for arrays of points (rows)."""
        raise NotImplementedError

    @property
    def unit(self) -> np.ndarray:
        return self.field.zeros(self.dim)

    def vector(self, x) -> np.ndarray:
        v = x if isinstance(x, np.ndarray) and x.dtype == self.field.dtype \
            else self.field.array(list(x))
        if v.shape != (self.dim,):
            raise ShapeError(f"point with {v.shape[0]} coordinates on a rack of dimension {self.dim}")
        return v


class PolynomialRack(_CoordinateRack):
    """``x |> y = y + [x, y]`` on the coordinates of a two-step (or abelian) algebra."""

    def __init__(self, algebra: LeibnizAlgebra):
        self.algebra = algebra
        self.field = algebra.field
        self.dim = algebra.dim

    def apply(self, x, y) -> np.ndarray:
        x, y = self.vector(x), self.vector(y)
        return self.field.reduce(y + bracket(self.algebra, x, y))

    def apply_many(self, xs, ys):
        f, n = self.field, self.dim
        ad = f.matmul(xs, self.algebra.tensor.reshape(n, n * n)).reshape(-1, n, n)
        moved = f.einsum("bj,ajk->abk", ys, ad)
        return f.reduce(ys[None, :, :] + moved)

    def __repr__(self):
        return f"PolynomialRack({self.algebra!r})"


def rack_from_two_step(alg: LeibnizAlgebra) -> PolynomialRack:
    """Integrate a two-step nilpotent algebra; an abelian one gives the trivial rack."""
    if not is_abelian(alg):
        report = is_two_step(alg)
        if not report:
            raise AlgebraError(f"algebra is not two-step nilpotent: {report.reason}")
    return PolynomialRack(alg)


def rack_apply(r, x, y):
    """``x |> y``: coordinates for coordinate racks, indices for tables."""
    if isinstance(r, FiniteRackTable):
        return int(r.table[x, y])
    return r.apply(x, y)


class HeisenbergConjRack(_CoordinateRack):
    """Conjugation rack of the Heisenberg group on ``(x, y, z)`` with
    ``(x, y, z)(x', y', z') = (x + x', y + y', z + z' + x . y')``."""

    def __init__(self, field: Field, n: int):
        if n < 1:
            raise ValueError("n must be at least 1")
        self.field = field
        self.n = n
        self.dim = 2 * n + 1

    def multiply(self, g, h) -> np.ndarray:
        f, n = self.field, self.n
        g, h = self.vector(g), self.vector(h)
        out = f.reduce(g + h)
        out[2 * n] = f.reduce(out[2 * n] + f.reduce(g[:n] @ h[n:2 * n]))
        return out

    def inverse(self, g) -> np.ndarray:
        f, n = self.field, self.n
        g = self.vector(g)
        out = f.reduce(-g)
        out[2 * n] = f.reduce(out[2 * n] + f.reduce(g[:n] @ g[n:2 * n]))
        return out

    def apply(self, x, y) -> np.ndarray:
        return self.multiply(self.multiply(x, y), self.inverse(x))

    def apply_many(self, xs, ys):
        f, n = self.field, self.n
        a, b = xs[:, None, :], ys[None, :, :]
        gh = f.reduce(a + b)
        gh_z = f.reduce(gh[..., 2 * n] + f.einsum("ai,bi->ab", xs[:, :n], ys[:, n:2 * n]))
        inv = f.reduce(-xs)
        inv_z = f.reduce(inv[:, 2 * n] + f.einsum("ai,ai->a", xs[:, :n], xs[:, n:2 * n]))
        out = f.reduce(gh + inv[:, None, :])
        cross = f.einsum("abi,ai->ab", gh[..., :n], inv[:, n:2 * n])
        out[..., 2 * n] = f.reduce(gh_z + inv_z[:, None] + cross)
        return out

    def __repr__(self):
        return f"HeisenbergConjRack(n={self.n}, {self.field})"


def heisenberg_conj_rack(field: Field, n: int) -> HeisenbergConjRack:
    return HeisenbergConjRack(field, n)


# -- finite tables -----------------------------------------------------------

def rack_points(p: int, dim: int) -> np.ndarray:
    """All of ``GF(p)^dim`` in row-major order, first coordinate most significant."""
    return np.array(list(itertools.product(range(p), repeat=dim)), dtype=np.int64).reshape(-1, dim)


def point_index(p: int, coords) -> int:
    idx = 0
    for c in coords:
        idx = idx * p + int(c) % p
    return idx


@dataclass(frozen=True, eq=False)
class FiniteRackTable:
    """An m x m operation table ``table[x, y] = x |> y`` on element indices."""

    order: int
    table: np.ndarray
    unit: int = 0

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        if table.shape != (self.order, self.order):
            raise ShapeError(f"table shape {table.shape} for order {self.order}")
        if self.order and (table.min() < 0 or table.max() >= self.order):
            raise RackError("table entries out of range")
        if not 0 <= self.unit < self.order:
            raise RackError("unit index out of range")
        table = table.copy()
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    def __eq__(self, other):
        if not isinstance(other, FiniteRackTable):
            return NotImplemented
        return self.order == other.order and self.unit == other.unit \
            and bool(np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.order, self.unit, self.table.tobytes()))

    def to_json(self) -> dict:
        return {"order": self.order, "unit": self.unit, "table": self.table.tolist()}

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteRackTable":
        try:
            return cls(int(data["order"]), np.array(data["table"], dtype=np.int64),
                       int(data.get("unit", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise RackError(f"malformed rack table JSON: {exc}") from exc


def finite_rack_table(r: _CoordinateRack, budget: int = TABLE_BUDGET) -> FiniteRackTable:
    if not r.field.is_finite:
        raise FieldError("rack tables need a finite field")
    p = r.field.p
    m = p ** r.dim
    if m > budget:
        raise BudgetExceeded(m, budget, "points")
    pts = rack_points(p, r.dim)
    weights = p ** np.arange(r.dim - 1, -1, -1, dtype=np.int64)
    table = np.empty((m, m), dtype=np.int64)
    step = max(1, 200_000 // (m * r.dim))
    for lo in range(0, m, step):
        table[lo:lo + step] = r.apply_many(pts[lo:lo + step], pts) @ weights
    return FiniteRackTable(m, table, 0)


# -- axioms ------------------------------------------------------------------

@dataclass(frozen=True)
class RackViolation:
    """``kind`` is autodistributivity, unit, bijectivity or certificate."""

    kind: str
    elements: tuple
    detail: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "elements": list(self.elements), "detail": self.detail}


@dataclass(frozen=True)
class RackCheck:
    violation: RackViolation | None
    exhaustive: bool
    triples: int

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self):
        return self.ok


def _autodistributive_range(table: np.ndarray, lo: int, hi: int):
    for x in range(lo, hi):
        tx = table[x]
        lhs = tx[table]                    # x |> (y |> z)
        rhs = table[np.ix_(tx, tx)]        # (x |> y) |> (x |> z)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            y, z = bad[0]
            return x, int(y), int(z)
    return None


def _check_table(t: FiniteRackTable, jobs: int = 1) -> RackViolation | None:
    m, table, u = t.order, t.table, t.unit
    ident = np.arange(m)
    if not np.array_equal(table[u], ident):
        y = int(np.argmax(table[u] != ident))
        return RackViolation("unit", (u, y), "unit |> y != y")
    if not np.all(table[:, u] == u):
        x = int(np.argmax(table[:, u] != u))
        return RackViolation("unit", (x, u), "x |> unit != unit")
    for x in range(m):
        if len(np.unique(table[x])) != m:
            return RackViolation("bijectivity", (x,), "left translation is not a bijection")
    if jobs > 1 and m > 1:
        bounds = [m * i // jobs for i in range(jobs + 1)]
        with ProcessPoolExecutor(jobs) as pool:
            futures = [pool.submit(_autodistributive_range, table, bounds[i], bounds[i + 1])
                       for i in range(jobs)]
            hits = [f.result() for f in futures]
        hits = [h for h in hits if h is not None]
        hit = min(hits) if hits else None
    else:
        hit = _autodistributive_range(table, 0, m)
    if hit is not None:
        return RackViolation("autodistributivity", hit, "x |> (y |> z) != (x |> y) |> (x |> z)")
    return None


def _certificate(alg: LeibnizAlgebra) -> RackViolation | None:
    full = Subspace.full(alg.field, alg.dim)
    comm = commutator_ideal(alg)
    if not product(alg, full, comm).is_zero():
        return RackViolation("certificate", (), "[g, [g, g]] != 0")
    if not product(alg, comm, full).is_zero():
        return RackViolation("certificate", (), "[[g, g], g] != 0")
    return None


def check_rack_axioms(r, budget: int = TABLE_BUDGET, jobs: int = 1) -> RackCheck:
    """Rack axioms with the unit laws.

    Polynomial racks get the symbolic certificate and, over GF(p) with at most
    ``budget`` points, an exhaustive check of every triple as well.  Tables are
    checked exhaustively.
    """
    if isinstance(r, FiniteRackTable):
        return RackCheck(_check_table(r, jobs), True, r.order ** 3)
    symbolic = _certificate(r.algebra) if isinstance(r, PolynomialRack) else None
    field = r.field
    if not field.is_finite or field.p ** r.dim > budget:
        return RackCheck(symbolic, False, 0)
    table = finite_rack_table(r, budget)
    exhaustive = _check_table(table, jobs)
    if isinstance(r, PolynomialRack) and (symbolic is None) != (exhaustive is None):
        raise AssertionError("symbolic rack certificate disagrees with the exhaustive check")
    return RackCheck(symbolic or exhaustive, True, table.order ** 3)


def quandle_witness(r):
    """A point with ``x |> x != x``, or None for a quandle."""
    if isinstance(r, FiniteRackTable):
        bad = np.flatnonzero(r.table[np.arange(r.order), np.arange(r.order)] != np.arange(r.order))
        return int(bad[0]) if len(bad) else None
    n, f = r.dim, r.field
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        x = f.zeros(n)
        x[i] = f.one
        x[j] = f.reduce(x[j] + f.one)
        if np.any(r.apply(x, x) != x):
            return x
    return None


def is_quandle(r) -> bool:
    """For polynomial racks: the Leibniz kernel vanishes, and this agrees with the
    algebra being Lie."""
    if isinstance(r, PolynomialRack):
        answer = leibniz_kernel(r.algebra).is_zero()
        if answer != is_lie(r.algebra):
            raise AssertionError("Leibniz kernel and Lie test disagree")
        if answer != (quandle_witness(r) is None):
            raise AssertionError("diagonal probe disagrees with the Leibniz kernel")
        return answer
    return quandle_witness(r) is None


def rack_center(r):
    """Points acting trivially: a subspace for polynomial racks, sorted indices for tables."""
    if isinstance(r, FiniteRackTable):
        ident = np.arange(r.order)
        return [x for x in range(r.order) if np.array_equal(r.table[x], ident)]
    if isinstance(r, PolynomialRack):
        return left_center(r.algebra)
    return left_center(tangent_algebra(r))


def tangent_algebra(r: _CoordinateRack) -> LeibnizAlgebra:
    """Bracket recovered as ``[e_i, e_j] = e_i |> e_j - e_j``."""
    f, n = r.field, r.dim
    arr = f.zeros((n, n, n))
    basis = np.eye(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            ej = f.array(basis[j].tolist())
            arr[i, j] = f.reduce(r.apply(f.array(basis[i].tolist()), ej) - ej)
    tag = r.algebra.tag if isinstance(r, PolynomialRack) else None
    return LeibnizAlgebra(f, arr, tag)


@dataclass(frozen=True)
class ConjComparison:
    pairs: int
    mismatch: tuple | None

    @property
    def equal(self) -> bool:
        return self.mismatch is None


def compare_conj_rack(field: Field, n: int, grid: Sequence[int] = range(-2, 3),
                      budget: int = TABLE_BUDGET) -> ConjComparison:
    """Compare the conjugation rack with the rack of the Heisenberg Lie algebra:
    the full tables over GF(p), all pairs of points of ``grid^(2n+1)`` over Q."""
    conj = HeisenbergConjRack(field, n)
    lie = rack_from_two_step(heisenberg_lie(field, n))
    if field.is_finite:
        a, b = finite_rack_table(conj, budget), finite_rack_table(lie, budget)
        bad = np.argwhere(a.table != b.table)
        return ConjComparison(a.order ** 2, tuple(int(v) for v in bad[0]) if len(bad) else None)
    pts = [field.array(list(c)) for c in itertools.product(grid, repeat=conj.dim)]
    pairs = 0
    for x in pts:
        for y in pts:
            pairs += 1
            if np.any(conj.apply(x, y) != lie.apply(x, y)):
                return ConjComparison(pairs, (tuple(map(str, x)), tuple(map(str, y))))
    return ConjComparison(pairs, None)


# -- isotopisms --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RackTriple:
    """``f(x) |>_Y g(y) = h(x |> y)``.  Components are matrices for coordinate
    racks and index permutations for tables."""

    f: object
    g: object
    h: object

    @property
    def linear(self) -> bool:
        return all(isinstance(m, Matrix) for m in (self.f, self.g, self.h))

    def __eq__(self, other):
        if not isinstance(other, RackTriple):
            return NotImplemented
        return all(_same(a, b) for a, b in zip((self.f, self.g, self.h), (other.f, other.g, other.h)))

    def __hash__(self):
        return hash(tuple(m if isinstance(m, Matrix) else tuple(np.asarray(m).tolist())
                          for m in (self.f, self.g, self.h)))

    def to_json(self) -> dict:
        return {k: (m.to_json() if isinstance(m, Matrix) else [int(v) for v in m])
                for k, m in (("f", self.f), ("g", self.g), ("h", self.h))}


def _same(a, b) -> bool:
    if isinstance(a, Matrix) or isinstance(b, Matrix):
        return a == b
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


@dataclass(frozen=True)
class RackIsotopismViolation:
    x: tuple
    y: tuple
    lhs: tuple
    rhs: tuple

    def to_json(self) -> dict:
        return {"x": list(self.x), "y": list(self.y), "lhs": list(self.lhs), "rhs": list(self.rhs)}


def spanning_points(field: Field, n: int) -> list[np.ndarray]:
    """``0``, every ``e_i`` and every ``e_i + e_j`` with ``i < j``."""
    pts = [field.zeros(n)]
    for i in range(n):
        v = field.zeros(n)
        v[i] = field.one
        pts.append(v)
    for i, j in itertools.combinations(range(n), 2):
        v = field.zeros(n)
        v[i] = v[j] = field.one
        pts.append(v)
    return pts


def _fmt(field: Field, v) -> tuple:
    return tuple(field.format(_value(field, c)) for c in v)


def verify_rack_isotopism(x_rack, y_rack, t: RackTriple,
                          exhaustive: bool = False) -> RackIsotopismViolation | None:
    """Check ``f(x) |>_Y g(y) = h(x |> y)``.

    Linear triples on coordinate racks are checked on all pairs from
    :func:`spanning_points`: both sides are sums of a linear term in y and a
    bilinear term in (x, y), so those pairs determine them.  ``exhaustive``
    checks every pair through the tables instead (GF(p) only).
    """
    if isinstance(x_rack, FiniteRackTable):
        return _verify_tables(x_rack, y_rack, t)
    if not t.linear:
        raise RackError("coordinate racks take matrix components")
    field, n = x_rack.field, x_rack.dim
    if y_rack.field != field or y_rack.dim != n:
        raise ShapeError("racks of different field or dimension")
    for name, m in (("f", t.f), ("g", t.g), ("h", t.h)):
        if m.shape != (n, n) or m.field != field:
            raise ShapeError(f"{name} has the wrong shape or field")
        if m.det() == 0:
            raise RackError(f"{name} is not a bijection")
    if exhaustive:
        tx, ty = finite_rack_table(x_rack), finite_rack_table(y_rack)
        p = field.p
        pts = rack_points(p, n)
        weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
        perms = [field.reduce(pts @ m.data.T) @ weights for m in (t.f, t.g, t.h)]
        return _verify_tables(tx, ty, RackTriple(*perms))
    pts = np.array(spanning_points(field, n), dtype=field.dtype)
    lhs = y_rack.apply_many(field.matmul(pts, t.f.data.T), field.matmul(pts, t.g.data.T))
    moved = x_rack.apply_many(pts, pts)
    rhs = field.matmul(moved.reshape(-1, n), t.h.data.T).reshape(moved.shape)
    bad = np.argwhere(np.any(lhs != rhs, axis=-1))
    if len(bad) == 0:
        return None
    a, b = (int(v) for v in bad[0])
    return RackIsotopismViolation(_fmt(field, pts[a]), _fmt(field, pts[b]),
                                  _fmt(field, lhs[a, b]), _fmt(field, rhs[a, b]))


def _verify_tables(x_rack: FiniteRackTable, y_rack: FiniteRackTable, t: RackTriple):
    if not isinstance(y_rack, FiniteRackTable) or y_rack.order != x_rack.order:
        raise ShapeError("rack tables of different order")
    m = x_rack.order
    comps = []
    for name, perm in (("f", t.f), ("g", t.g), ("h", t.h)):
        perm = np.asarray(perm, dtype=np.int64)
        if perm.shape != (m,) or len(np.unique(perm)) != m or perm.min() < 0 or perm.max() >= m:
            raise RackError(f"{name} is not a permutation of the carrier")
        if perm[x_rack.unit] != y_rack.unit:
            raise UnitNotPreserved(name)
        comps.append(perm)
    f, g, h = comps
    lhs = y_rack.table[f[:, None], g[None, :]]
    rhs = h[x_rack.table]
    bad = np.argwhere(lhs != rhs)
    if len(bad) == 0:
        return None
    a, b = (int(v) for v in bad[0])
    return RackIsotopismViolation((a,), (b,), (int(lhs[a, b]),), (int(rhs[a, b]),))


def lift_algebra_isotopism(t: IsotopismTriple) -> RackTriple:
    """A verified left isotopism ``(f, g, g)`` of two-step algebras is a rack
    isotopism of their racks with the same matrices."""
    if not t.verified:
        raise RackError("lift needs a verified algebra isotopism")
    if not t.is_left:
        raise RackError("lift needs a left isotopism (g = h)")
    x_rack, y_rack = rack_from_two_step(t.source), rack_from_two_step(t.target)
    out = RackTriple(t.f, t.g, t.h)
    violation = verify_rack_isotopism(x_rack, y_rack, out)
    if violation is not None:
        raise AssertionError(f"lifted triple fails on the racks at {violation}")
    return out


def descend_rack_isotopism(x_rack, y_rack, t: RackTriple) -> IsotopismTriple:
    """Read a linear rack isotopism as a left isotopism of the tangent algebras.

    ``g = h`` follows from evaluating at the unit; a verified triple with
    ``g != h`` is an internal inconsistency.
    """
    if not t.linear:
        raise RackError("only linear rack isotopisms descend to the algebras")
    violation = verify_rack_isotopism(x_rack, y_rack, t)
    if violation is not None:
        raise RackError(f"not a rack isotopism: fails at {violation}")
    if t.g != t.h:
        raise AssertionError("rack isotopism with g != h")
    return require_isotopism(IsotopismTriple(tangent_algebra(x_rack), tangent_algebra(y_rack),
                                             t.f, t.g, t.h))
