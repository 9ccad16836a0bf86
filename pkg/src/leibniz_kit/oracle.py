"""Finite-field brute-force searches for isomorphisms and isotopisms.

Witnesses are canonical: the least one in row-major lexicographic order of
matrix entries (for triples, f first, then g, then h), so that reports do not
depend on the search strategy or on the number of workers.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .exactlin import (DEFAULT_BUDGET, GF, BudgetExceeded, FieldError, Matrix, ShapeError,
                       gl_order, invertible_completions, iter_rows, partition)
from .exactlin.linalg import kernel_basis, rref_array
from .isotopy import IsotopismTriple, require_isotopism
from .leibniz import LeibnizAlgebra, commutator_ideal, invariant_dims
from .racks import FiniteRackTable, RackTriple, rack_points, verify_rack_isotopism

WITNESS = "witness"
EXHAUSTED = "exhausted_none"
BUDGET = "inconclusive_budget"
INVARIANTS = "invariant_mismatch"


@dataclass(frozen=True)
class SearchReport:
    """``scanned`` counts candidates accounted for; after a complete scan it
    equals ``total``, the closed-form size of the searched set."""

    outcome: str
    witness: object = None
    scanned: int = 0
    elapsed_ms: int = 0
    total: int | None = None
    reason: str = ""
    extra: dict = dc_field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.outcome == WITNESS

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "scanned": self.scanned, "elapsed_ms": self.elapsed_ms}
        if self.witness is not None:
            w = self.witness
            out["witness"] = ({"T": w.f.to_json()} if self.extra.get("kind") == "isomorphism"
                              else w.to_json() if isinstance(w, RackTriple)
                              else {"f": w.f.to_json(), "g": w.g.to_json(), "h": w.h.to_json()})
        if self.total is not None:
            out["total"] = self.total
        if self.reason:
            out["reason"] = self.reason
        return out


class _OverBudget(Exception):
    pass


def _ms(start: float) -> int:
    return int((time.perf_counter() - start) * 1000)


def _require_gf(*algs: LeibnizAlgebra) -> int:
    field = algs[0].field
    if not field.is_finite:
        raise FieldError("oracle searches run over GF(p) only")
    for alg in algs[1:]:
        if alg.field != field:
            raise FieldError("algebras over different fields")
        if alg.dim != algs[0].dim:
            raise ShapeError("algebras of different dimension")
    return field.p


def _int_tensor(alg: LeibnizAlgebra) -> np.ndarray:
    return np.asarray(alg.tensor, dtype=np.int64)


def _inverse_table(p: int) -> np.ndarray:
    return np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)


def batch_rref(arr: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of a stack of matrices over GF(p).

    Returns the reduced stack and a boolean ``(batch, cols)`` pivot mask.
    """
    a = np.array(arr, dtype=np.int64) % p
    nb, rows, cols = a.shape
    inv = _inverse_table(p)
    row = np.zeros(nb, dtype=np.int64)
    pivots = np.zeros((nb, cols), dtype=bool)
    ridx = np.arange(rows)
    for c in range(cols):
        cand = (a[:, :, c] != 0) & (ridx[None, :] >= row[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.flatnonzero(has)
        r0 = row[b]
        pr = np.argmax(cand[b], axis=1)
        top, other = a[b, r0].copy(), a[b, pr].copy()
        a[b, pr] = top
        a[b, r0] = other
        a[b, r0] = (a[b, r0] * inv[a[b, r0, c]][:, None]) % p
        factors = a[b, :, c].copy()
        factors[np.arange(len(b)), r0] = 0
        a[b] = (a[b] - factors[:, :, None] * a[b, r0][:, None, :]) % p
        pivots[b, c] = True
        row[b] += 1
    return a, pivots


def batch_invertible(mats: np.ndarray, p: int) -> np.ndarray:
    if len(mats) == 0:
        return np.zeros(0, dtype=bool)
    return batch_rref(mats, p)[1].all(axis=1)


def _lex_key(m: Matrix) -> tuple:
    return tuple(int(v) for v in m.data.ravel())


# -- isomorphisms ------------------------------------------------------------

@dataclass
class _IsoProblem:
    p: int
    n: int
    ca: np.ndarray
    cb: np.ndarray
    order: list
    pair_checks: list          # per depth: [(i, j, coeffs)]
    comm_checks: list          # per depth: [coeffs of a commutator vector]
    ann_b: np.ndarray
    points: np.ndarray
    budget: int


def _iso_problem(a: LeibnizAlgebra, b: LeibnizAlgebra, budget: int) -> _IsoProblem:
    p, n = a.field.p, a.dim
    ca, cb = _int_tensor(a), _int_tensor(b)
    comm_a = [np.asarray(v, dtype=np.int64) for v in commutator_ideal(a).basis]
    comm_cols = sorted({int(k) for v in comm_a for k in np.flatnonzero(v)})
    order = comm_cols + [c for c in range(n) if c not in comm_cols]
    pos = {c: k for k, c in enumerate(order)}
    pair_checks: list = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            need = {i, j} | {int(k) for k in np.flatnonzero(ca[i, j])}
            pair_checks[max(pos[c] for c in need)].append((i, j, ca[i, j]))
    comm_checks: list = [[] for _ in range(n)]
    for v in comm_a:
        comm_checks[max(pos[int(k)] for k in np.flatnonzero(v))].append(v)
    comm_b = commutator_ideal(b)
    if comm_b.is_zero():
        ann = np.eye(n, dtype=np.int64)
    else:
        ann = np.asarray(kernel_basis(b.field, comm_b.basis), dtype=np.int64).reshape(-1, n)
    return _IsoProblem(p, n, ca, cb, order, pair_checks, comm_checks, ann,
                       rack_points(p, n), budget)


def _span_indices(prob: _IsoProblem, cols: list) -> np.ndarray:
    p, n = prob.p, prob.n
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    if not cols:
        return np.zeros(1, dtype=np.int64)
    basis = np.array(cols, dtype=np.int64)
    coeffs = rack_points(p, len(cols))
    return ((coeffs @ basis) % p) @ weights


def _iso_filter(prob: _IsoProblem, depth: int, assigned: dict, cand: np.ndarray) -> np.ndarray:
    """Mask of candidates for column ``order[depth]`` passing every check that
    becomes decidable at this depth."""
    p, n = prob.p, prob.n
    col = prob.order[depth]
    ok = np.ones(len(cand), dtype=bool)

    def column(k):
        return cand if k == col else np.broadcast_to(assigned[k], cand.shape)

    for v in prob.comm_checks[depth]:
        w = sum(int(v[k]) * column(k) for k in np.flatnonzero(v)) % p
        ok &= ~np.any((w @ prob.ann_b.T) % p, axis=1)
    for i, j, coeffs in prob.pair_checks[depth]:
        u, v = column(i), column(j)
        left = (u @ prob.cb.reshape(n, n * n)) % p
        lhs = np.einsum("at,atk->ak", v, left.reshape(-1, n, n)) % p
        rhs = np.zeros_like(lhs)
        for k in np.flatnonzero(coeffs):
            rhs = (rhs + int(coeffs[k]) * column(k)) % p
        ok &= np.all(lhs == rhs, axis=1)
    return ok


def _iso_descend(prob: _IsoProblem, depth: int, assigned: dict, firsts=None):
    """Depth-first search below a prefix; returns (solutions, scanned, visited)."""
    p, n = prob.p, prob.n
    solutions, scanned, visited = [], 0, 0
    if firsts is None:
        span = _span_indices(prob, list(assigned.values()))
        free = ~np.isin(np.arange(len(prob.points)), span)
        cand = prob.points[free]
    else:
        cand = firsts
    visited += len(cand)
    if visited > prob.budget:
        raise _OverBudget
    ok = _iso_filter(prob, depth, assigned, cand)
    scanned += int((~ok).sum()) * invertible_completions(p, n, depth + 1)
    col = prob.order[depth]
    for vec in cand[ok]:
        assigned[col] = vec
        if depth + 1 == n:
            solutions.append(np.array([assigned[c] for c in range(n)]).T)
            scanned += 1
        else:
            s, c, v = _iso_descend(prob, depth + 1, assigned)
            solutions.extend(s)
            scanned += c
            visited += v
            if visited > prob.budget:
                raise _OverBudget
        del assigned[col]
    return solutions, scanned, visited


def _iso_worker(prob: _IsoProblem, firsts: np.ndarray):
    try:
        return _iso_descend(prob, 0, {}, firsts)
    except _OverBudget:
        return None


def search_isomorphism(a: LeibnizAlgebra, b: LeibnizAlgebra, budget: int = DEFAULT_BUDGET,
                       jobs: int = 1, quick_reject: bool = True) -> SearchReport:
    """Least invertible T with ``[T x, T y]_b = T [x, y]_a``.

    Columns of T are chosen one at a time, those meeting the commutator ideal
    of ``a`` first (their images must lie in ``[b, b]``), and every bracket
    equation is tested as soon as the columns it involves are fixed.  A pruned
    prefix accounts for all of its invertible completions, so a complete scan
    reports ``scanned == |GL_n|``.  ``budget`` caps the number of candidate
    columns examined.
    """
    start = time.perf_counter()
    p = _require_gf(a, b)
    n = a.dim
    total = gl_order(p, n)
    extra = {"kind": "isomorphism"}
    if quick_reject:
        ia, ib = invariant_dims(a), invariant_dims(b)
        if ia != ib:
            return SearchReport(INVARIANTS, None, 0, _ms(start), total,
                                f"invariant dims {list(ia)} != {list(ib)}", extra)
    prob = _iso_problem(a, b, budget)
    firsts = prob.points[1:]
    chunks = [c for c in np.array_split(firsts, max(1, jobs)) if len(c)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_iso_worker, [prob] * len(chunks), chunks))
    else:
        parts = [_iso_worker(prob, c) for c in chunks]
    if any(part is None for part in parts):
        return SearchReport(BUDGET, None, 0, _ms(start), total,
                            f"more than {budget} candidate columns", extra)
    solutions = [s for part in parts for s in part[0]]
    scanned = sum(part[1] for part in parts)
    if scanned != total:
        raise AssertionError(f"scan accounted for {scanned} of {total} matrices")
    if not solutions:
        return SearchReport(EXHAUSTED, None, scanned, _ms(start), total, "", extra)
    field = a.field
    best = min((Matrix(field, s) for s in solutions), key=_lex_key)
    witness = require_isotopism(IsotopismTriple(a, b, best, best, best))
    extra["solutions"] = len(solutions)
    return SearchReport(WITNESS, witness, scanned, _ms(start), total, "", extra)


# -- principal isotopisms ----------------------------------------------------

def _f_stream(p: int, n: int, lo: int, hi: int):
    return iter_rows(p, n, True, (lo, hi))


def _least_invertible_g(p: int, n: int, reduced: np.ndarray, pivots: np.ndarray, cap: int):
    """Least invertible g solving one consistent system ``M g = R`` in reduced form."""
    piv_cols = [c for c in range(n) if pivots[c]]
    g0 = np.zeros((n, n), dtype=np.int64)
    for r, c in enumerate(piv_cols):
        g0[c] = reduced[r, n:]
    m = reduced[:len(piv_cols), :n]
    field = GF(p)
    kern = np.asarray(kernel_basis(field, m), dtype=np.int64).reshape(-1, n)
    if len(kern):
        kern, _ = rref_array(field, kern)
        kern = np.asarray(kern, dtype=np.int64)
    q = [int(np.flatnonzero(v)[0]) for v in kern]
    for t, v in enumerate(kern):
        g0 = (g0 - np.outer(v, g0[q[t]])) % p
    keys = sorted((q[t], j, t) for t in range(len(kern)) for j in range(n))
    count = p ** len(keys)
    if count > cap:
        raise _OverBudget
    combos = rack_points(p, len(keys)) if keys else np.zeros((1, 0), dtype=np.int64)
    step = 4096
    for lo in range(0, len(combos), step):
        lam = combos[lo:lo + step]
        gs = np.broadcast_to(g0, (len(lam), n, n)).copy()
        for col, (_, j, t) in enumerate(keys):
            gs[:, :, j] += lam[:, col][:, None] * kern[t][None, :]
        gs %= p
        inv = batch_invertible(gs, p)
        if inv.any():
            return gs[int(np.argmax(inv))], lo + int(np.argmax(inv)) + 1
    return None, count


def _principal_range(p, n, ca, cb, lo, hi, left_only, cap):
    """Scan f with first row value in ``[lo, hi)``; stop at the first witness."""
    rhs = ca.transpose(0, 2, 1).reshape(n * n, n)
    scanned, visited = 0, 0
    stream = _f_stream(p, n, lo, hi)
    while True:
        chunk = list(itertools.islice(stream, 2048))
        if not chunk:
            return None, scanned, visited
        fs = np.array(chunk, dtype=np.int64)
        lmap = np.einsum("nai,alk->nilk", fs, cb) % p          # [f e_i, e_l]_b
        if left_only:
            good = np.all(lmap == ca[None], axis=(1, 2, 3))
            if good.any():
                k = int(np.argmax(good))
                return (fs[k], np.eye(n, dtype=np.int64)), scanned + k + 1, visited
            scanned += len(fs)
            continue
        mats = lmap.transpose(0, 1, 3, 2).reshape(len(fs), n * n, n)
        aug = np.concatenate([mats, np.broadcast_to(rhs, mats.shape)], axis=2)
        reduced, pivots = batch_rref(aug, p)
        consistent = ~pivots[:, n:].any(axis=1)
        for k in np.flatnonzero(consistent):
            g, tried = _least_invertible_g(p, n, reduced[k], pivots[k], cap)
            visited += tried
            if visited > cap:
                raise _OverBudget
            if g is not None:
                return (fs[k], g), scanned + int(k) + 1, visited
        scanned += len(fs)


def _principal_worker(args):
    try:
        return _principal_range(*args)
    except _OverBudget:
        return None


def search_principal_isotopism(a: LeibnizAlgebra, b: LeibnizAlgebra,
                               budget: int = DEFAULT_BUDGET, jobs: int = 1,
                               left_only: bool = False) -> SearchReport:
    """Least ``(f, g)`` with ``[f x, g y]_b = [x, y]_a``.

    Invertible f are enumerated in lexicographic order; for each, the
    condition is linear in g and is solved exactly, and the least invertible
    g of the solution set is taken.  ``left_only`` restricts to ``g = id``.
    ``scanned`` counts the f examined.
    """
    start = time.perf_counter()
    p = _require_gf(a, b)
    n = a.dim
    total = gl_order(p, n)
    extra = {"kind": "left_principal" if left_only else "principal"}
    if p ** (n * n) > budget:
        return SearchReport(BUDGET, None, 0, _ms(start), total,
                            f"{p ** (n * n)} matrices exceed the budget of {budget}", extra)
    ca, cb = _int_tensor(a), _int_tensor(b)
    ranges = partition(p, n, max(1, jobs))
    args = [(p, n, ca, cb, lo, hi, left_only, budget) for lo, hi in ranges]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_principal_worker, args))
    else:
        parts = []
        for arg in args:
            parts.append(_principal_worker(arg))
            if parts[-1] is None or parts[-1][0] is not None:
                break
    if any(part is None for part in parts):
        return SearchReport(BUDGET, None, sum(x[1] for x in parts if x), _ms(start), total,
                            f"more than {budget} g candidates", extra)
    # ranges before the first hit were scanned completely; later ones do not count
    first = next((k for k, part in enumerate(parts) if part[0] is not None), len(parts) - 1)
    scanned = sum(part[1] for part in parts[:first + 1])
    hits = [part[0] for part in parts if part[0] is not None]
    if not hits:
        if scanned != total:
            raise AssertionError(f"scan covered {scanned} of {total} matrices")
        return SearchReport(EXHAUSTED, None, scanned, _ms(start), total, "", extra)
    field = a.field
    f, g = hits[0]          # ranges are ordered, so the first hit is the least
    ident = Matrix.identity(field, n)
    witness = require_isotopism(IsotopismTriple(a, b, Matrix(field, f), Matrix(field, g), ident))
    return SearchReport(WITNESS, witness, scanned, _ms(start), total, "", extra)


# -- rack isotopisms ---------------------------------------------------------

def _dimension_of(order: int, p: int) -> int:
    d, m = 0, 1
    while m < order:
        m *= p
        d += 1
    if m != order:
        raise ShapeError(f"order {order} is not a power of {p}")
    return d


def _linear_rack_search(x: FiniteRackTable, y: FiniteRackTable, p: int, budget: int):
    d = _dimension_of(x.order, p)
    total = gl_order(p, d)
    if p ** (d * d) > budget:
        raise BudgetExceeded(p ** (d * d), budget)
    pts = rack_points(p, d)
    weights = p ** np.arange(d - 1, -1, -1, dtype=np.int64)
    basis_idx = [int(p ** (d - 1 - i)) for i in range(d)]
    witnesses = []
    scanned = 0
    for rows in iter_rows(p, d, True):
        scanned += 1
        g = np.array(rows, dtype=np.int64)
        gperm = ((pts @ g.T) % p) @ weights
        yg = y.table[:, gperm]
        options = []
        for bi in basis_idx:
            target = gperm[x.table[bi]]
            options.append(np.flatnonzero(np.all(yg == target[None, :], axis=1)))
        if any(len(o) == 0 for o in options):
            continue
        combos = np.array(list(itertools.product(*options)), dtype=np.int64)
        fs = pts[combos].transpose(0, 2, 1)                  # columns f(e_i)
        fs = fs[batch_invertible(fs, p)]
        if len(fs) == 0:
            continue
        fperms = ((pts @ fs.transpose(0, 2, 1)) % p) @ weights
        lhs = y.table[fperms[:, :, None], gperm[None, None, :]]
        good = np.all(lhs == gperm[x.table][None], axis=(1, 2))
        witnesses.extend((f, g) for f in fs[good])
    return witnesses, scanned, total


def _perm_rack_search(x: FiniteRackTable, y: FiniteRackTable, budget: int):
    """Backtracking over unit-fixing g, f with propagation of
    ``g(x |> y) = f(x) |> g(y)``; g is branched first."""
    m = x.order
    ux, uy = x.unit, y.unit
    nodes = 0

    def cycle_type(row):
        seen, out = set(), []
        for s in range(len(row)):
            if s in seen:
                continue
            length, t = 0, s
            while t not in seen:
                seen.add(t)
                t = int(row[t])
                length += 1
            out.append(length)
        return tuple(sorted(out))

    tx = [cycle_type(x.table[i]) for i in range(m)]
    ty = [cycle_type(y.table[i]) for i in range(m)]
    allowed_f = [[u for u in range(m) if ty[u] == tx[i]] for i in range(m)]

    def propagate(f, g, finv, ginv):
        changed = True
        while changed:
            changed = False
            for a in range(m):
                if f[a] < 0:
                    cands = None
                    for b in range(m):
                        if g[b] >= 0 and g[x.table[a, b]] >= 0:
                            want = g[x.table[a, b]]
                            here = {u for u in allowed_f[a] if y.table[u, g[b]] == want}
                            cands = here if cands is None else cands & here
                    if cands is None:
                        continue
                    cands = {u for u in cands if finv[u] < 0}
                    if not cands:
                        return False
                    if len(cands) == 1:
                        u = cands.pop()
                        f[a], finv[u] = u, a
                        changed = True
                    continue
                for b in range(m):
                    if g[b] < 0:
                        continue
                    c, val = x.table[a, b], y.table[f[a], g[b]]
                    if g[c] < 0:
                        if ginv[val] >= 0:
                            return False
                        g[c], ginv[val] = val, c
                        changed = True
                    elif g[c] != val:
                        return False
        return True

    def search(f, g, finv, ginv):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _OverBudget
        if not propagate(f, g, finv, ginv):
            return None
        if min(g) >= 0 and min(f) >= 0:
            return f[:], g[:]
        if min(g) < 0:
            var, arr, inv, values = g.index(-1), g, ginv, range(m)
        else:
            var = f.index(-1)
            arr, inv, values = f, finv, allowed_f[var]
        for val in values:
            if inv[val] >= 0:
                continue
            f2, g2, fi2, gi2 = f[:], g[:], finv[:], ginv[:]
            arr2, inv2 = (g2, gi2) if arr is g else (f2, fi2)
            arr2[var], inv2[val] = val, var
            hit = search(f2, g2, fi2, gi2)
            if hit is not None:
                return hit
        return None

    f, g, finv, ginv = [-1] * m, [-1] * m, [-1] * m, [-1] * m
    f[ux], finv[uy], g[ux], ginv[uy] = uy, ux, uy, ux
    hit = search(f, g, finv, ginv)
    return hit, nodes


def search_rack_isotopism(x: FiniteRackTable, y: FiniteRackTable, *, linear_p: int | None = None,
                          budget: int = DEFAULT_BUDGET, two_step: bool = True) -> SearchReport:
    """Least rack isotopism ``(f, g, h)`` between two tables.

    With ``linear_p`` the tables are read as polynomial racks on ``GF(p)^d``
    and only linear triples are searched: g runs over ``GL_d`` (h must equal g
    because f fixes the unit), and for each g the candidates for ``f(e_i)`` are
    read off the tables.  Without it, unit-fixing permutations are searched by
    backtracking (order at most 27); that mode reports the first triple in its
    branching order (g before f).  ``two_step`` asserts ``g = h`` on every
    witness, as it must be for racks integrating two-step algebras.
    """
    start = time.perf_counter()
    if x.order != y.order:
        return SearchReport(EXHAUSTED, None, 0, _ms(start), 0, "orders differ")
    if linear_p is not None:
        try:
            witnesses, scanned, total = _linear_rack_search(x, y, linear_p, budget)
        except BudgetExceeded as exc:
            return SearchReport(BUDGET, None, 0, _ms(start), None, str(exc))
        extra = {"kind": "rack_linear", "witnesses": len(witnesses)}
        if not witnesses:
            return SearchReport(EXHAUSTED, None, scanned, _ms(start), total, "", extra)
        field = GF(linear_p)
        triples = [RackTriple(Matrix(field, f), Matrix(field, g), Matrix(field, g))
                   for f, g in witnesses]
        if two_step and any(t.g != t.h for t in triples):
            raise AssertionError("rack isotopism witness with g != h")
        best = min(triples, key=lambda t: (_lex_key(t.f), _lex_key(t.g), _lex_key(t.h)))
        extra["triples"] = triples         # in memory only; to_json omits extra
        return SearchReport(WITNESS, best, scanned, _ms(start), total, "", extra)
    if x.order > 27:
        return SearchReport(BUDGET, None, 0, _ms(start), None,
                            "permutation search is limited to order 27")
    try:
        hit, nodes = _perm_rack_search(x, y, budget)
    except _OverBudget:
        return SearchReport(BUDGET, None, budget, _ms(start), None,
                            f"more than {budget} search nodes")
    extra = {"kind": "rack_permutation"}
    if hit is None:
        return SearchReport(EXHAUSTED, None, nodes, _ms(start), None, "", extra)
    f, g = (np.array(v, dtype=np.int64) for v in hit)
    triple = RackTriple(f, g, g.copy())
    if verify_rack_isotopism(x, y, triple) is not None:
        raise AssertionError("permutation witness fails verification")
    return SearchReport(WITNESS, triple, nodes, _ms(start), None, "", extra)
