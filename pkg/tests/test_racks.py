import itertools

import numpy as np
import pytest

import naive
from leibniz_kit import (FiniteRackTable, RackTriple, build_thm44_heisenberg,
                         build_thm44_kronecker, check_rack_axioms, descend_rack_isotopism,
                         dieudonne, finite_rack_table, heisenberg_conj_rack, heisenberg_jordan,
                         heisenberg_lie, is_quandle, kronecker, l3_alpha, lift_algebra_isotopism,
                         rack_apply, rack_center, rack_from_two_step, tangent_algebra,
                         verify_rack_isotopism)
from leibniz_kit.exactlin import GF, BudgetExceeded, Matrix, Q
from leibniz_kit.leibniz import AlgebraError, LeibnizAlgebra, abelian
from leibniz_kit.racks import (RackError, UnitNotPreserved, compare_conj_rack, point_index,
                               rack_points)

F3 = GF(3)


def reference_table(alg):
    ref = naive.Ref.from_json(alg.to_json())
    pts = ref.points()
    index = {tuple(v): k for k, v in enumerate(pts)}
    return [[index[tuple(naive.rack_op(ref, x, y))] for y in pts] for x in pts]


def self_distributive(table):
    m = len(table)
    return all(table[x][table[y][z]] == table[table[x][y]][table[x][z]]
               for x, y, z in itertools.product(range(m), repeat=3))


@pytest.mark.parametrize("alg", [l3_alpha(F3, 0), l3_alpha(F3, 1), l3_alpha(F3, 2),
                                 kronecker(F3, 1)], ids=["R0", "RJ1", "RJ2", "K1"])
def test_table_matches_reference(alg):
    ref = reference_table(alg)
    ours = finite_rack_table(rack_from_two_step(alg))
    assert ours.table.tolist() == ref
    assert self_distributive(ref)
    assert check_rack_axioms(ours).ok


def test_points_are_row_major():
    pts = rack_points(3, 2)
    assert pts[:4].tolist() == [[0, 0], [0, 1], [0, 2], [1, 0]]
    assert all(point_index(3, v) == k for k, v in enumerate(pts))


def test_polynomial_rack_axioms_exhaustive():
    check = check_rack_axioms(rack_from_two_step(dieudonne(F3, 1)))
    assert check.ok and check.exhaustive and check.triples == 81 ** 3


def test_symbolic_only_over_q():
    check = check_rack_axioms(rack_from_two_step(kronecker(Q, 2)))
    assert check.ok and not check.exhaustive


def test_corrupted_table_detected():
    t = finite_rack_table(rack_from_two_step(l3_alpha(F3, 1))).table.copy()
    t[5, [1, 2]] = t[5, [2, 1]]
    check = check_rack_axioms(FiniteRackTable(27, t))
    assert not self_distributive(t.tolist())
    assert not check.ok and check.violation.kind == "autodistributivity"


def test_unit_violation():
    t = np.tile(np.arange(3), (3, 1))
    t[1] = [1, 2, 0]
    check = check_rack_axioms(FiniteRackTable(3, t))
    assert check.violation.kind == "unit"


def test_non_two_step_rejected():
    bad = LeibnizAlgebra.from_brackets(Q, 4, {(0, 1): {2: 1}, (1, 0): {2: -1},
                                              (0, 2): {3: 1}, (2, 0): {3: -1}})
    with pytest.raises(AlgebraError):
        rack_from_two_step(bad)
    trivial = rack_from_two_step(abelian(Q, 2))
    assert list(trivial.apply([1, 2], [3, 4])) == [3, 4]


def test_quandle_exactly_for_lie():
    assert is_quandle(rack_from_two_step(heisenberg_lie(F3, 1)))
    assert not is_quandle(rack_from_two_step(l3_alpha(F3, 1)))
    assert not is_quandle(rack_from_two_step(kronecker(Q, 2)))
    assert is_quandle(finite_rack_table(rack_from_two_step(heisenberg_lie(F3, 1))))


@pytest.mark.parametrize("alg", [l3_alpha(F3, 0), l3_alpha(F3, 1), heisenberg_jordan(F3, 1, 2),
                                 kronecker(F3, 1)], ids=["R0", "RJ1", "R5J1", "K1"])
def test_center_matches_table(alg):
    r = rack_from_two_step(alg)
    sub = rack_center(r)
    from_table = rack_center(finite_rack_table(r))
    assert sorted(point_index(3, v) for v in sub.points()) == from_table
    pts = rack_points(3, alg.dim)
    ref = naive.Ref.from_json(alg.to_json())
    brute = [k for k, x in enumerate(pts.tolist())
             if all(naive.rack_op(ref, x, y) == y for y in pts.tolist())]
    assert brute == from_table


def test_tangent_recovers_bracket(field):
    alg = kronecker(field, 2)
    assert tangent_algebra(rack_from_two_step(alg)).tensor.tolist() == alg.tensor.tolist()
    assert tangent_algebra(heisenberg_conj_rack(field, 2)) == heisenberg_lie(field, 2)


@pytest.mark.parametrize("p", [3, 5, None])
def test_conj_rack_against_reference(p):
    field = GF(p) if p else Q
    conj = heisenberg_conj_rack(field, 1)
    rng = np.random.default_rng(7)
    for _ in range(50):
        x, y = rng.integers(-4, 5, size=(2, 3)).tolist()
        ours = conj.apply(x, y)
        expect = naive.conj_op(1, x, y, p)
        assert [field.coerce(c) for c in ours] == [field.coerce(c) for c in expect]


def test_conj_group_laws():
    conj = heisenberg_conj_rack(Q, 2)
    g = [1, 2, -1, 3, 5]
    assert list(conj.multiply(g, conj.inverse(g))) == [0] * 5
    assert list(conj.multiply(conj.inverse(g), g)) == [0] * 5


@pytest.mark.parametrize("field,n", [(F3, 1), (F3, 2), (Q, 1)], ids=["GF3-1", "GF3-2", "Q-1"])
def test_conj_equals_heisenberg_rack(field, n):
    result = compare_conj_rack(field, n)
    assert result.equal


def test_table_json_roundtrip():
    t = finite_rack_table(rack_from_two_step(kronecker(F3, 1)))
    assert FiniteRackTable.from_json(t.to_json()) == t
    with pytest.raises(RackError):
        FiniteRackTable.from_json({"order": 2, "table": [[0, 5], [1, 0]]})


def test_table_budget():
    with pytest.raises(BudgetExceeded):
        finite_rack_table(rack_from_two_step(kronecker(F3, 2)), budget=100)


def test_rack_apply_both_kinds():
    r = rack_from_two_step(kronecker(F3, 1))
    t = finite_rack_table(r)
    x, y = [1, 1, 0], [2, 0, 1]
    assert rack_apply(t, point_index(3, x), point_index(3, y)) == \
        point_index(3, rack_apply(r, x, y))


@pytest.mark.parametrize("build", [lambda: build_thm44_kronecker(F3, 1),
                                   lambda: build_thm44_heisenberg(Matrix(GF(5), [[2]])),
                                   lambda: build_thm44_kronecker(Q, 2)])
def test_lift_descend_roundtrip(build):
    t = build()
    lifted = lift_algebra_isotopism(t)
    x, y = rack_from_two_step(t.source), rack_from_two_step(t.target)
    if t.source.field.is_finite:
        assert verify_rack_isotopism(x, y, lifted, exhaustive=True) is None
    back = descend_rack_isotopism(x, y, lifted)
    assert (back.f, back.g, back.h) == (t.f, t.g, t.h)


def test_identity_is_not_rack_isotopism_from_j1():
    ident = Matrix.identity(F3, 3)
    x = rack_from_two_step(l3_alpha(F3, 1))
    y = heisenberg_conj_rack(F3, 1)
    assert verify_rack_isotopism(x, y, RackTriple(ident, ident, ident)) is not None
    with pytest.raises(RackError):
        descend_rack_isotopism(x, y, RackTriple(ident, ident, ident))


def test_table_isotopism_needs_unit():
    t = finite_rack_table(rack_from_two_step(l3_alpha(F3, 0)))
    swap = np.arange(27)
    swap[[0, 1]] = [1, 0]
    with pytest.raises(UnitNotPreserved):
        verify_rack_isotopism(t, t, RackTriple(swap, np.arange(27), np.arange(27)))
