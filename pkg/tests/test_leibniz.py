import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import naive
from leibniz_kit import (LeibnizAlgebra, abelian, bracket, center, change_basis,
                         check_left_leibniz, check_right_leibniz, commutator_ideal,
                         derived_series, dieudonne, direct_sum, heisenberg_jordan, heisenberg_lie,
                         is_lie, is_nilpotent, is_two_step, kronecker, l3_alpha, left_center,
                         leibniz_kernel, lower_central_series, right_center,
                         split_abelian_factor)
from leibniz_kit.exactlin import GF, Matrix, Q, ShapeError
from leibniz_kit.leibniz import AlgebraError


def ref_of(alg):
    return naive.Ref.from_json(alg.to_json())


def as_set(sub):
    return {tuple(int(c) for c in v) for v in sub.points()}


def two_dim_nonabelian(field):
    return LeibnizAlgebra.from_brackets(field, 2, {(0, 1): {1: 1}, (1, 0): {1: -1}})


def filiform(field):
    return LeibnizAlgebra.from_brackets(field, 4, {(0, 1): {2: 1}, (1, 0): {2: -1},
                                                   (0, 2): {3: 1}, (2, 0): {3: -1}})


@st.composite
def random_brackets(draw):
    dim = draw(st.integers(2, 3))
    entries = draw(st.dictionaries(st.tuples(st.integers(0, dim - 1), st.integers(0, dim - 1)),
                                   st.dictionaries(st.integers(0, dim - 1), st.integers(-2, 2),
                                                   max_size=2), max_size=4))
    return dim, entries


@settings(max_examples=80, deadline=None)
@given(random_brackets(), st.sampled_from([None, 3, 5]))
def test_identity_checks_match_reference(data, p):
    dim, brackets = data
    field = GF(p) if p else Q
    alg = LeibnizAlgebra.from_brackets(field, dim, brackets)
    ref = naive.Ref(dim, brackets, p)
    assert (check_left_leibniz(alg) is None) == naive.left_leibniz_ok(ref)
    assert (check_right_leibniz(alg) is None) == naive.right_leibniz_ok(ref)


def test_violation_reports_first_triple():
    # [e0, e0] = e1, [e1, e0] = e1 breaks the left identity
    alg = LeibnizAlgebra.from_brackets(Q, 2, {(0, 0): {1: 1}, (1, 0): {1: 1}})
    v = check_left_leibniz(alg)
    assert v is not None and v.identity == "left"
    assert v.to_json()["triple"] == [v.i, v.j, v.k]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=5, max_size=5),
       st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_bracket_is_bilinear_evaluation(x, y):
    alg = kronecker(GF(7), 2)
    ours = bracket(alg, GF(7).array(x), GF(7).array(y))
    ref = ref_of(alg)
    assert [int(c) for c in ours] == ref.bracket([c % 7 for c in x], [c % 7 for c in y])


@pytest.mark.parametrize("make", [lambda f: heisenberg_jordan(f, 1, 2),
                                  lambda f: heisenberg_jordan(f, 2, 2),
                                  lambda f: kronecker(f, 2),
                                  lambda f: dieudonne(f, 1)],
                         ids=["l5_J1", "l5_J2", "k2", "d1"])
def test_centers_match_brute_force(make):
    alg = make(GF(3))
    left, right, both = naive.brute_centers(ref_of(alg))
    assert as_set(left_center(alg)) == left
    assert as_set(right_center(alg)) == right
    assert as_set(center(alg)) == both


def test_commutator_and_kernel(field):
    k = kronecker(field, 2)
    assert commutator_ideal(k).dim == 1
    assert leibniz_kernel(k).dim == 1
    h = heisenberg_lie(field, 2)
    assert leibniz_kernel(h).is_zero()
    assert is_lie(h) and not is_lie(k)


def test_series():
    h = heisenberg_lie(Q, 1)
    assert lower_central_series(h).dims == [3, 1, 0]
    assert derived_series(h).step == 2
    assert lower_central_series(filiform(Q)).dims == [4, 2, 1, 0]
    nonnil = lower_central_series(two_dim_nonabelian(Q))
    assert nonnil.step is None and not is_nilpotent(two_dim_nonabelian(Q))


def test_two_step_reasons():
    assert is_two_step(kronecker(Q, 1))
    assert is_two_step(abelian(Q, 3)).reason == "abelian"
    r = is_two_step(filiform(Q))
    assert not r and r.reason == "bracket not central" and r.pair == (0, 1)
    assert not is_two_step(two_dim_nonabelian(GF(5)))


@pytest.mark.parametrize("field", [Q, GF(5)], ids=str)
def test_change_basis_is_isomorphism(field):
    alg = dieudonne(field, 1)
    p = Matrix(field, [[1, 1, 0, 0], [0, 1, 2, 0], [0, 0, 1, 0], [1, 0, 0, 1]])
    moved = change_basis(alg, p)
    pm = field.p if field.is_finite else None
    rows = [[int(c) if pm else c for c in r] for r in p.tolist()]
    assert naive.is_isotopism(ref_of(alg), ref_of(moved), rows, rows, rows)
    assert change_basis(moved, p.inverse()) == alg


def test_change_basis_shape_check():
    with pytest.raises(ShapeError):
        change_basis(kronecker(Q, 1), Matrix.identity(Q, 2))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_split_abelian_factor(k):
    f = GF(5)
    base = l3_alpha(f, 2)
    alg = direct_sum(base, abelian(f, k)) if k else base
    scramble = Matrix(f, np.eye(alg.dim, dtype=np.int64) + np.eye(alg.dim, k=1, dtype=np.int64))
    mixed = change_basis(alg, scramble)
    core, rank, basis = split_abelian_factor(mixed)
    assert rank == k and core.dim == 3
    expected = direct_sum(core, abelian(f, k)) if k else core
    assert change_basis(mixed, basis.inverse()).tensor.tolist() == expected.tensor.tolist()


def test_split_rejects_wide_commutator():
    with pytest.raises(AlgebraError):
        split_abelian_factor(direct_sum(kronecker(Q, 1), kronecker(Q, 1)))


def test_json_errors():
    with pytest.raises(AlgebraError):
        LeibnizAlgebra.from_json({"dim": 2})
    with pytest.raises(AlgebraError):
        LeibnizAlgebra.from_json({"field": "Q", "dim": 2, "table": [{"i": 5, "j": 0, "v": [1, 0]}]})
