import pytest

import naive
import reference_families as rf
from leibniz_kit import (dieudonne, glm_algebra, glm_structure_matrix, heisenberg_jordan,
                         heisenberg_leibniz, heisenberg_lie, is_two_step, kronecker, l3_alpha,
                         similarity_isomorphism, structure_matrix)
from leibniz_kit.exactlin import GF, Matrix, Q, SingularMatrixError, realification_block
from leibniz_kit.leibniz import LeibnizAlgebra


def ref_of(alg):
    return naive.Ref.from_json(alg.to_json())


def modulus(field):
    return field.p if field.is_finite else None


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("a", [0, 1, -1, 2])
def test_heisenberg_jordan_matches_definition(field, a, n):
    ours = ref_of(heisenberg_jordan(field, a, n))
    assert ours.br == rf.heisenberg(rf.jordan_rows(a, n), modulus(field)).br


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kronecker_matches_definition(field, n):
    assert ref_of(kronecker(field, n)).br == rf.kronecker(n, modulus(field)).br


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dieudonne_matches_definition(field, n):
    assert ref_of(dieudonne(field, n)).br == rf.dieudonne(n, modulus(field)).br


def test_dieudonne_one_brackets():
    # d_1 on (e1, e2, e3, z): [e1,e3] = [e2,e3] = [e3,e2] = z, [e3,e1] = -z
    ref = ref_of(dieudonne(Q, 1))
    assert ref.br == {(0, 2): {3: 1}, (1, 2): {3: 1}, (2, 1): {3: 1}, (2, 0): {3: -1}}


def test_heisenberg_lie_is_lie(field):
    ref = ref_of(heisenberg_lie(field, 2))
    for i in range(ref.dim):
        assert ref.bracket(ref.basis(i), ref.basis(i)) == ref.zero()


def test_l3_alpha_brackets():
    ref = ref_of(l3_alpha(Q, 3))
    assert ref.br == {(0, 1): {2: 4}, (1, 0): {2: 2}}


def test_realification_heisenberg_is_two_step():
    alg = heisenberg_leibniz(realification_block(Q, 1, 2, 1))
    assert alg.dim == 5
    assert is_two_step(alg)
    ref = ref_of(alg)
    assert naive.left_leibniz_ok(ref) and naive.right_leibniz_ok(ref)


@pytest.mark.parametrize("lam,mu", [(1, 1), (2, 3), (-1, 5)])
def test_glm_matrix_is_determinant_expression(lam, mu):
    a = Matrix(Q, [[1, 2], [3, 5]])
    m = glm_structure_matrix(a, lam, mu)
    b = [[1 * lam, 2 * mu], [3 * lam, 5 * mu]]
    # entries are 2x2 determinants mixing the columns of A and B = A diag(lam, mu)
    assert m[0, 1] == 1 * b[1][1] - 3 * b[0][1]
    assert m[1, 0] == 2 * b[1][0] - 5 * b[0][0]
    assert structure_matrix(glm_algebra(a, lam, mu)) == m


def test_glm_rejects_degenerate_parameters():
    with pytest.raises(SingularMatrixError):
        glm_structure_matrix(Matrix(Q, [[1, 2], [2, 4]]), 1, 1)
    with pytest.raises(ValueError):
        glm_structure_matrix(Matrix.identity(Q, 2), 0, 1)


@pytest.mark.parametrize("field", [Q, GF(5), GF(7)], ids=str)
def test_similarity_isomorphism(field):
    a = Matrix(field, [[1, 2], [0, 3]])
    p = Matrix(field, [[1, 1], [1, 2]])
    t = similarity_isomorphism(a, p)
    src, dst = ref_of(t.source), ref_of(t.target)
    pmod = modulus(field)
    conv = (lambda r: [int(c) for c in r]) if pmod else list
    f = [conv(r) for r in t.f.tolist()]
    assert naive.is_isotopism(src, dst, f, f, f)
    assert t.target == heisenberg_leibniz(p @ a @ p.inverse())


def test_bad_constructor_arguments():
    with pytest.raises(ValueError):
        kronecker(Q, 0)
    with pytest.raises(ValueError):
        dieudonne(Q, 0)
    with pytest.raises(ValueError):
        heisenberg_lie(GF(3), 0)


def test_json_roundtrip(field):
    alg = dieudonne(field, 2)
    back = LeibnizAlgebra.from_json(alg.to_json())
    assert back == alg
    assert back.tag == alg.tag
