"""Constructors for the named algebras with one-dimensional commutator ideal.

Basis order is fixed: ``(e_1..e_n, f_1..f_n, z)`` for the Heisenberg and
Kronecker algebras and ``(e_1..e_{2n+1}, z)`` for the Dieudonne algebras.
All indices below are 0-based in code.
"""

from __future__ import annotations

from .exactlin import Field, Matrix, ShapeError, SingularMatrixError, jordan_block
from .leibniz import FamilyTag, LeibnizAlgebra


def _tag_matrix(a: Matrix) -> list[list[str]]:
    return a.to_json()


def heisenberg_leibniz(a: Matrix, tag: FamilyTag | None = None) -> LeibnizAlgebra:
    """``[e_i, f_j] = (delta_ij + a_ij) z`` and ``[f_j, e_i] = (-delta_ij + a_ij) z``.

    ``a`` may be any square matrix; the bracket is well defined for all of them.
    """
    if not a.is_square:
        raise ShapeError(f"Heisenberg parameter must be square, got {a.shape}")
    field = a.field
    n = a.rows
    dim = 2 * n + 1
    z = 2 * n
    arr = field.zeros((dim, dim, dim))
    for i in range(n):
        for j in range(n):
            aij = a[i, j]
            delta = 1 if i == j else 0
            arr[i, n + j, z] = field.coerce(aij + delta)
            arr[n + j, i, z] = field.coerce(aij - delta)
    if tag is None:
        tag = FamilyTag("HeisenbergLeibniz", {"n": n, "A": _tag_matrix(a)})
    return LeibnizAlgebra(field, arr, tag)


def heisenberg_lie(field: Field, n: int) -> LeibnizAlgebra:
    if n < 1:
        raise ValueError("n must be at least 1")
    return heisenberg_leibniz(Matrix.zeros(field, n), FamilyTag("HeisenbergLie", {"n": n}))


def heisenberg_jordan(field: Field, a, n: int) -> LeibnizAlgebra:
    """The Heisenberg algebra of the n x n Jordan block with eigenvalue a."""
    tag = FamilyTag("HeisenbergLeibniz", {"n": n, "jordan": field.format(a)})
    return heisenberg_leibniz(jordan_block(field, a, n), tag)


def l3_alpha(field: Field, alpha) -> LeibnizAlgebra:
    alpha = field.coerce(alpha)
    return heisenberg_leibniz(Matrix(field, [[alpha]]),
                              FamilyTag("L3", {"alpha": field.format(alpha)}))


def kronecker(field: Field, n: int) -> LeibnizAlgebra:
    if n < 1:
        raise ValueError("n must be at least 1")
    dim = 2 * n + 1
    z = 2 * n
    one, minus = field.one, field.neg(field.one)
    arr = field.zeros((dim, dim, dim))
    for i in range(n):
        arr[i, n + i, z] = one
        arr[n + i, i, z] = one
    for i in range(1, n):
        arr[i, n + i - 1, z] = one
        arr[n + i - 1, i, z] = minus
    return LeibnizAlgebra(field, arr, FamilyTag("Kronecker", {"n": n}))


def dieudonne(field: Field, n: int) -> LeibnizAlgebra:
    """The (2n+2)-dimensional Dieudonne algebra on ``(e_1..e_{2n+1}, z)``.

    The four bracket groups are transcribed with their 1-based ranges; for
    n = 1 the group ``2 <= i <= n`` is empty.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    dim = 2 * n + 2
    z = dim - 1
    one, minus = field.one, field.neg(field.one)
    arr = field.zeros((dim, dim, dim))

    def put(i, j, v):
        # 1-based e-indices
        arr[i - 1, j - 1, z] = field.reduce(arr[i - 1, j - 1, z] + v)

    put(1, n + 2, one)
    for i in range(2, n + 1):
        put(i, n + i, one)
        put(i, n + i + 1, one)
    put(n + 1, 2 * n + 1, one)
    for i in range(n + 2, 2 * n + 2):
        put(i, i - n, one)
        put(i, i - n - 1, minus)
    return LeibnizAlgebra(field, arr, FamilyTag("Dieudonne", {"n": n}))


def glm_structure_matrix(a: Matrix, lam, mu) -> Matrix:
    """The 3 x 3 structure matrix of the two-parameter family built from A and
    ``B = A diag(lam, mu)``; entry (i, j) is the z-coefficient of ``[e_i, e_j]``."""
    field = a.field
    if a.shape != (2, 2):
        raise ShapeError("A must be 2 x 2")
    if a.det() == 0:
        raise SingularMatrixError("A must be invertible")
    lam, mu = field.coerce(lam), field.coerce(mu)
    if lam == 0 or mu == 0:
        raise ValueError("lambda and mu must be nonzero")
    b = a @ Matrix.diag(field, [lam, mu])
    m12 = a[0, 0] * b[1, 1] - a[1, 0] * b[0, 1]
    m21 = a[0, 1] * b[1, 0] - a[1, 1] * b[0, 0]
    return Matrix(field, [[0, m12, 0], [m21, 0, 0], [0, 0, 0]])


def glm_algebra(a: Matrix, lam, mu) -> LeibnizAlgebra:
    field = a.field
    m = glm_structure_matrix(a, lam, mu)
    arr = field.zeros((3, 3, 3))
    arr[:, :, 2] = m.data
    tag = FamilyTag("GLM", {"A": _tag_matrix(a), "lambda": field.format(lam),
                            "mu": field.format(mu)})
    return LeibnizAlgebra(field, arr, tag)


def structure_matrix(alg: LeibnizAlgebra) -> Matrix:
    """The z-coefficient matrix of an algebra whose brackets all land on the last basis vector."""
    z = alg.dim - 1
    rest = alg.tensor[:, :, :z]
    if (rest != 0).any():
        raise ValueError("brackets do not all land on the last basis vector")
    return alg.bracket_matrix(z)


def similarity_isomorphism(a: Matrix, p: Matrix):
    """Isomorphism from the Heisenberg algebra of ``a`` onto that of ``P A P^-1``.

    The map is ``T = blockdiag(P^-T, P, 1)``: writing the bracket as
    ``x_e^T (I + A) y_f + x_f^T (A - I)^T y_e``, the blocks S (on e) and U (on f)
    must satisfy ``S^T (I + A') U = I + A`` and ``S^T (A' - I) U = A - I``, which
    ``S = P^-T``, ``U = P`` do for ``A' = P A P^-1``.
    """
    from .isotopy import IsotopismTriple, require_isotopism

    if not p.is_square or p.rows != a.rows:
        raise ShapeError("P must be square of the size of A")
    p_inv = p.inverse()
    field = a.field
    target_a = p @ a @ p_inv
    source = heisenberg_leibniz(a)
    target = heisenberg_leibniz(target_a)
    t = Matrix.block_diag(p_inv.T, p, Matrix.identity(field, 1))
    return require_isotopism(IsotopismTriple(source, target, t, t, t))
