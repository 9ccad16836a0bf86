"""Exact arithmetic over Q and GF(p): scalars, matrices, subspaces, polynomials."""

from .canonical import (charpoly, companion, companion_of_power, is_irreducible_gfp,
                        jordan_block, rational_root_warning, realification_block)
from .enumerate import (DEFAULT_BUDGET, BudgetExceeded, enumerate_matrices, gl_order,
                        invertible_completions, iter_rows, partition)
from .fields import GF, Field, FieldError, PrimeField, Q, Rationals, Scalar, parse_field
from .linalg import (Matrix, ShapeError, SingularMatrixError, Subspace, kernel_basis,
                     rref_array, unit_vector, vector)
from .polynomial import Polynomial, monic_polynomials, poly_from_roots

__all__ = [
    "BudgetExceeded", "DEFAULT_BUDGET", "Field", "FieldError", "GF", "Matrix", "Polynomial",
    "PrimeField", "Q", "Rationals", "Scalar", "ShapeError", "SingularMatrixError", "Subspace",
    "charpoly", "companion", "companion_of_power", "enumerate_matrices", "gl_order",
    "invertible_completions", "is_irreducible_gfp", "iter_rows", "jordan_block",
    "kernel_basis", "monic_polynomials", "parse_field", "partition", "poly_from_roots",
    "rational_root_warning", "realification_block", "rref_array", "unit_vector", "vector",
]
