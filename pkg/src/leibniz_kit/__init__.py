"""Exact computations with Leibniz algebras whose commutator ideal is one-dimensional:
constructions, isotopisms, classification, integration into racks, and
finite-field brute-force searches."""

from .families import (dieudonne, glm_algebra, glm_structure_matrix, heisenberg_jordan,
                       heisenberg_leibniz, heisenberg_lie, kronecker, l3_alpha,
                       similarity_isomorphism, structure_matrix)
from .isotopy import (ClassVerdict, IsotopismTriple, build_ex34, build_thm44_heisenberg,
                      build_thm44_kronecker, classify_one_dim, det_identity_check,
                      isotopy_invariants, principal_form, require_isotopism,
                      solve_left_principal, transport, verify_isotopism)
from .leibniz import (LeibnizAlgebra, abelian, bracket, center, change_basis,
                      check_left_leibniz, check_right_leibniz, commutator_ideal, derived_series,
                      direct_sum, is_lie, is_nilpotent, is_two_step, leibniz_kernel, left_center,
                      lower_central_series, right_center, split_abelian_factor)
from .oracle import (SearchReport, search_isomorphism, search_principal_isotopism,
                     search_rack_isotopism)
from .racks import (FiniteRackTable, PolynomialRack, RackTriple, check_rack_axioms,
                    descend_rack_isotopism, finite_rack_table, heisenberg_conj_rack, is_quandle,
                    lift_algebra_isotopism, rack_apply, rack_center, rack_from_two_step,
                    tangent_algebra, verify_rack_isotopism)

__all__ = [
    "ClassVerdict",
    "FiniteRackTable",
    "IsotopismTriple",
    "LeibnizAlgebra",
    "PolynomialRack",
    "RackTriple",
    "SearchReport",
    "abelian",
    "bracket",
    "build_ex34",
    "build_thm44_heisenberg",
    "build_thm44_kronecker",
    "center",
    "change_basis",
    "check_left_leibniz",
    "check_rack_axioms",
    "check_right_leibniz",
    "classify_one_dim",
    "commutator_ideal",
    "derived_series",
    "descend_rack_isotopism",
    "det_identity_check",
    "dieudonne",
    "direct_sum",
    "finite_rack_table",
    "glm_algebra",
    "glm_structure_matrix",
    "heisenberg_conj_rack",
    "heisenberg_jordan",
    "heisenberg_leibniz",
    "heisenberg_lie",
    "is_lie",
    "is_nilpotent",
    "is_quandle",
    "is_two_step",
    "isotopy_invariants",
    "kronecker",
    "l3_alpha",
    "left_center",
    "leibniz_kernel",
    "lift_algebra_isotopism",
    "lower_central_series",
    "principal_form",
    "rack_apply",
    "rack_center",
    "rack_from_two_step",
    "require_isotopism",
    "right_center",
    "search_isomorphism",
    "search_principal_isotopism",
    "search_rack_isotopism",
    "similarity_isomorphism",
    "solve_left_principal",
    "split_abelian_factor",
    "structure_matrix",
    "tangent_algebra",
    "transport",
    "verify_isotopism",
    "verify_rack_isotopism",
]

__version__ = "0.1.0"
