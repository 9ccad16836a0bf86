"""``leibniz-kit`` command line.

Every command prints one JSON document carrying ``"schema": "leibniz-kit/1"``.
Exit codes: 0 success or property holds, 1 property fails, 2 malformed input
or unsupported parameters, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import families, isotopy, oracle, racks
from .exactlin import (BudgetExceeded, DEFAULT_BUDGET, Field, FieldError, Matrix, Polynomial,
                       ShapeError, SingularMatrixError, companion_of_power, jordan_block,
                       parse_field, realification_block)
from .leibniz import (AlgebraError, LeibnizAlgebra, abelian, check_left_leibniz,
                      check_right_leibniz, commutator_ideal, is_lie, is_nilpotent, is_two_step,
                      left_center, leibniz_kernel, right_center)

SCHEMA = "leibniz-kit/1"

OK, FAILS, BAD_INPUT, OVER_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    """Malformed input or unsupported parameters (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class PropertyFails(Exception):
    """The mathematical property under test does not hold (exit 1)."""

    def __init__(self, reason: str, **payload):
        super().__init__(reason)
        self.reason = reason
        self.payload = payload


class OverBudget(PropertyFails):
    """A search or table stopped at its budget (exit 3)."""


# -- parsing helpers ---------------------------------------------------------

def parse_matrix_spec(field: Field, text: str) -> Matrix:
    """Matrix parameters.

    ``jordan:a:n``, ``realification:alpha:beta:n``, ``companion:c0,c1,..:k``
    (companion matrix of ``(c0 + c1 x + ... + x^d)^k``, monic coefficient
    included), ``zero:n``, ``identity:n``, or a JSON list of rows.
    """
    kind, _, rest = text.partition(":")
    parts = rest.split(":") if rest else []
    try:
        if kind == "jordan" and len(parts) == 2:
            return jordan_block(field, field.parse(parts[0]), int(parts[1]))
        if kind == "realification" and len(parts) == 3:
            return realification_block(field, field.parse(parts[0]), field.parse(parts[1]),
                                       int(parts[2]))
        if kind == "companion" and len(parts) in (1, 2):
            coeffs = [field.parse(c) for c in parts[0].split(",")]
            k = int(parts[1]) if len(parts) == 2 else 1
            return companion_of_power(Polynomial(field, coeffs), k)
        if kind == "zero" and len(parts) == 1:
            return Matrix.zeros(field, int(parts[0]))
        if kind == "identity" and len(parts) == 1:
            return Matrix.identity(field, int(parts[0]))
        if text.lstrip().startswith("["):
            return Matrix.from_json(field, json.loads(text))
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad matrix {text!r}: {exc}") from exc
    raise UsageError(f"unknown matrix spec {text!r}")


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from exc


def _unwrap(data: dict, key: str):
    """Accept a bare object or a document that nests it under ``key``."""
    if isinstance(data, dict) and key in data and isinstance(data[key], dict):
        return data[key]
    return data


def load_algebra(path: str) -> LeibnizAlgebra:
    data = _unwrap(_read_json(path), "algebra")
    if not isinstance(data, dict):
        raise UsageError("algebra JSON must be an object")
    return LeibnizAlgebra.from_json(data)


def load_table(path: str) -> racks.FiniteRackTable:
    return racks.FiniteRackTable.from_json(_unwrap(_read_json(path), "rack_table"))


def load_triple(path: str) -> isotopy.IsotopismTriple:
    data = _unwrap(_read_json(path), "triple")
    try:
        source = LeibnizAlgebra.from_json(data["source"])
        target = LeibnizAlgebra.from_json(data["target"])
        f, g, h = (Matrix.from_json(source.field, data[k]) for k in ("f", "g", "h"))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed triple JSON: missing {exc}") from exc
    return isotopy.IsotopismTriple(source, target, f, g, h)


def _scalar(field: Field, text: str | None, name: str):
    if text is None:
        raise UsageError(f"--{name} is required")
    return field.parse(text)


def _need(value, name: str):
    if value is None:
        raise UsageError(f"--{name} is required")
    return value


# -- commands ----------------------------------------------------------------

FAMILIES = ("heisenberg-lie", "heisenberg", "l3", "kronecker", "dieudonne", "glm", "abelian")


def cmd_construct(args) -> dict:
    field = args.field
    fam = args.family
    if fam in ("heisenberg-lie", "kronecker", "dieudonne", "abelian"):
        n = _need(args.n, "n")
        ctor = {"heisenberg-lie": families.heisenberg_lie, "kronecker": families.kronecker,
                "dieudonne": families.dieudonne, "abelian": abelian}[fam]
        alg = ctor(field, n)
    elif fam == "heisenberg":
        alg = families.heisenberg_leibniz(parse_matrix_spec(field, _need(args.A, "A")))
    elif fam == "l3":
        alg = families.l3_alpha(field, _scalar(field, args.alpha, "alpha"))
    else:
        a = parse_matrix_spec(field, _need(args.A, "A"))
        alg = families.glm_algebra(a, _scalar(field, args.lam, "lambda"),
                                   _scalar(field, args.mu, "mu"))
    return {"algebra": alg.to_json()}


def cmd_check(args) -> dict:
    alg = load_algebra(args.input)
    left, right = check_left_leibniz(alg), check_right_leibniz(alg)
    out = {
        "left_leibniz": left.to_json() if left else True,
        "right_leibniz": right.to_json() if right else True,
    }
    if left is not None:
        raise PropertyFails("left Leibniz identity fails", **out)
    two = is_two_step(alg)
    out["two_step"] = {"holds": two.holds, "reason": two.reason}
    out["lie"] = is_lie(alg)
    out["nilpotent"] = is_nilpotent(alg)
    out["commutator_dim"] = commutator_ideal(alg).dim
    if args.two_step and not two:
        raise PropertyFails(f"not two-step nilpotent: {two.reason}", **out)
    if args.rack:
        rack = racks.rack_from_two_step(alg)
        report = racks.check_rack_axioms(rack, budget=args.table_budget, jobs=args.jobs)
        out["rack"] = {"ok": report.ok, "exhaustive": report.exhaustive,
                       "triples": report.triples}
        if not report:
            out["rack"]["violation"] = report.violation.to_json()
            raise PropertyFails("rack axioms fail", **out)
    return out


def cmd_invariants(args) -> dict:
    alg = load_algebra(args.input)
    dims = isotopy.isotopy_invariants(alg)
    return {"invariants": list(dims), "dim": alg.dim,
            "left_center": left_center(alg).to_json(),
            "right_center": right_center(alg).to_json(),
            "commutator_ideal": commutator_ideal(alg).to_json(),
            "leibniz_kernel": leibniz_kernel(alg).to_json()}


def cmd_classify(args) -> dict:
    alg = load_algebra(args.input)
    try:
        return isotopy.classify_one_dim(alg).to_json()
    except (isotopy.ClassificationError, AlgebraError) as exc:
        raise PropertyFails(str(exc)) from exc


def cmd_isotopy_build(args) -> dict:
    field = args.field
    kind = args.kind
    try:
        if kind == "thm44-kronecker":
            t = isotopy.build_thm44_kronecker(field, _need(args.n, "n"))
        elif kind == "thm44-heisenberg":
            t = isotopy.build_thm44_heisenberg(parse_matrix_spec(field, _need(args.A, "A")))
        elif kind == "ex34":
            t = isotopy.build_ex34(parse_matrix_spec(field, _need(args.A, "A")),
                                   _scalar(field, args.lam, "lambda"), _scalar(field, args.mu, "mu"),
                                   _scalar(field, args.alpha, "alpha"),
                                   _scalar(field, args.beta, "beta"))
        else:
            t = families.similarity_isomorphism(parse_matrix_spec(field, _need(args.A, "A")),
                                                parse_matrix_spec(field, _need(args.P, "P")))
    except isotopy.SingularBlockError as exc:
        raise PropertyFails(str(exc), block=exc.block) from exc
    return {"triple": t.to_json(), "kinds": t.kinds(), "verified": t.verified}


def cmd_isotopy_verify(args) -> dict:
    t = load_triple(args.input)
    try:
        violation = isotopy.verify_isotopism(t)
    except isotopy.IsotopismError as exc:
        raise PropertyFails(str(exc)) from exc
    if violation is not None:
        raise PropertyFails("bracket equation fails", violation=violation.to_json())
    return {"ok": True, "kinds": t.kinds(),
            "invariants": {"source": list(isotopy.isotopy_invariants(t.source)),
                           "target": list(isotopy.isotopy_invariants(t.target))}}


def _rack_of(args):
    if args.action == "conj-compare":
        return None
    data = _read_json(args.input)
    if isinstance(data, dict) and ("order" in data or "rack_table" in data):
        return racks.FiniteRackTable.from_json(_unwrap(data, "rack_table"))
    return racks.rack_from_two_step(LeibnizAlgebra.from_json(_unwrap(data, "algebra")))


def cmd_rack(args) -> dict:
    rack = _rack_of(args)
    action = args.action
    if action == "conj-compare":
        cmp = racks.compare_conj_rack(args.field, _need(args.n, "n"), budget=args.table_budget)
        out = {"equal": cmp.equal, "pairs": cmp.pairs}
        if not cmp.equal:
            raise PropertyFails("conjugation rack differs", mismatch=list(cmp.mismatch), **out)
        return out
    if action == "table":
        table = rack if isinstance(rack, racks.FiniteRackTable) \
            else racks.finite_rack_table(rack, args.table_budget)
        return {"rack_table": table.to_json()}
    if action == "axioms":
        report = racks.check_rack_axioms(rack, budget=args.table_budget, jobs=args.jobs)
        out = {"ok": report.ok, "exhaustive": report.exhaustive, "triples": report.triples}
        if not report:
            raise PropertyFails("rack axioms fail", violation=report.violation.to_json(), **out)
        return out
    if action == "quandle":
        answer = racks.is_quandle(rack)
        out = {"quandle": answer}
        if not answer:
            w = racks.quandle_witness(rack)
            if not isinstance(w, int):
                w = [rack.field.format(int(v) if rack.field.is_finite else v) for v in w]
            raise PropertyFails("x |> x != x for some x", witness=w, **out)
        return out
    center = racks.rack_center(rack)
    if isinstance(center, list):
        return {"center": center, "size": len(center)}
    out = {"center": center.to_json()}
    if rack.field.is_finite:
        out["size"] = rack.field.p ** center.dim
    return out


def cmd_oracle(args) -> dict:
    kind = args.kind
    if kind == "rack":
        x, y = _rack_of_path(args.a, args), _rack_of_path(args.b, args)
        report = oracle.search_rack_isotopism(x, y, linear_p=args.linear_p,
                                              budget=args.budget)
    else:
        a, b = load_algebra(args.a), load_algebra(args.b)
        if kind == "isomorphism":
            report = oracle.search_isomorphism(a, b, budget=args.budget, jobs=args.jobs,
                                               quick_reject=not args.no_quick_reject)
        else:
            report = oracle.search_principal_isotopism(a, b, budget=args.budget, jobs=args.jobs,
                                                       left_only=(kind == "left-principal"))
    out = report.to_json()
    out.pop("reason", None)
    if report.outcome == oracle.BUDGET:
        raise OverBudget(f"budget exceeded: {report.reason}", **out)
    if not report.found:
        raise PropertyFails(report.reason or "no witness", **out)
    return out


def _rack_of_path(path, args):
    data = _read_json(path)
    if isinstance(data, dict) and ("order" in data or "rack_table" in data):
        return racks.FiniteRackTable.from_json(_unwrap(data, "rack_table"))
    alg = LeibnizAlgebra.from_json(_unwrap(data, "algebra"))
    if args.linear_p is None and alg.field.is_finite:
        args.linear_p = alg.field.p
    return racks.finite_rack_table(racks.rack_from_two_step(alg), args.table_budget)


# -- argument parser ---------------------------------------------------------

def _field_arg(text: str) -> Field:
    try:
        return parse_field(text)
    except FieldError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", type=_field_arg, default=parse_field("Q"),
                        help="Q or GF:p (p an odd prime)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search budget")
    common.add_argument("--table-budget", type=int, default=racks.TABLE_BUDGET,
                        help="largest rack table materialized")
    common.add_argument("--format", choices=["json"], default="json")

    parser = _Parser(prog="leibniz-kit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a family algebra")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--A")
    p.add_argument("--alpha")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--mu")
    p.set_defaults(run=cmd_construct)

    p = sub.add_parser("check", parents=[common], help="Leibniz, two-step and rack checks")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--two-step", action="store_true", help="also require two-step nilpotency")
    p.add_argument("--rack", action="store_true", help="also check the integrated rack")
    p.set_defaults(run=cmd_check)

    for name, fn, text in (("invariants", cmd_invariants, "center and commutator dimensions"),
                           ("classify", cmd_classify, "isotopism class verdict")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("input", nargs="?", default="-")
        p.set_defaults(run=fn)

    p = sub.add_parser("isotopy-build", parents=[common], help="explicit isotopisms")
    p.add_argument("kind", choices=["thm44-kronecker", "thm44-heisenberg", "ex34", "similarity"])
    p.add_argument("--n", type=int)
    p.add_argument("--A")
    p.add_argument("--P")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--mu")
    p.set_defaults(run=cmd_isotopy_build)

    p = sub.add_parser("isotopy-verify", parents=[common], help="check a triple (f, g, h)")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(run=cmd_isotopy_verify)

    p = sub.add_parser("rack", parents=[common], help="rack tables, axioms, center, quandle test")
    p.add_argument("action", choices=["table", "axioms", "center", "quandle", "conj-compare"])
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--n", type=int)
    p.set_defaults(run=cmd_rack)

    p = sub.add_parser("oracle", parents=[common], help="finite-field searches")
    p.add_argument("kind", choices=["isomorphism", "principal", "left-principal", "rack"])
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--no-quick-reject", action="store_true")
    p.add_argument("--linear-p", type=int, help="rack search over linear triples on GF(p)^d")
    p.set_defaults(run=cmd_oracle)
    return parser


def _emit(payload: dict) -> None:
    try:
        json.dump({"schema": SCHEMA, **payload}, sys.stdout, indent=2, ensure_ascii=False)
        sys.stdout.write("\n")
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _emit({"ok": False, "reason": str(exc), "error": "UsageError"})
        return BAD_INPUT
    except SystemExit as exc:          # --help
        return BAD_INPUT if exc.code else OK
    try:
        payload = args.run(args)
    except OverBudget as exc:
        _emit({"ok": False, "reason": exc.reason, **exc.payload})
        return OVER_BUDGET
    except PropertyFails as exc:
        _emit({"ok": False, "reason": exc.reason, **exc.payload})
        return FAILS
    except BudgetExceeded as exc:
        _emit({"ok": False, "reason": f"budget exceeded: {exc}"})
        return OVER_BUDGET
    except (UsageError, AlgebraError, FieldError, ShapeError, SingularMatrixError,
            isotopy.IsotopismError, racks.RackError, ValueError, ZeroDivisionError) as exc:
        _emit({"ok": False, "reason": str(exc), "error": type(exc).__name__})
        return BAD_INPUT
    _emit({"ok": True, "command": args.command, **payload})
    return OK


if __name__ == "__main__":
    sys.exit(main())
