#!/usr/bin/env python3
"""
Command-line front end for semiinv.

Every subcommand prints canonical text (default) or JSON (``--format json``)
on standard output. Exit status: 0 on success, 1 on a domain error (printed
as kind, message and witness), 2 on usage errors.
"""

import argparse
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from .completion import (
    CompletionMethod,
    complete,
    complete_stroh,
)
from .config import logger, settings
from .covariants import check_covariant, covariant_from_source
from .decompose import Representation, decompose, membership_oracle, u_decompose
from .exceptions import JordanSpecError, PolyParseError, SemiInvariantError
from .forms import basis_for, jacobian_rank, random_point
from .jordan import JordanSpec, check_semi_invariant
from .operators import EXP_D, D, L, W, Operator, apply, delta
from .polycore import Poly, format_poly, parse_poly, poly_to_json
from .ubasis import dim_u, u_invariant_basis, u_poly, u_recursion_check


# ----- output models ---------------------------------------------------


class PolyOut(BaseModel):
    poly: str
    terms: List[Dict[str, Any]]

    @classmethod
    def of(cls, p: Poly) -> "PolyOut":
        return cls(poly=format_poly(p), terms=poly_to_json(p)["terms"])


class FormOut(BaseModel):
    label: str
    multiplier: str
    poly: PolyOut


class BasisOut(BaseModel):
    jordan: str
    forms: List[FormOut]
    jacobian_rank: Optional[int] = None


class CheckOut(BaseModel):
    jordan: str
    multiplier: str
    exponents: Optional[List[int]] = None
    value: Optional[str] = None


class TermOut(BaseModel):
    index: List[int]
    coeff: str
    product: str


class DecomposeOut(BaseModel):
    family: List[FormOut]
    terms: List[TermOut]
    denom_exps: List[int]
    denominator: str


class CompleteOut(BaseModel):
    method: str
    result: PolyOut


class ApplyOut(BaseModel):
    op: str
    result: PolyOut


class RecursionOut(BaseModel):
    name: str
    holds: bool
    lhs: str
    rhs: str


class UOut(BaseModel):
    index: List[int]
    result: PolyOut
    checks: Optional[List[RecursionOut]] = None


class UElementOut(BaseModel):
    index: List[int]
    poly: PolyOut


class UBasisOut(BaseModel):
    d: int
    g: int
    elements: List[UElementOut]


class DimOut(BaseModel):
    d: int
    g: int
    dim: int


class CoefficientOut(BaseModel):
    i: int
    monomial: str
    poly: PolyOut


class CovariantOut(BaseModel):
    n: int
    order: int
    coeffs: List[CoefficientOut]
    passed: bool
    violations: List[str]


class ErrorOut(BaseModel):
    error: str
    message: str
    witness: Dict[str, str]


# ----- argument types --------------------------------------------------


def _poly_arg(text: str) -> Poly:
    try:
        return parse_poly(text)
    except PolyParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _jordan_arg(text: str) -> JordanSpec:
    try:
        return JordanSpec.parse(text)
    except JordanSpecError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _index_arg(text: str) -> Tuple[int, ...]:
    try:
        idx = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        message = f"expected comma-separated integers, got {text!r}"
        raise argparse.ArgumentTypeError(message) from exc
    if any(k < 0 for k in idx):
        raise argparse.ArgumentTypeError(f"index entries must be non-negative, got {text!r}")
    return idx


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = _non_negative(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


# ----- command handlers ------------------------------------------------
# Each handler returns the output model and its text rendering.

Result = Tuple[BaseModel, str]


def _form_out(form: Any, spec: JordanSpec) -> FormOut:
    return FormOut(
        label=form.label,
        multiplier=form.multiplier.describe(spec),
        poly=PolyOut.of(form.poly),
    )


def cmd_basis(args: argparse.Namespace) -> Result:
    spec: JordanSpec = args.jordan
    family = basis_for(spec)
    rank = None
    if args.certify:
        point = random_point(spec.variables())
        rank = jacobian_rank(family.polys, point)
    out = BasisOut(
        jordan=str(spec),
        forms=[_form_out(f, spec) for f in family.forms],
        jacobian_rank=rank,
    )
    lines = [f"{f.label} [{f.multiplier}]: {f.poly.poly}" for f in out.forms]
    if rank is not None:
        lines.append(f"jacobian rank: {rank} of {len(family)}")
    return out, "\n".join(lines)


def cmd_check(args: argparse.Namespace) -> Result:
    spec: JordanSpec = args.jordan
    multiplier = check_semi_invariant(spec, args.poly)
    out = CheckOut(
        jordan=str(spec),
        multiplier=multiplier.describe(spec),
        exponents=list(multiplier.exponents) if multiplier.exponents is not None else None,
        value=str(multiplier.value) if multiplier.value is not None else None,
    )
    return out, f"semi-invariant, multiplier {out.multiplier}"


def _representation_out(rep: Representation) -> Result:
    spec = rep.family.spec
    terms = [
        TermOut(index=list(index), coeff=str(c), product=rep.describe_term(index))
        for index, c in rep.items()
    ]
    denominator = str(rep.denominator())
    out = DecomposeOut(
        family=[_form_out(f, spec) for f in rep.family.forms],
        terms=terms,
        denom_exps=list(rep.denom_exps),
        denominator=denominator,
    )
    lines = [f"{f.label} = {f.poly.poly}" for f in out.family]
    lines += [f"{t.coeff} * {t.product}" for t in terms]
    lines.append(f"denominator: {denominator}")
    return out, "\n".join(lines)


def cmd_decompose(args: argparse.Namespace) -> Result:
    if args.u_family is not None:
        return _representation_out(u_decompose(args.poly, args.u_family))
    spec: JordanSpec = args.jordan
    if args.denominators is not None:
        family = basis_for(spec)
        coefficients = membership_oracle(spec, args.poly, args.denominators)
        rep = Representation(family, coefficients, tuple(args.denominators))
        return _representation_out(rep)
    return _representation_out(decompose(spec, args.poly))


def cmd_complete(args: argparse.Namespace) -> Result:
    method = CompletionMethod(args.method)
    if args.uindex is not None:
        if method is CompletionMethod.STROH:
            result = complete_stroh(args.uindex)
        else:
            result = complete(u_poly(args.uindex), method, args.block_size)
    else:
        result = complete(args.poly, method, args.block_size)
    out = CompleteOut(method=method.value, result=PolyOut.of(result))
    return out, out.result.poly


_OPERATORS: Dict[str, Callable[[Optional[int]], Operator]] = {
    "D": lambda n: D,
    "L": lambda n: L,
    "W": lambda n: W,
    "expD": lambda n: EXP_D,
    "Delta": lambda n: delta(n if n is not None else 0),
}


def cmd_apply(args: argparse.Namespace) -> Result:
    op = _OPERATORS[args.op](args.n)
    out = ApplyOut(op=str(op), result=PolyOut.of(apply(op, args.poly)))
    return out, out.result.poly


def cmd_u(args: argparse.Namespace) -> Result:
    out = UOut(index=list(args.index), result=PolyOut.of(u_poly(args.index)))
    lines = [out.result.poly]
    if args.check_recursion:
        out.checks = [
            RecursionOut(
                name=c.name, holds=c.holds, lhs=format_poly(c.lhs), rhs=format_poly(c.rhs)
            )
            for c in u_recursion_check(args.index)
        ]
        lines += [f"{c.name}: {'holds' if c.holds else 'FAILS'}" for c in out.checks]
    return out, "\n".join(lines)


def cmd_ubasis(args: argparse.Namespace) -> Result:
    elements = [
        UElementOut(index=list(idx), poly=PolyOut.of(p))
        for idx, p in u_invariant_basis(args.d, args.g)
    ]
    out = UBasisOut(d=args.d, g=args.g, elements=elements)
    lines = [f"U_{{{','.join(map(str, e.index))}}} = {e.poly.poly}" for e in elements]
    return out, "\n".join(lines)


def cmd_dim(args: argparse.Namespace) -> Result:
    out = DimOut(d=args.d, g=args.g, dim=dim_u(args.d, args.g))
    return out, str(out.dim)


def cmd_covariant(args: argparse.Namespace) -> Result:
    cov = covariant_from_source(args.source, args.n)
    report = check_covariant(cov)
    out = CovariantOut(
        n=cov.n,
        order=cov.m,
        coeffs=[
            CoefficientOut(i=i, monomial=cov.term_label(i), poly=PolyOut.of(c))
            for i, c in enumerate(cov.coeffs)
        ],
        passed=report.passed,
        violations=[f"{v.condition}[{v.index}]: {v.detail}" for v in report.violations],
    )
    lines = [f"order: {cov.m}"]
    lines += [f"C{c.i} ({c.monomial}): {c.poly.poly}" for c in out.coeffs]
    lines.append("check: passed" if report.passed else "check: FAILED")
    lines += out.violations
    return out, "\n".join(lines)


# ----- parser ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semiinv",
        description="Semi-invariants of Jordan matrices with exact rational arithmetic",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s basis --jordan 4:L                     # a0, p2, p3 of J4
  %(prog)s check --jordan 3:L --poly "a1"         # exit 1, not semi-invariant
  %(prog)s decompose --jordan 2:L1,2:L2 --poly "a0_1*a1_2 - a1_1*a0_2"
  %(prog)s complete --method subst --uindex 0,1   # J-completion of U_{0,1}
  %(prog)s apply --op Delta --n 3 --poly "a0"
  %(prog)s dim --d 4 --g 6                        # 3
  %(prog)s covariant --n 2 --source "a1^2 - 2*a0*a2" --format json
        """,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=["text", "json"],
        default="text",
        help="Output format (default: %(default)s)",
    )
    common.add_argument(
        "--verbose", action="store_true", help="Debug logging on standard error"
    )

    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("basis", parents=[common], help="Basis forms of a Jordan matrix")
    p.add_argument("--jordan", type=_jordan_arg, required=True, help='e.g. "4:L1,3:L2"')
    p.add_argument(
        "--certify", action="store_true", help="Report the Jacobian rank at a seeded random point"
    )
    p.set_defaults(handler=cmd_basis)

    p = sub.add_parser("check", parents=[common], help="Semi-invariance and multiplier")
    p.add_argument("--jordan", type=_jordan_arg, required=True)
    p.add_argument("--poly", type=_poly_arg, required=True)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("decompose", parents=[common], help="Write p in the basis family")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--jordan", type=_jordan_arg)
    target.add_argument(
        "--u-family", type=_positive, help="Decompose a U-invariant over q1..qN instead"
    )
    p.add_argument("--poly", type=_poly_arg, required=True)
    p.add_argument(
        "--denominators",
        type=_index_arg,
        help="Solve with these fixed per-block a0 exponents (membership oracle)",
    )
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("complete", parents=[common], help="J-completion of a U-invariant")
    p.add_argument("--method", choices=[m.value for m in CompletionMethod], required=True)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--uindex", type=_index_arg, help='Stroh index, e.g. "0,2,1"')
    source.add_argument("--poly", type=_poly_arg)
    p.add_argument("--block-size", type=_positive, help="Size of S for --method subst")
    p.set_defaults(handler=cmd_complete)

    p = sub.add_parser("apply", parents=[common], help="Apply D, L, W, expD or Delta")
    p.add_argument("--op", choices=sorted(_OPERATORS), required=True)
    p.add_argument("--n", type=_non_negative, help="Parameter of Delta")
    p.add_argument("--poly", type=_poly_arg, required=True)
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("u", parents=[common], help="Stroh basis element U_k")
    p.add_argument("--index", type=_index_arg, required=True, help='e.g. "0,1,0,1"')
    p.add_argument(
        "--check-recursion", action="store_true", help="Evaluate the trailing-index recursions"
    )
    p.set_defaults(handler=cmd_u)

    for name, helptext, handler in (
        ("ubasis", "Basis of the U-invariants of degree d and weight g", cmd_ubasis),
        ("dim", "Dimension of the U-invariants of degree d and weight g", cmd_dim),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--d", type=_positive, required=True)
        p.add_argument("--g", type=_non_negative, required=True)
        p.set_defaults(handler=handler)

    p = sub.add_parser("covariant", parents=[common], help="Covariant built from a source")
    p.add_argument("--n", type=_non_negative, required=True, help="Degree of the binary form")
    p.add_argument("--source", type=_poly_arg, required=True)
    p.set_defaults(handler=cmd_covariant)

    return parser


def _emit(model: BaseModel, text: str, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(model.model_dump_json(indent=2) + "\n")
    else:
        sys.stdout.write(text + "\n")


def _usage_error(parser: argparse.ArgumentParser, message: str) -> int:
    parser.print_usage(sys.stderr)
    sys.stderr.write(f"{parser.prog}: error: {message}\n")
    return 2


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run the command and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if args.command == "apply" and args.op == "Delta" and args.n is None:
        return _usage_error(parser, "argument --n: required with --op Delta")
    if args.command == "decompose" and None not in (args.u_family, args.denominators):
        return _usage_error(parser, "argument --denominators: not allowed with --u-family")

    logger.set_verbose(args.verbose or settings.verbose)
    started = time.perf_counter()
    try:
        model, text = args.handler(args)
    except SemiInvariantError as exc:
        logger.debug(f"{args.command} failed with {exc.kind}: {exc.message}")
        error = ErrorOut(**exc.to_dict())
        witness = "".join(f"\n  {k}: {v}" for k, v in exc.witness.items())
        _emit(error, f"error: {exc.kind}: {exc.message}{witness}", args.format)
        return 1
    except ValueError as exc:
        return _usage_error(parser, str(exc))
    logger.log_performance(args.command, time.perf_counter() - started)
    _emit(model, text, args.format)
    return 0


def main() -> None:
    """Console entry point."""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("🛑 Interrupted by user")
        sys.exit(1)
    except Exception as e:
        logger.log_exception(e, "❌ Unexpected error")
        sys.exit(1)


if __name__ == "__main__":
    main()
