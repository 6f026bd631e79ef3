"""Command-line interface.

Exit codes: 0 success or verdict true, 1 verdict false or non-saturation,
2 usage or parse error, 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Sequence

from .closure import SCENARIOS, InvariantBreach, lie_closure, scenario_n2_chain, verify_maximality
from .conformal import Metric, conformal_check, conformal_dimension, so_conformal_basis
from .dsl import parse_field
from .fields import format_field, vect_dimension

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BREACH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _metric(args) -> Metric:
    m = Metric(args.p, args.q)
    if args.n is not None and args.n != m.n:
        raise UsageError(f"--n {args.n} does not match p + q = {m.n}")
    return m


def _document(command: str, inputs: dict, *, signature: Metric | None = None, cap: int | None = None,
              result: Any = None, dimensions: dict | None = None, verdict: bool | None = None,
              trace: list | None = None) -> dict:
    doc = {
        "command": command,
        "inputs": inputs,
        "signature": None if signature is None else {"p": signature.p, "q": signature.q},
        "cap": cap,
        "result": result,
        "dimensions": dimensions or {},
        "verdict": verdict,
    }
    if trace is not None:
        doc["trace"] = trace
    return doc


def _cmd_bracket(args):
    X, Y = parse_field(args.expr1, args.n), parse_field(args.expr2, args.n)
    W = X.bracket(Y)
    return EXIT_OK, _document("bracket", {"n": args.n, "fields": [format_field(X), format_field(Y)]},
                              result=format_field(W), dimensions={"degree": W.degree})


def _cmd_check(args):
    m = _metric(args)
    X = parse_field(args.expr, m.n)
    v = conformal_check(X, m)
    result = {"conformal": v.is_conformal, "factor": None if v.factor is None else str(v.factor)}
    return (EXIT_OK if v.is_conformal else EXIT_FALSE,
            _document("check", {"n": m.n, "field": format_field(X)}, signature=m,
                      result=result, verdict=v.is_conformal))


def _cmd_basis(args):
    m = _metric(args)
    basis = so_conformal_basis(m)
    return EXIT_OK, _document("basis", {"n": m.n}, signature=m, result=[format_field(X) for X in basis],
                              dimensions={"basis": len(basis), "expected": (m.n + 1) * (m.n + 2) // 2})


def _cmd_closure(args):
    if args.n < 2:
        raise UsageError("closure needs --n >= 2")
    gens = [parse_field(e, args.n) for e in args.exprs]
    if not gens:
        raise UsageError("closure needs at least one field expression")
    rep = lie_closure(gens, args.cap, workers=args.workers)
    res = rep.to_dict(include_trace=args.trace)
    trace = res.pop("trace", None)
    return (EXIT_OK if rep.saturated else EXIT_FALSE,
            _document("closure", {"n": args.n, "fields": [format_field(g) for g in gens]}, cap=args.cap,
                      result=res, dimensions={"span": rep.dimension, "full": vect_dimension(args.n, args.cap)},
                      verdict=rep.saturated, trace=trace))


def _report_document(command, inputs, rep, with_trace):
    res = rep.to_dict(include_trace=with_trace)
    trace = res.pop("trace", None)
    dims = {s.name: s.dimension for s in rep.stages}
    dims["final"] = rep.final_span.dimension
    return (EXIT_OK if rep.verdict else EXIT_FALSE,
            _document(command, inputs, signature=rep.signature, cap=rep.cap, result=res,
                      dimensions=dims, verdict=rep.verdict, trace=trace))


def _cmd_verify(args):
    m = _metric(args)
    seed = parse_field(args.seed, m.n)
    rep = verify_maximality(m, seed, args.cap, workers=args.workers)
    return _report_document("verify", {"n": m.n, "seed": format_field(seed)}, rep, args.trace)


def _cmd_scenario(args):
    seed = parse_field(args.seed, 2) if args.seed else None
    rep = scenario_n2_chain(args.which, args.cap, seed=seed, workers=args.workers)
    return _report_document("scenario", {"which": args.which, "seed": format_field(rep.seed)}, rep, args.trace)


def _cmd_dims(args):
    m = _metric(args)
    k = conformal_dimension(m, args.cap)
    return EXIT_OK, _document("dims", {"n": m.n}, signature=m, cap=args.cap, result=k,
                              dimensions={"conformal": k, "so_basis": len(so_conformal_basis(m)),
                                          "ambient": vect_dimension(m.n, args.cap)})


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    sig = _Parser(add_help=False)
    sig.add_argument("--n", type=int)
    sig.add_argument("--p", type=int, required=True)
    sig.add_argument("--q", type=int, required=True)
    par = _Parser(add_help=False)
    par.add_argument("--workers", type=int, default=1, help="threads for bracket evaluation")
    par.add_argument("--trace", action="store_true", help="include the witness trace")

    parser = _Parser(prog="confmax", description="Polynomial vector fields and conformal maximality checks")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bracket", parents=[common], help="Lie bracket of two fields")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("expr1")
    p.add_argument("expr2")
    p.set_defaults(func=_cmd_bracket)

    p = sub.add_parser("check", parents=[common, sig], help="conformal predicate")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("basis", parents=[common, sig], help="so(p+1,q+1) basis")
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("closure", parents=[common, par], help="degree-capped Lie closure")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("exprs", nargs="*")
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("verify", parents=[common, sig, par], help="maximality certificate")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--seed", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("scenario", parents=[common, par], help="dimension-two subalgebra chains")
    p.add_argument("--which", required=True, choices=SCENARIOS)
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--seed")
    p.set_defaults(func=_cmd_scenario)

    p = sub.add_parser("dims", parents=[common, sig], help="dimension of conformal fields of degree <= cap")
    p.add_argument("--cap", type=int, required=True)
    p.set_defaults(func=_cmd_dims)
    return parser


def run_command(argv: Sequence[str]) -> tuple[int, dict, bool]:
    """Execute one command; returns (exit code, document, json requested)."""
    parser = build_parser()
    want_json = "--json" in argv
    try:
        args = parser.parse_args(list(argv))
        if args.verbose:
            logging.basicConfig(level=logging.DEBUG)
        code, doc = args.func(args)
    except InvariantBreach as exc:
        return EXIT_BREACH, {"command": argv[0] if argv else None, "error": f"internal invariant breach: {exc}"}, want_json
    except (UsageError, ValueError, IndexError) as exc:
        return EXIT_USAGE, {"command": argv[0] if argv else None, "error": str(exc)}, want_json
    return code, doc, want_json


def _render(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _render(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines += _render(v, indent + 1)
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(v: Any) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return str(v)


def format_document(doc: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(doc, indent=2, sort_keys=False)
    return "\n".join(_render({k: v for k, v in doc.items() if v is not None}))


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    code, doc, as_json = run_command(argv)
    stream = sys.stderr if "error" in doc and not as_json else sys.stdout
    print(format_document(doc, as_json), file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
