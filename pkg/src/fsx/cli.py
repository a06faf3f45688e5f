"""Command line interface.

Exit codes: 0 success (including INCONCLUSIVE checks), 1 input error,
2 expression parse error, 3 gate failure, 4 check FAIL.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import space_algebra as SA
from .factorize import (
    ExponentMismatch,
    UnsupportedWeight,
    WeightMismatch,
    certify_factorization,
    explicit_sym_factorize,
    lp_factorize,
)
from .norms import UnsupportedFamily, WeightedLebesgue, ZeroNorm
from .operators import hardy, hardy_composite, hardy_dual
from .stepfn import StepError, StepFunction, rearrange, tandori_majorant
from .syntax import ExprSyntaxError, UnknownFamily, parse, print_expr, to_json_obj
from .verify import GateFailed, load_scenarios, run_scenario
from .weights import Power

EXIT_OK, EXIT_INPUT, EXIT_PARSE, EXIT_GATE, EXIT_FAIL = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--domain", choices=SA.DOMAINS, default="inf", help="(0,inf) or (0,1)")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--grid", type=int, default=8, help="sample points per piece")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fsx", description="Function-space algebra and numeric checks.")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("simplify", help="rewrite an expression to closed form")
    p.add_argument("expr", help="expression, or - for stdin")
    p.add_argument("--no-fatou", action="store_true", help="do not assume E'' = E")
    _common(p)

    p = sub.add_parser("classify", help="nontriviality, quasi-normability and normability")
    p.add_argument("expr")
    _common(p)

    p = sub.add_parser("norm", help="quasi-norm of a step function")
    p.add_argument("--space", required=True)
    p.add_argument("--fn", required=True, help="StepFunction JSON file, or - for stdin")
    _common(p)

    p = sub.add_parser("factorize", help="explicit factorization x = g h")
    p.add_argument("--fn", required=True)
    p.add_argument("--E", dest="E", required=True, help="weighted Lebesgue space, e.g. 'L(4, t^0.1)'")
    p.add_argument("--F", dest="F", required=True)
    p.add_argument("--mode", choices=("lp", "sym"), default="sym")
    p.add_argument("--r", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("verify", help="run a registered scenario")
    p.add_argument("scenario", help="scenario id, or 'all'")
    _common(p)

    p = sub.add_parser("emit-csv", help="sample a function or one of its transforms")
    p.add_argument("--fn", required=True)
    p.add_argument(
        "--transform",
        choices=("f", "rearrange", "hardy", "hardy_dual", "composite", "majorant"),
        default="f",
    )
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--upto", type=float, default=None, help="right end of the sample range")
    _common(p)
    return ap


# -- helpers -----------------------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _expr_text(src: str) -> str:
    return sys.stdin.read() if src == "-" else src


def _load_fn(path: str) -> StepFunction:
    text = _read(path)
    try:
        return StepFunction.from_json(text)
    except (ValueError, KeyError, TypeError, StepError) as e:
        raise InputError(f"bad step function in {path}: {e}") from None


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _lebesgue(expr: SA.Expr, L: float) -> WeightedLebesgue:
    if not (isinstance(expr, SA.Lebesgue) and isinstance(expr.weight, SA.PowerW)):
        raise InputError(f"{print_expr(expr)} is not a power-weight Lebesgue space")
    p = math.inf if expr.p == SA.INF else float(expr.p)
    return WeightedLebesgue(p, Power(float(expr.weight.alpha)), L)


# -- verbs ---------------------------------------------------------------------------

def cmd_simplify(args) -> int:
    e = parse(_expr_text(args.expr), args.domain)
    res = SA.simplify(e, fatou=not args.no_fatou)
    if args.format == "json":
        obj = res.to_json_obj()
        obj["ast"] = to_json_obj(res.expr)
        _emit(args, json.dumps(obj, indent=2))
    else:
        lines = [str(res.expr)]
        lines += [f"  [{entry['rule']}] {entry['citation']}" for entry in res.log]
        lines += [f"  unresolved: {node}: {why}" for node, why in res.unresolved]
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    e = parse(_expr_text(args.expr), args.domain)
    rep = SA.classify(e)
    if args.format == "json":
        _emit(args, json.dumps({"expr": print_expr(e), **rep.to_json_obj()}, indent=2))
    else:
        lines = [
            print_expr(e),
            f"  nontrivial:   {rep.nontrivial}",
            f"  quasi-normed: {rep.quasi_normed}",
            f"  normable:     {rep.normable}",
        ]
        lines += [f"  note: {n}" for n in rep.notes]
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_norm(args) -> int:
    e = parse(args.space, args.domain)
    f = _load_fn(args.fn)
    space = SA.to_numeric(e, density=max(args.grid, 64))
    res = space.evaluate(f)
    if args.format == "json":
        _emit(args, json.dumps({"space": print_expr(e), **res.to_json_obj()}))
    elif args.format == "csv":
        _emit(args, f"space,value,resampling_error\n\"{print_expr(e)}\",{res.value!r},{res.resampling_error!r}")
    else:
        _emit(args, repr(res.value) if math.isfinite(res.value) else "inf")
    return EXIT_OK


def cmd_factorize(args) -> int:
    f = _load_fn(args.fn)
    E = _lebesgue(parse(args.E, args.domain), f.L)
    F = _lebesgue(parse(args.F, args.domain), f.L)
    if args.mode == "lp":
        p = 1.0 / ((0 if math.isinf(E.p) else 1 / E.p) + (0 if math.isinf(F.p) else 1 / F.p))
        a = E.weight.alpha + F.weight.alpha
        fac = lp_factorize(f, p, E.p, F.p, Power(a), E.weight, F.weight)
    else:
        fac = explicit_sym_factorize(f, E, F, args.r, density=args.grid)
    kappa = fac.kappa if fac.kappa is not None and math.isfinite(fac.kappa) else None
    obj = fac.to_json_obj()
    if kappa is not None:
        cert = certify_factorization(fac, kappa, tol=args.tol)
        obj["certificate"] = cert.to_json_obj()
        status = cert.status
    else:
        status = "PASS" if fac.product_residual <= args.tol else "FAIL"
        obj["certificate"] = {"status": status, "note": "no finite kappa; residual only"}
    _emit(args, json.dumps(obj, indent=2 if args.format != "text" else None))
    return EXIT_OK if status == "PASS" else EXIT_FAIL


def cmd_verify(args) -> int:
    ids = list(load_scenarios()) if args.scenario == "all" else [args.scenario]
    reports, code = [], EXIT_OK
    for sid in ids:
        try:
            rep = run_scenario(sid, seed=args.seed)
        except GateFailed as g:
            print(f"{sid}: gate failed: {g.reason}", file=sys.stderr)
            code = max(code, EXIT_GATE) if code != EXIT_FAIL else code
            continue
        except KeyError as k:
            raise InputError(str(k.args[0])) from None
        reports.append(rep)
        if rep.status == "FAIL":
            code = EXIT_FAIL
        elif rep.gate and code == EXIT_OK:
            code = EXIT_GATE
    if not reports:
        return code
    if args.format == "json":
        objs = [r.to_json_obj() for r in reports]
        _emit(args, json.dumps(objs[0] if len(objs) == 1 else objs, indent=2))
    else:
        lines = []
        for r in reports:
            lines.append(r.summary_line())
            lines += [f"    gate: {g}" for g in r.gate]
        _emit(args, "\n".join(lines))
    return code


def cmd_emit_csv(args) -> int:
    f = _load_fn(args.fn)
    upto = args.upto or (f.support_bound * 2 if f.n else 1.0)
    if math.isfinite(f.L):
        upto = min(upto, f.L)
    n = max(args.grid, 1) * max(f.n, 1) * 4
    t = np.linspace(upto / n, upto, n)
    tr = args.transform
    if tr == "f":
        v = f(t)
    elif tr == "rearrange":
        v = rearrange(f)(t)
    elif tr == "majorant":
        v = tandori_majorant(f)(t)
    elif tr == "hardy":
        v = hardy(f, args.r)(t)
    elif tr == "hardy_dual":
        v = hardy_dual(f, args.r)(t)
    else:
        v = hardy_composite(f, args.r)(t)
    rows = ["t,value"] + [f"{a!r},{b!r}" for a, b in zip(t.tolist(), np.asarray(v, dtype=float).tolist())]
    _emit(args, "\n".join(rows))
    return EXIT_OK


VERBS = {
    "simplify": cmd_simplify,
    "classify": cmd_classify,
    "norm": cmd_norm,
    "factorize": cmd_factorize,
    "verify": cmd_verify,
    "emit-csv": cmd_emit_csv,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return VERBS[args.verb](args)
    except (ExprSyntaxError, UnknownFamily, SA.BadExponent, SA.UnknownWeight) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except GateFailed as e:
        print(f"gate failed: {e.reason}", file=sys.stderr)
        return EXIT_GATE
    except (InputError, ExponentMismatch, WeightMismatch, UnsupportedWeight, UnsupportedFamily, ZeroNorm, SA.DomainMismatch) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
