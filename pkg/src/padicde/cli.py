"""Command-line front end.

Every subcommand reads one JSON document (a path, ``-`` for stdin, or the
JSON text itself), runs one engine and prints JSON or CSV.  Errors exit
with 2 (parse), 3 (precondition), 4 (precision) or 5 (internal).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .coeff import CoeffField
from .errors import PadicError, ParseError, PreconditionError
from .extended import as_rational, format_rational
from .laurent import LaurentSeries, hensel_lift, hensel_steps
from .ramification import (BreakData, HerbrandFn, PiecewiseLinear, artin_schreier_phi,
                           closed_form_bound, compose, hasse_arf_polygon, phi_from_lower, psi)

EXIT_FAILED_CHECKS = 1


# -- input ---------------------------------------------------------------------------

def load_input(arg: str | None):
    if arg is None:
        raise ParseError("--input is required")
    text = arg
    stripped = arg.lstrip()
    if arg == "-":
        text = sys.stdin.read()
    elif not stripped.startswith(("{", "[", '"')):
        try:
            with open(arg, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {arg}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc


def parse_samples(text: str | None, default):
    if text is None:
        return list(default)
    out = []
    for piece in text.split(","):
        try:
            v = as_rational(piece.strip())
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad sample {piece!r}") from exc
        if not isinstance(v, Fraction) or v <= 0:
            raise PreconditionError(f"samples must be positive rationals, got {piece!r}")
        out.append(v)
    if not out:
        raise ParseError("no samples given")
    return out


def _positive(name):
    def conv(text):
        try:
            v = int(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from exc
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v
    return conv


def _module(data):
    from .nabla.module import NablaModule
    return NablaModule.from_json(data)


def _function(data):
    fn = PiecewiseLinear.from_json(data)
    try:
        return HerbrandFn(fn.vertices, fn.final_slope)
    except PreconditionError:
        return fn


def _window(data, key="window"):
    if key not in data:
        raise ParseError(f"input lacks {key!r}")
    try:
        lo, hi = (as_rational(w) for w in data[key])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError("window must be [s_lo, s_hi]") from exc
    return Fraction(lo), Fraction(hi)


# -- commands ------------------------------------------------------------------------
# Each returns (json_payload, csv_header, csv_rows); csv parts may be None.

def cmd_radius(args):
    from .nabla.radius import generic_radius_profile
    m = _module(load_input(args.input))
    s_list = parse_samples(args.samples, [m.window[0], m.window[1]])
    prof = generic_radius_profile(m, s_list, args.budget)
    return prof.to_json(), ["s", "lambda_spec", "r", "r_minus_s", "iterations"], prof.to_rows()


def cmd_break(args):
    from .nabla.radius import highest_break_estimate
    m = _module(load_input(args.input))
    s_pair = parse_samples(args.samples, [Fraction(1, 16), Fraction(1, 32)])
    est = highest_break_estimate(m, s_pair, args.budget)
    rows = [(s, r, b) for s, r, b in est.samples]
    return est.to_json(), ["s", "r", "beta"], rows


def cmd_polygon(args):
    data = load_input(args.input)
    if isinstance(data, dict):
        data = data.get("breaks", data)
    poly = hasse_arf_polygon(BreakData.from_json(data))
    return poly.to_json(), ["x", "y"], list(poly.vertices)


def cmd_herbrand(args):
    data = load_input(args.input)
    op = args.op
    if op == "lower":
        orders = data["orders"] if isinstance(data, dict) else data
        fn = phi_from_lower(orders)
    elif op == "as":
        fn = artin_schreier_phi(int(data["d"]), int(data["p"]))
    elif op == "psi":
        fn = psi(_function(data))
    elif op == "compose":
        fn = compose(_function(data["outer"]), _function(data["inner"]))
    elif op == "eval":
        fn = _function(data["function"])
        points = [as_rational(u) for u in data["points"]]
        rows = [(u, fn(u)) for u in points]
        payload = {"values": [[format_rational(u), format_rational(y)] for u, y in rows]}
        return payload, ["u", "value"], rows
    else:
        raise PreconditionError(f"unknown herbrand operation {op!r}")
    return fn.to_json(), ["u", "value"], list(fn.vertices)


def cmd_antecedent(args):
    from .nabla.frobenius import antecedent_residual, frobenius_antecedent, radius_relation
    data = load_input(args.input)
    m = _module(data)
    window = _window(data) if "antecedent_window" not in data else _window(data, "antecedent_window")
    ant = frobenius_antecedent(m, args.order, window, args.budget)
    payload = ant.to_json()
    payload["residual"] = {format_rational(s): format_rational(v)
                           for s, v in sorted(antecedent_residual(m, ant).items())}
    s_list = parse_samples(args.samples, window)
    holds, rows = radius_relation(ant.module, m, s_list, args.budget)
    payload["radius_relation"] = {"holds": holds, "rows": [
        {"s": format_rational(s), "r_F": format_rational(a), "p_r_M": format_rational(b), "ok": ok}
        for s, a, b, ok in rows]}
    return payload, ["s", "r_F", "p_r_M", "ok"], rows


def cmd_reduce(args):
    from .nabla.reduction import approximate_reduce
    data = load_input(args.input)
    field = CoeffField.from_json(data["field"])
    try:
        M = [[LaurentSeries.from_json(field, x) for x in row] for row in data["matrix"]]
    except (TypeError, KeyError) as exc:
        raise ParseError("reduce needs 'field', 'matrix' and 'window'") from exc
    s_lo, s_hi = _window(data)
    red = approximate_reduce(M, s_lo, s_hi)
    rows = sorted(red.certificate.margins.items())
    return red.to_json(), ["s", "lambda"], rows


def cmd_solve(args):
    data = load_input(args.input)
    field = CoeffField.from_json(data["field"])
    P = [LaurentSeries.from_json(field, c) for c in data["P"]]
    s_lo, s_hi = _window(data)
    root = hensel_lift(P, args.order, s_lo, s_hi)
    steps = hensel_steps(P, args.order, s_lo, s_hi)
    payload = {"root": root.to_json(),
               "residuals": [[format_rational(x.residual_lo), format_rational(x.residual_hi)]
                             for x in steps]}
    rows = [(i, x.residual_lo, x.residual_hi) for i, x in enumerate(steps)]
    return payload, ["step", "residual_lo", "residual_hi"], rows


def cmd_bound(args):
    data = load_input(args.input)
    if not isinstance(data, dict) or "kind" not in data:
        raise ParseError("bound needs an object with 'kind'")
    params = {k: v for k, v in data.items() if k != "kind"}
    for key in ("p", "n", "q", "d"):
        if key in params:
            params[key] = int(params[key])
    value = closed_form_bound(data["kind"], **params)
    return {"kind": data["kind"], "value": format_rational(value)}, ["kind", "value"], \
        [(data["kind"], value)]


def cmd_check(args):
    from .checks import CHECKS, run_checks
    names = args.names or None
    for name in names or ():
        if name not in CHECKS:
            raise PreconditionError(f"unknown check {name!r}; known: {', '.join(CHECKS)}")
    results = run_checks(names)
    payload = {"checks": [r.to_json() for r in results],
               "passed": sum(r.passed for r in results),
               "failed": sum(r.failed for r in results)}
    rows = [(r.name, r.passed, r.failed) for r in results]
    return payload, ["name", "passed", "failed"], rows


COMMANDS = {
    "radius": cmd_radius,
    "break": cmd_break,
    "polygon": cmd_polygon,
    "herbrand": cmd_herbrand,
    "antecedent": cmd_antecedent,
    "reduce": cmd_reduce,
    "solve": cmd_solve,
    "bound": cmd_bound,
    "check": cmd_check,
}


# -- output --------------------------------------------------------------------------

def _cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, Fraction)) or hasattr(x, "sign"):
        return format_rational(x)
    return str(x)


def render(payload, header, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if header is None:
        raise PreconditionError("this command has no CSV form")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicde",
        description="Radii, breaks and Frobenius structures of p-adic differential modules.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="JSON file, '-' for stdin, or inline JSON")
    common.add_argument("--format", "-f", choices=("json", "csv"), default="json")
    common.add_argument("--budget", "-S", type=_positive("budget"), default=None,
                        help="iteration budget S for the D_m recurrence")
    common.add_argument("--order", type=_positive("order"), default=32,
                        help="truncation order (antecedent, solve)")
    common.add_argument("--samples", help='comma-separated log-radii, e.g. "1/16,1/32"')
    common.add_argument("--out", "-o", help="write the output here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "radius": "generic radius profile r(s) of a module",
        "break": "highest-break estimate from two small log-radii",
        "polygon": "Hasse-Arf polygon of break data",
        "herbrand": "Herbrand function calculus",
        "antecedent": "Frobenius antecedent with its certificate",
        "reduce": "approximate a matrix by a Laurent-polynomial one",
        "solve": "Hensel lift of a root z = 1 of a monic polynomial",
        "bound": "closed-form image and break bounds",
        "check": "run the built-in property corpus",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "herbrand":
            p.add_argument("op", choices=("compose", "psi", "lower", "as", "eval"))
        if name == "check":
            p.add_argument("names", nargs="*", help="subset of checks to run")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, header, rows = COMMANDS[args.command](args)
        text = render(payload, header, rows, args.format)
    except PadicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (KeyError, TypeError, ValueError) as exc:
        # malformed documents that slipped past the schema helpers
        print(f"error: malformed input ({type(exc).__name__}: {exc})", file=sys.stderr)
        return ParseError.exit_code
    except Exception as exc:  # noqa: BLE001 - the exit code is the contract
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return PadicError.exit_code
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "check" and payload["failed"]:
        return EXIT_FAILED_CHECKS
    return 0
