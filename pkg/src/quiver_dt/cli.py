"""Command-line front end.

Subcommands:
  validate             check a quiver file for structural consistency
  dt                   invariant table for a quiver, slope, and bound
  wallcross            transform a table between two slopes and diff it
                       against the direct computation
  series               generating series of self-dual motivic invariants
                       along a ray of classes
  explain-calibration  show how the sign conventions are fixed and checked

Exit codes: 0 success, 1 validation failure, 2 regularity (no-pole)
violation, 3 calibration failure.
"""

import argparse
import json
import sys
from fractions import Fraction
from math import gcd

from .invariants import (NoPoleViolation, build_table, dt_mot, no_pole_report,
                         sd_dt_mot, table_all_regular)
from .oracle import CalibrationError, ensure_calibrated, explain_calibration
from .quiver import (SelfDualQuiver, Slope, UncalibratedError,
                     ValidationError, vtotal)
from .wallcross import (SlopePair, diff_tables, epsilon_table,
                        wallcross_epsilon)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NO_POLE = 2
EXIT_CALIBRATION = 3


def load_quiver(path: str) -> SelfDualQuiver:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    return SelfDualQuiver.from_data(data)


def parse_slope(quiver: SelfDualQuiver, text: "str | None") -> Slope:
    if not text:
        return Slope.trivial(quiver)
    mapping = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValidationError(
                f"slope entry {item!r} is not of the form vertex=value")
        try:
            mapping[key.strip()] = Fraction(val.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(
                f"slope entry {item!r}: {exc}") from exc
    return Slope.from_dict(quiver, mapping)


def parse_ray(quiver: SelfDualQuiver, text: str):
    mapping = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValidationError(
                f"ray entry {item!r} is not of the form vertex=integer")
        if key.strip() not in quiver.vertex_index:
            raise ValidationError(f"ray names unknown vertex {key.strip()}")
        try:
            mapping[key.strip()] = int(val.strip())
        except ValueError as exc:
            raise ValidationError(f"ray entry {item!r}: {exc}") from exc
    ray = tuple(mapping.get(x, 0) for x in quiver.vertices)
    if vtotal(ray) == 0 or min(ray) < 0:
        raise ValidationError("ray must be a nonzero class")
    if not quiver.is_sd_class(ray):
        raise ValidationError("ray is not a self-dual class")
    return ray


def _emit(text: str, output: "str | None") -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_validate(args) -> int:
    try:
        quiver = load_quiver(args.quiver)
    except ValidationError as exc:
        return _fail(str(exc), EXIT_VALIDATION)
    report = [
        f"quiver file: {args.quiver}",
        f"vertices: {len(quiver.vertices)} "
        f"({len(quiver.fixed_vertices)} fixed, "
        f"{len(quiver.vertex_pairs)} swapped pairs)",
        f"edges: {len(quiver.edges)} "
        f"({len(quiver.fixed_edges)} fixed, "
        f"{len(quiver.edge_pairs)} swapped pairs)",
        "structure: ok",
    ]
    _emit("\n".join(report), args.output)
    return EXIT_OK


def _format_csv(table) -> str:
    lines = [",".join(row) for row in table.csv_rows()]
    return "\n".join(lines)


def cmd_dt(args) -> int:
    try:
        quiver = load_quiver(args.quiver)
        slope = parse_slope(quiver, args.slope)
    except ValidationError as exc:
        return _fail(str(exc), EXIT_VALIDATION)
    try:
        table = build_table(quiver, slope, args.bound)
    except CalibrationError as exc:
        return _fail(str(exc), EXIT_CALIBRATION)
    text = table.to_json() if args.format == "json" else _format_csv(table)
    _emit(text, args.output)
    if not table_all_regular(table):
        bad = [r for r in no_pole_report(table) if not r["ok"]]
        for row in bad:
            print(f"error: regularity violation for {row['side']} class "
                  f"{row['class']}: pole orders {row['order_at_1']} at q=1, "
                  f"{row['order_at_-1']} at q=-1", file=sys.stderr)
        return EXIT_NO_POLE
    return EXIT_OK


def _eps_table_data(table) -> dict:
    data = {
        "slope": table.slope.to_dict(table.quiver),
        "bound": table.bound,
        "eps": [{"class": list(a), "value": str(v)}
                for a, v in sorted(table.eps.items(),
                                   key=lambda kv: (sum(kv[0]), kv[0]))],
    }
    if table.sd_eps is not None:
        data["sd_eps"] = [{"class": list(t), "value": str(v)}
                          for t, v in sorted(table.sd_eps.items(),
                                             key=lambda kv: (sum(kv[0]), kv[0]))]
    return data


def cmd_wallcross(args) -> int:
    try:
        quiver = load_quiver(args.quiver)
        plus = parse_slope(quiver, args.slope)
        minus = parse_slope(quiver, args.slope2)
    except ValidationError as exc:
        return _fail(str(exc), EXIT_VALIDATION)
    pair = SlopePair(quiver, plus, minus)
    try:
        source = epsilon_table(quiver, plus, args.bound)
        crossed = wallcross_epsilon(source, pair)
        direct = epsilon_table(quiver, minus, args.bound)
    except CalibrationError as exc:
        return _fail(str(exc), EXIT_CALIBRATION)
    diff = diff_tables(crossed, direct)
    payload = {
        "transformed": _eps_table_data(crossed),
        "direct": _eps_table_data(direct),
        "diff": [{"side": d["side"], "class": list(d["class"]),
                  "match": d["match"]} for d in diff],
        "all_match": all(d["match"] for d in diff),
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.output)
    return EXIT_OK if payload["all_match"] else EXIT_VALIDATION


def _ray_for_series(quiver: SelfDualQuiver, bound: int,
                    ray_text: "str | None"):
    if ray_text:
        return parse_ray(quiver, ray_text)
    classes = [t for t in quiver.sd_classes_up_to(bound) if vtotal(t) > 0]
    if not classes:
        raise ValidationError("no nonzero self-dual classes up to the bound")
    smallest = classes[0]
    g = 0
    for x in smallest:
        g = gcd(g, x)
    primitive = tuple(x // g for x in smallest)
    for t in classes:
        k, rem = divmod(vtotal(t), vtotal(primitive))
        if rem or tuple(x * k for x in primitive) != t:
            raise ValidationError(
                "self-dual classes span more than one ray; pick one with --ray")
    return smallest


def _term(coeff, expo: Fraction) -> str:
    if expo == 0:
        return f"({coeff})"
    if expo == 1:
        return f"({coeff})*t"
    if expo.denominator == 1:
        return f"({coeff})*t^{expo.numerator}"
    return f"({coeff})*t^({expo})"


def cmd_series(args) -> int:
    try:
        quiver = load_quiver(args.quiver)
        slope = parse_slope(quiver, args.slope)
        slope.validate_self_dual(quiver)
        ray = _ray_for_series(quiver, args.bound, args.ray)
    except ValidationError as exc:
        return _fail(str(exc), EXIT_VALIDATION)
    g = 0
    for x in ray:
        g = gcd(g, x)
    terms = []
    n = 0
    try:
        while vtotal(tuple(n * x for x in ray)) <= args.bound:
            theta = tuple(n * x for x in ray)
            coeff = sd_dt_mot(quiver, slope, theta, bound=args.bound)
            terms.append(_term(coeff, Fraction(n * g, 2)))
            n += 1
    except CalibrationError as exc:
        return _fail(str(exc), EXIT_CALIBRATION)
    except NoPoleViolation as exc:
        return _fail(str(exc), EXIT_NO_POLE)
    _emit(" + ".join(terms), args.output)
    return EXIT_OK


def cmd_explain_calibration(args) -> int:
    try:
        quiver = load_quiver(args.quiver)
    except ValidationError as exc:
        return _fail(str(exc), EXIT_VALIDATION)
    text, ok = explain_calibration(quiver, bound=args.bound)
    _emit(text, args.output)
    return EXIT_OK if ok else EXIT_CALIBRATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiver-dt",
        description="Exact motivic and numerical invariants of self-dual "
                    "quivers under slope stability.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, bound_default=4):
        p.add_argument("quiver", help="path to a quiver JSON file")
        p.add_argument("--bound", type=int, default=bound_default,
                       help="total dimension bound (default %(default)s)")
        p.add_argument("--output", help="write output to this file")

    p = sub.add_parser("validate", help="structural checks on a quiver file")
    p.add_argument("quiver", help="path to a quiver JSON file")
    p.add_argument("--output", help="write output to this file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dt", help="full invariant table")
    add_common(p)
    p.add_argument("--slope", help='slope weights, e.g. "i=1,j=-1"')
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_dt)

    p = sub.add_parser("wallcross",
                       help="cross between two slopes and verify")
    add_common(p)
    p.add_argument("--slope", help="source slope weights")
    p.add_argument("--slope2", help="target slope weights")
    p.set_defaults(func=cmd_wallcross)

    p = sub.add_parser("series",
                       help="self-dual invariant series along a ray")
    add_common(p)
    p.add_argument("--slope", help="slope weights (self-dual)")
    p.add_argument("--ray", help='ray class, e.g. "i=1,j=1"')
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("explain-calibration",
                       help="derivation and checks of the sign conventions")
    add_common(p, bound_default=2)
    p.set_defaults(func=cmd_explain_calibration)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UncalibratedError as exc:
        return _fail(str(exc), EXIT_CALIBRATION)


if __name__ == "__main__":
    sys.exit(main())
