"""Command-line front end.

    nordentwin validate   FILE
    nordentwin classify   FILE
    nordentwin tables     NAMES FILE        (NAMES comma separated)
    nordentwin invariance FILE
    nordentwin theorem3   FILE
    nordentwin example                      (print the built-in spec file)

``--example`` replaces FILE with the built-in 4-parameter example.
Exit status: 0 success, 1 a check failed, 2 bad input or usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from .errors import NordenError, SpecParseError, ValidationError
from .geometry import FrameSpec, validate_spec
from .norden import exterior_lee_forms
from .scalars import Polynomial, as_rational
from .spec_io import builtin_example, dump_spec, load_spec
from .tensor import table_rows
from .twin import build_context, invariance_suite, theorem3_criteria

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUBCOMMANDS = ("validate", "classify", "tables", "invariance", "theorem3")


class UsageError(NordenError, ValueError):
    pass


def _tables_of(name, ctx):
    o, t = ctx.objects, ctx.objects_twin
    if name == "nabla":
        return [("nabla", o.conn.gamma)]
    if name == "nabla-twin":
        return [("nabla~", t.conn.gamma)]
    if name == "F":
        return [("F", o.F)]
    if name == "F-twin":
        return [("F~", t.F)]
    if name == "theta":
        return [("theta", o.theta), ("theta*", o.theta_star),
                ("theta~", t.theta), ("theta~*", t.theta_star)]
    if name == "dtheta":
        d, ds = exterior_lee_forms(o, ctx.spec)
        return [("dtheta", d), ("dtheta*", ds)]
    if name == "Phi":
        return [("Phi", o.Phi03), ("f", o.f), ("f*", o.f_star)]
    if name == "R":
        return [("R", o.R04)]
    if name == "R-twin":
        return [("R~", t.R04)]
    if name == "ricci":
        return [("rho", o.ricci), ("tau", o.scalar), ("rho~", t.ricci), ("tau~", t.scalar)]
    if name == "P":
        return [("P", o.lowered(o.P13))]
    if name == "K":
        return [("K", o.lowered(o.K13))]
    if name == "D":
        return [("D", o.D.gamma)]
    if name == "N":
        return [("N", o.N03)]
    if name == "S":
        return [("S", o.S03)]
    if name == "norms":
        return [("|nabla J|^2", o.nablaJ_sqnorm), ("|nabla~ J|^2", t.nablaJ_sqnorm)]
    raise UsageError(f"unknown table {name!r}; choose from {', '.join(TABLE_NAMES)}")


TABLE_NAMES = ("nabla", "nabla-twin", "F", "F-twin", "theta", "dtheta", "Phi", "R",
               "R-twin", "ricci", "P", "K", "D", "N", "S", "norms")


@dataclass
class ReportRequest:
    subcommand: str
    tables: tuple = ()
    substitution: dict = field(default_factory=dict)
    fmt: str = "text"
    include_zero: bool = False


def parse_substitution(text: str | None) -> dict:
    """``"l1=1,l2=-1/2"`` -> ``{"l1": Fraction(1), "l2": Fraction(-1, 2)}``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name:
            raise UsageError(f"bad substitution {item!r}; expected name=p/q")
        if name in out:
            raise UsageError(f"parameter {name!r} substituted twice")
        try:
            out[name] = as_rational(value.strip())
        except (TypeError, ValueError, ZeroDivisionError):
            raise UsageError(f"bad rational {value!r} for {name!r}") from None
    return out


def _rows(obj):
    """(index string, value string) pairs; scalars get an empty index."""
    if isinstance(obj, Polynomial):
        return [("", str(obj))]
    return [(" ".join(map(str, idx)), str(p)) for idx, p in obj]


def _emit_tables(named, fmt, include_zero, out):
    collected = []
    for name, obj in named:
        rows = obj if isinstance(obj, Polynomial) else table_rows(obj, include_zero)
        collected.append((name, _rows(rows)))
    if fmt == "structured":
        doc = {name: {idx: v for idx, v in rows} for name, rows in collected}
        out.write(json.dumps({"tables": doc}, indent=2, ensure_ascii=False) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["tensor", "index", "value"])
        for name, rows in collected:
            for idx, v in rows:
                w.writerow([name, idx, v])
    else:
        for k, (name, rows) in enumerate(collected):
            if k:
                out.write("\n")
            out.write(f"# {name}\n")
            for idx, v in rows:
                out.write(f"{idx} : {v}\n" if idx else f"{v}\n")


def run(request: ReportRequest, spec: FrameSpec, out=None) -> int:
    """Execute one request against ``spec``; returns the exit status."""
    out = sys.stdout if out is None else out
    if request.subcommand not in SUBCOMMANDS:
        raise UsageError(f"unknown subcommand {request.subcommand!r}")
    if request.fmt not in ("text", "csv", "structured"):
        raise UsageError(f"unknown format {request.fmt!r}")
    unknown = sorted(set(request.substitution) - set(spec.params))
    if unknown:
        raise UsageError(f"unknown parameter(s) in substitution: {', '.join(unknown)}")
    for name in request.tables:
        if name not in TABLE_NAMES:
            raise UsageError(f"unknown table {name!r}; choose from {', '.join(TABLE_NAMES)}")
    if request.substitution:
        spec = spec.substitute(request.substitution)

    if request.subcommand == "validate":
        report = validate_spec(spec)
        if request.fmt == "structured":
            doc = {"ok": report.ok,
                   "checks": [{"name": c.name, "passed": c.passed,
                               "index": None if c.index is None
                               else [i + 1 for i in c.index],
                               "detail": c.detail} for c in report.checks]}
            out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        elif request.fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["check", "passed", "index"])
            for c in report.checks:
                idx = "" if c.index is None else " ".join(str(i + 1) for i in c.index)
                w.writerow([c.name, c.passed, idx])
        else:
            out.write(str(report) + "\n")
            out.write("valid\n" if report.ok else "invalid\n")
        return EXIT_OK if report.ok else EXIT_FAIL

    validate_spec(spec).raise_if_failed()
    ctx = build_context(spec)

    if request.subcommand == "classify":
        labels = {"g": ctx.objects.label.value, "g~": ctx.objects_twin.label.value}
        if request.fmt == "structured":
            out.write(json.dumps(labels, ensure_ascii=False) + "\n")
        elif request.fmt == "csv":
            out.write("metric,class\n" + "".join(f"{k},{v}\n" for k, v in labels.items()))
        else:
            out.write("".join(f"{k}: {v}\n" for k, v in labels.items()))
        return EXIT_OK

    if request.subcommand == "tables":
        named = [item for name in request.tables for item in _tables_of(name, ctx)]
        _emit_tables(named, request.fmt, request.include_zero, out)
        return EXIT_OK

    if request.subcommand == "invariance":
        report = invariance_suite(ctx)
        if request.fmt == "structured":
            out.write(report.to_json() + "\n")
        elif request.fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["check", "status", "index", "detail"])
            for r in report.checks:
                idx = "" if r.index is None else " ".join(map(str, r.index))
                w.writerow([r.name, r.status, idx, r.detail])
        else:
            out.write(str(report) + "\n")
        return EXIT_OK if report.ok else EXIT_FAIL

    report = theorem3_criteria(ctx)
    if request.fmt == "structured":
        out.write(json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n")
    elif request.fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["criterion", "holds", "conditions"])
        w.writerow(["i", report.criterion_i, "; ".join(map(str, report.lee_conditions))])
        w.writerow(["ii", report.criterion_ii, ""])
        w.writerow(["iii g", report.criterion_iii[0], "; ".join(map(str, report.conditions_g))])
        w.writerow(["iii g~", report.criterion_iii[1],
                    "; ".join(map(str, report.conditions_twin))])
    else:
        out.write(str(report) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--example", action="store_true",
                        help="use the built-in 4-parameter example instead of FILE")
    common.add_argument("--subst", metavar="NAME=P/Q,...",
                        help="substitute rational values for parameters")
    common.add_argument("--format", dest="fmt", choices=("text", "csv", "structured"),
                        default="text")
    common.add_argument("--all", dest="include_zero", action="store_true",
                        help="include zero components in tables")

    parser = argparse.ArgumentParser(
        prog="nordentwin",
        description="Exact Norden-geometry computations on Lie-algebra frames.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {"validate": "check brackets, J and g of a spec file",
             "classify": "Norden class of g and of the twin metric",
             "invariance": "run the 13 twin-interchange checks",
             "theorem3": "closedness, conformal-flatness and norm conditions"}
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file", nargs="?", help="JSON spec file")
    p = sub.add_parser("tables", parents=[common], help="component tables of named objects")
    p.add_argument("names", help=f"comma-separated subset of: {', '.join(TABLE_NAMES)}")
    p.add_argument("file", nargs="?", help="JSON spec file")
    sub.add_parser("example", help="print the built-in spec file")
    return parser


def _load(args) -> FrameSpec:
    if args.example:
        if args.file:
            raise UsageError("give either FILE or --example, not both")
        return builtin_example()
    if not args.file:
        raise UsageError("missing FILE (or --example)")
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    # validate runs its own report; everything else needs a valid spec up front
    return load_spec(text, validate=args.subcommand != "validate")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.subcommand == "example":
        sys.stdout.write(dump_spec(builtin_example()))
        return EXIT_OK
    try:
        spec = _load(args)
        tables = ()
        if args.subcommand == "tables":
            tables = tuple(n.strip() for n in args.names.split(",") if n.strip())
            if not tables:
                raise UsageError("no table names given")
        request = ReportRequest(args.subcommand, tables, parse_substitution(args.subst),
                                args.fmt, args.include_zero)
        buf = io.StringIO()
        status = run(request, spec, buf)
    except (UsageError, SpecParseError, ValidationError) as exc:
        print(f"nordentwin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NordenError as exc:
        print(f"nordentwin: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(buf.getvalue())
    return status


if __name__ == "__main__":
    sys.exit(main())
