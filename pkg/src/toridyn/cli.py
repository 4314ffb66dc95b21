"""Command-line front end.

Scenario input is either a named built-in example (--example NAME) or a
JSON file with exact rationals written as "p/q" or decimal strings:

    {"torus": {"J": [["0", "-1"], ["1", "0"]]},
     "endomorphism": {"M": [["2", "0"], ["0", "2"]], "tau": ["0", "0"]},
     "sublattices": {"diag": [["1", "0"], ["0", "1"]]}}

Exit codes: 0 success, 1 property violation, 2 parse error, 3 domain or
validation error, 4 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import (DomainError, InvariantViolation, ParseError,
                     ResourceError, ToridynError)
from .exactnum import DEFAULT_PRECISION
from .matlin import RationalMatrix
from .torus import make_torus, make_subtorus
from .endo import eigen_split, iterate, make_endo, unity_free
from .dynamics import (DEFAULT_NODE_BUDGET, DEFAULT_ORBIT_BOUND, fixed_points,
                       subtorus_orbit, torsion_dynamics)
from .classify import (chain_violations, dynamical_degrees, full_report,
                       verify_iterates)
from .scenarios import get_example, order_by_name, named_examples, random_endo

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_DOMAIN, EXIT_RESOURCE = 0, 1, 2, 3, 4


# ---------------------------------------------------------------------------
# Scenario parsing


def _parse_rational(text, where):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: {text!r} is not an exact rational") from None


def _parse_matrix(rows, where):
    if (not isinstance(rows, list) or not rows
            or any(not isinstance(r, list) for r in rows)):
        raise ParseError(f"{where}: expected a list of rows")
    width = len(rows[0])
    out = []
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"{where}: row {i} has length {len(row)}, expected {width}")
        out.append([_parse_rational(x, f"{where}[{i}][{j}]")
                    for j, x in enumerate(row)])
    return RationalMatrix(out)


def load_scenario_file(path):
    """Parse a JSON scenario file into (endo, sublattices)."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    try:
        torus_doc = doc["torus"]
        endo_doc = doc["endomorphism"]
        j = _parse_matrix(torus_doc["J"], "torus.J")
        m = _parse_matrix(endo_doc["M"], "endomorphism.M")
    except (KeyError, TypeError):
        raise ParseError(f"{path}: missing torus.J or endomorphism.M") from None
    tau = None
    if endo_doc.get("tau") is not None:
        tau = tuple(_parse_rational(x, f"endomorphism.tau[{i}]")
                    for i, x in enumerate(endo_doc["tau"]))
    torus = make_torus(j)
    endo = make_endo(torus, m, tau)
    sublattices = {}
    for name, cols in (doc.get("sublattices") or {}).items():
        mat = _parse_matrix(cols, f"sublattices.{name}")
        # scenario files list generators as rows for readability
        sublattices[name] = tuple(tuple(int(x) for x in row) for row in mat.entries)
    return endo, sublattices


def resolve_scenario(args):
    if args.example is not None:
        sc = get_example(args.example)
        return sc.endo, dict(sc.sublattices)
    if getattr(args, "scenario", None):
        return load_scenario_file(args.scenario)
    raise ParseError("provide a scenario file or --example NAME")


def _named_subtorus(endo, sublattices, name):
    if name is None:
        raise DomainError("this subcommand requires --sublattice NAME")
    if name not in sublattices:
        raise DomainError(
            f"unknown sublattice {name!r}; known: {', '.join(sorted(sublattices)) or 'none'}")
    cols = sublattices[name]
    basis = RationalMatrix.from_columns(
        [tuple(Fraction(x) for x in col) for col in cols])
    return make_subtorus(endo.torus, basis)


# ---------------------------------------------------------------------------
# Emission


def emit(doc, fmt, text_renderer=None):
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    else:
        print(text_renderer() if text_renderer else _default_text(doc))


def _default_text(doc, indent=""):
    lines = []
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_default_text(value, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines)


def _gauss_poly_doc(poly):
    return [[str(c.re), str(c.im)] for c in poly]


# ---------------------------------------------------------------------------
# Subcommands


def cmd_classify(args):
    endo, _ = resolve_scenario(args)
    report = full_report(endo, args.precision)
    emit(report.to_dict(), args.format, report.to_text)
    return EXIT_OK


def cmd_degrees(args):
    endo, _ = resolve_scenario(args)
    data = dynamical_degrees(endo, args.precision)
    doc = {
        "dynamical_degrees": [[str(lo), str(hi)] for lo, hi in data.intervals],
        "equal_consecutive_pairs": list(data.equal_consecutive_pairs),
        "exact_equalities": list(data.exact_equalities),
        "entropy": list(data.entropy),
        "precision": str(data.precision),
    }

    def text():
        lines = []
        for j, (lo, hi) in enumerate(data.intervals):
            tag = " (= next)" if j in data.equal_consecutive_pairs else ""
            lines.append(f"lambda_{j} in [{float(lo):.9f}, {float(hi):.9f}]{tag}")
        lines.append(f"entropy in [{data.entropy[0]:.9f}, {data.entropy[1]:.9f}]")
        return "\n".join(lines)

    emit(doc, args.format, text)
    return EXIT_OK


def cmd_fixed_points(args):
    endo, _ = resolve_scenario(args)
    g = iterate(endo, args.iterate) if args.iterate > 1 else endo
    fps = fixed_points(g)
    doc = {"iterate": args.iterate, "kind": fps.kind}
    if fps.kind == "finite":
        doc["count"] = len(fps.points)
        doc["points"] = [[str(c) for c in p] for p in fps.points]
    elif fps.kind == "coset-family":
        doc["subtorus_rank"] = fps.subtorus.rank
        doc["transversal"] = [[str(c) for c in p] for p in fps.transversal]
    emit(doc, args.format)
    return EXIT_OK


def cmd_torsion(args):
    endo, _ = resolve_scenario(args)
    graph = torsion_dynamics(endo, args.level, args.budget)
    doc = {
        "level": graph.level,
        "node_count": graph.node_count,
        "cycle_histogram": {str(k): v for k, v in sorted(graph.cycle_histogram.items())},
        "tail_histogram": {str(k): v for k, v in sorted(graph.tail_histogram.items())},
        "periodic_node_count": graph.periodic_node_count(),
        "fixed_node_count": graph.fixed_node_count(),
    }
    emit(doc, args.format)
    return EXIT_OK


def cmd_quotient(args):
    endo, sublattices = resolve_scenario(args)
    sub = _named_subtorus(endo, sublattices, args.sublattice)
    gamma, delta, quot = eigen_split(endo, sub)
    doc = {
        "sublattice": args.sublattice,
        "full": _gauss_poly_doc(gamma),
        "restriction": _gauss_poly_doc(delta),
        "quotient": _gauss_poly_doc(quot),
        "product_identity": "verified",
    }

    def text():
        def render(p):
            terms = []
            for k, c in enumerate(p):
                if c.re == 0 and c.im == 0:
                    continue
                coeff = str(c.re) if c.im == 0 else f"({c.re}+{c.im}i)"
                terms.append(coeff if k == 0 else f"{coeff}*x^{k}")
            return " + ".join(terms) or "0"
        return (f"restriction Delta: {render(delta)}\n"
                f"quotient:          {render(quot)}\n"
                f"full Gamma:        {render(gamma)}\n"
                "product identity Gamma = Delta * quotient: verified")

    emit(doc, args.format, text)
    return EXIT_OK


def cmd_orbit(args):
    endo, sublattices = resolve_scenario(args)
    sub = _named_subtorus(endo, sublattices, args.sublattice)
    verdict, sequence = subtorus_orbit(endo, sub, args.budget)
    if isinstance(verdict, tuple):
        verdict = f"{verdict[0]}:{verdict[1]}"
    doc = {"sublattice": args.sublattice, "verdict": verdict,
           "iterations_examined": len(sequence)}
    emit(doc, args.format)
    return EXIT_OK


def cmd_sweep(args):
    order = order_by_name(args.order)
    cells = {}
    violations = []
    for idx in range(args.count):
        f = random_endo(args.dim, order, args.height, args.seed + idx)
        report = full_report(f)
        cell = (report.polarized, report.amplified,
                "unity-free" if report.unity_free else "has-unity",
                "finite" if report.finite_order is not None else "infinite")
        cells[cell] = cells.get(cell, 0) + 1
        bad = chain_violations(report)
        if args.dim == 2 and report.unity_free and report.amplified == "no":
            bad.append("surface unity-free but not amplified")
        bad.extend(verify_iterates(f, args.iterate))
        if bad:
            violations.append((idx, f.serialize(), bad))
    doc = {
        "count": args.count,
        "dim": args.dim,
        "order": args.order,
        "seed": args.seed,
        "cells": {" / ".join(k): v for k, v in sorted(cells.items())},
        "violations": [
            {"sample_index": i, "endomorphism": s, "failures": b}
            for i, s, b in violations],
    }
    emit(doc, args.format)
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_examples(args):
    doc = {name: sc.description for name, sc in sorted(named_examples().items())}
    emit(doc, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toridyn",
        description="Exact classification and dynamics of surjective "
                    "endomorphisms of complex tori.")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p):
        p.add_argument("scenario", nargs="?", help="JSON scenario file")
        p.add_argument("--example", help="named built-in example")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--precision", type=Fraction, default=DEFAULT_PRECISION,
                       help="certified enclosure width, e.g. 1/1000000000")

    p = sub.add_parser("classify", help="full classification report")
    scenario_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("degrees", help="certified dynamical degrees")
    scenario_args(p)
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("fixed-points", help="fixed points of an iterate")
    scenario_args(p)
    p.add_argument("--iterate", type=_positive_int, default=1)
    p.set_defaults(func=cmd_fixed_points)

    p = sub.add_parser("torsion", help="orbit graph on m-torsion")
    scenario_args(p)
    p.add_argument("--level", type=_positive_int, required=True)
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("quotient", help="eigenvalue split along a subtorus")
    scenario_args(p)
    p.add_argument("--sublattice", help="named sublattice from the scenario")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("orbit", help="orbit of a subtorus")
    scenario_args(p)
    p.add_argument("--sublattice", help="named sublattice from the scenario")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_ORBIT_BOUND)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("sweep", help="random verification sweep")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--count", type=_positive_int, default=100)
    p.add_argument("--dim", type=_positive_int, default=2)
    p.add_argument("--order", default="gaussian")
    p.add_argument("--height", type=_positive_int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterate", type=_positive_int, default=3,
                   help="iterate-stability depth per sample")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("examples", help="list named examples")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_examples)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error[parse]: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceError as exc:
        print(f"error[resource]: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantViolation as exc:
        print(f"error[violation]: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except DomainError as exc:
        print(f"error[domain]: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ToridynError as exc:  # pragma: no cover - residual mapping
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
