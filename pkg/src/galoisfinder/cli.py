"""Command-line entry points.

Subcommands: chars (character table for a modulus), reduce (newform
reductions mod p), eigen (joint eigenspaces of commuting operators), find
(match observed Hecke data against candidates), verify-tables (round-trip the
published result tables), emit-table (normalized text rendering).

Exit codes: 0 full pass, 1 verification failure, 2 input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd

from .characters import char_name, enumerate_chars, parse_char_expr
from .eigen import OperatorFamily, galois_orbits, joint_eigenspaces
from .fields import ExtField, make_field, parse_field
from .finder import (FinderContext, MatchReport, emit_table, match,
                     verify_tables)
from .newforms import NewformDataError, NewformStore
from .reps import HeckeData, rep_to_text


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# HeckeData files: a field descriptor line, a context line, then one line
# "ell k value" per eigenvalue, values in field-element serialization.

def format_hecke_data(data: HeckeData, N: int, g: int, eta_text: str,
                      field: ExtField) -> str:
    lines = [f"field {field.descriptor()}",
             f"context N={N} g={g} eta={eta_text}"]
    for (ell, k), val in sorted(data.values.items()):
        lines.append(f"{ell} {k} {val.serialize()}")
    return "\n".join(lines) + "\n"


def parse_hecke_data(text: str):
    """-> (field, N, g, eta_text, HeckeData)."""
    field = None
    context = None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("field "):
            field = parse_field(line[len("field "):].strip())
            continue
        if line.startswith("context "):
            parts = dict(tok.split("=", 1) for tok in line[len("context "):].split())
            context = (int(parts["N"]), int(parts["g"]), parts["eta"])
            continue
        if field is None:
            raise InputError(f"line {lineno}: data before the field header")
        toks = line.split()
        if len(toks) != 3:
            raise InputError(f"line {lineno}: expected 'ell k value'")
        ell, k = int(toks[0]), int(toks[1])
        values[(ell, k)] = field.parse_element(toks[2])
    if field is None or context is None:
        raise InputError("missing field or context header")
    return field, context[0], context[1], context[2], HeckeData(values)


# ---------------------------------------------------------------------------
# operator files for the eigen subcommand: JSON with a field descriptor and
# labeled square matrices of serialized field elements.

def parse_operator_file(text: str) -> tuple[OperatorFamily, str]:
    doc = json.loads(text)
    field = parse_field(doc["field"])
    labels = []
    matrices = []
    for op in doc["operators"]:
        labels.append(tuple(op["label"]))
        matrices.append(tuple(tuple(field.parse_element(x) for x in row)
                              for row in op["matrix"]))
    eta_text = doc.get("eta", "1")
    return OperatorFamily(tuple(labels), tuple(matrices), field), eta_text


# ---------------------------------------------------------------------------

def cmd_chars(args) -> int:
    field = make_field(args.p, args.r)
    chars = enumerate_chars(args.modulus, field)
    for chi in chars:
        name = char_name(chi) or "-"
        print(f"{name:>16}  order={chi.order():<3} parity={chi.parity():<5} "
              f"{chi.serialize()}")
    return 0


def cmd_reduce(args) -> int:
    store = NewformStore.from_file(args.forms)
    field = make_field(args.p, args.r)
    failures = 0
    for label in sorted(store.records):
        try:
            reds = store.reductions(label, field)
        except NewformDataError as exc:
            print(f"{label}: {exc}")
            failures += 1
            continue
        for red in reds:
            ap = " ".join(f"a_{ell}={red.a_mod[ell].serialize()}"
                          for ell in sorted(red.a_mod))
            print(f"{label} root#{red.root_index} "
                  f"root={red.root.serialize()} {ap}")
    return 1 if failures else 0


def cmd_eigen(args) -> int:
    family, eta_text = parse_operator_file(open(args.ops).read())
    spaces, semisimple = joint_eigenspaces(family)
    eta = parse_char_expr(eta_text, args.modulus, family.field)
    orbits = galois_orbits(spaces, eta, family.field)
    print(f"dim {family.dim}, {len(spaces)} joint eigenspaces, "
          f"semisimple={semisimple}")
    for orbit in orbits:
        sys_text = " ".join(f"a({l},{k})={v.serialize()}"
                            for (l, k), v in orbit.representative)
        hm = orbit.members[0].hecke_mult if orbit.members else 0
        print(f"galois_mult={orbit.galois_mult} hecke_mult={hm} {sys_text}")
    return 0


def _print_report(report: MatchReport) -> None:
    print(f"{len(report.matches)} match(es) in {len(report.groups)} "
          f"eigensystem group(s); unique={report.unique}")
    for group, pattern in zip(report.groups, report.patterns):
        for rho in group:
            print(f"  [{pattern}] {rep_to_text(rho)}")
    for w in report.warnings:
        print(f"warning: {w}")


def cmd_find(args) -> int:
    store = NewformStore.from_file(args.forms)
    field, n_file, g_file, eta_text, data = parse_hecke_data(open(args.data).read())
    if (n_file, g_file) != (args.level, args.g):
        raise InputError(f"data file context N={n_file} g={g_file} disagrees "
                         f"with --level/--g")
    eta_arg = args.eta if args.eta is not None else eta_text
    if parse_char_expr(eta_arg, args.level, field) != \
            parse_char_expr(eta_text, args.level, field):
        raise InputError("--eta disagrees with the data file header")
    eta = parse_char_expr(eta_arg, args.level, field)
    ctx = FinderContext(args.level, args.g, eta, field, store, data.labels)
    report = match(ctx, data, det_prefilter=not args.no_det_prefilter)
    _print_report(report)
    return 0 if report.unique else 1


def cmd_verify_tables(args) -> int:
    doc = json.load(open(args.tables))
    store = NewformStore.from_file(args.forms)
    results = verify_tables(doc, store)
    failures = 0
    for res in results:
        status = "PASS" if res.ok else "FAIL"
        print(f"{status} level={res.level} g={res.g} eta={res.eta_text} "
              f"row={res.row_index} [{res.pattern}] {res.rep_text}")
        for note in res.notes:
            print(f"      {note}")
        if not res.ok:
            failures += 1
    print(f"{len(results) - failures}/{len(results)} rows verified")
    return 1 if failures else 0


def cmd_emit_table(args) -> int:
    doc = json.load(open(args.tables))
    out = "\n".join(emit_table(t) for t in doc["tables"])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="galoisfinder")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chars", help="print the character table for a modulus")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.set_defaults(func=cmd_chars)

    p = sub.add_parser("reduce", help="reduce newform records mod a prime")
    p.add_argument("--forms", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("eigen", help="joint eigenspaces of commuting operators")
    p.add_argument("--ops", required=True)
    p.add_argument("--modulus", type=int, default=1,
                   help="modulus for the nebentype used in orbit grouping")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("find", help="match Hecke data against candidates")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--eta", default=None)
    p.add_argument("--data", required=True)
    p.add_argument("--forms", required=True)
    p.add_argument("--no-det-prefilter", action="store_true")
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("verify-tables", help="round-trip the result tables")
    p.add_argument("--tables", required=True)
    p.add_argument("--forms", required=True)
    p.set_defaults(func=cmd_verify_tables)

    p = sub.add_parser("emit-table", help="normalized text rendering of tables")
    p.add_argument("--tables", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_emit_table)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
