"""Command-line front end: ``cosetfusion {kac,dims,fusion,chars,verify-decomp,verify-factorization}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import threec
from .characters import Minimal, bracket, evaluate, verify_e8_decomposition, verify_weight_positivity
from .commutant import BranchingTable, Check, derived_qdim, fp_dimensions, run_checks
from .fusion import FusionRing, fuse, minimal_model_fusion
from .kac import MinimalModel, PrimaryField, enumerate_primaries, format_fraction, parse_fraction
from .modular import relabel, s_matrix

ORDER_ENV = "COSETFUSION_ORDER"
INSTANCES = ("3c",)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return 10
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{ORDER_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise UsageError(f"{ORDER_ENV} must be positive")
    return value


def _rational(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _model(args) -> MinimalModel:
    if args.m is None:
        raise UsageError("--m is required")
    if args.m < 1:
        raise UsageError("--m must be a positive integer")
    return MinimalModel(args.m)


def _instance(name: str) -> str:
    if name not in INSTANCES:
        raise UsageError(f"unknown instance {name!r} (known: {', '.join(INSTANCES)})")
    return name


def _field(model: MinimalModel, text: str) -> PrimaryField:
    try:
        return PrimaryField.parse(text, model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# subcommands ---------------------------------------------------------------------


def cmd_kac(args, out) -> int:
    model = _model(args)
    data = s_matrix(model)
    qd = data.qdim
    rows = [
        {"label": f.short, "r": f.r, "s": f.s, "h": format_fraction(f.h), "qdim": qd[f]}
        for f in enumerate_primaries(model)
    ]
    if args.json:
        json.dump({"m": model.m, "c": format_fraction(model.c), "fields": rows}, out, indent=2)
        out.write("\n")
    else:
        out.write(f"# m={model.m}  c={format_fraction(model.c)}  fields={len(rows)}\n")
        out.write("label\th\tqdim\n")
        for r in rows:
            out.write(f"{r['label']}\t{r['h']}\t{r['qdim']:.12f}\n")
    return 0


def cmd_dims(args, out) -> int:
    if args.instance:
        _instance(args.instance)
        ds = threec.load_dataset()
        qd = derived_qdim(ds.branching, fp_dimensions(threec.build_u_ring()), threec.ising_data().qdim)
        weights = ds.lowest_weights()
        rows = [{"label": lab, "h": format_fraction(weights[lab]), "qdim": qd[lab]}
                for lab in ds.branching.commutant_labels()]
    else:
        model = _model(args)
        qd = s_matrix(model).qdim
        rows = [{"label": f.short, "h": format_fraction(f.h), "qdim": qd[f]} for f in enumerate_primaries(model)]
    if args.json:
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        out.write("label\th\tqdim\n")
        for r in rows:
            out.write(f"{r['label']}\t{r['h']}\t{r['qdim']:.12f}\n")
    return 0


def cmd_fusion(args, out) -> int:
    if args.instance:
        _instance(args.instance)
        ring = threec.build_m_ring()
        parse = str
    else:
        model = _model(args)
        ring = minimal_model_fusion(model).relabel(lambda f: f.short)
        parse = lambda t: _field(model, t).short  # noqa: E731
    if (args.a is None) != (args.b is None):
        raise UsageError("--a and --b must be given together")
    if args.a is not None:
        a, b = parse(args.a), parse(args.b)
        for x in (a, b):
            if x not in ring.labels:
                raise UsageError(f"unknown label {x!r}")
        prod = fuse(ring, [a], [b])
        terms = [c for c in ring.labels for _ in range(prod.get(c, 0))]
        if args.json:
            json.dump({"a": a, "b": b, "product": terms}, out)
            out.write("\n")
        else:
            out.write(" ".join(terms) + "\n")
        return 0
    if args.json:
        json.dump(ring.to_json(), out, indent=2)
        out.write("\n")
    else:
        out.write(ring.to_markdown() + "\n")
    return 0


def cmd_chars(args, out) -> int:
    order = args.order if args.order is not None else _default_order()
    if args.field is not None:
        leaf = Minimal(_field(_model(args), args.field))
    else:
        if args.c is None or args.h is None:
            raise UsageError("give either --m with --field, or --c with --h")
        try:
            leaf = bracket(args.c, args.h)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    f = leaf.field
    lead = f.h - f.model.c / 24
    series = evaluate(leaf, lead + order + 1)
    if args.json:
        json.dump({
            "c": format_fraction(f.model.c),
            "h": format_fraction(f.h),
            "label": str(f),
            "terms": [[format_fraction(lead + n), series.coefficient(lead + n)] for n in range(order + 1)],
        }, out, indent=2)
        out.write("\n")
    else:
        for n in range(order + 1):
            e = lead + n
            out.write(f"{format_fraction(e)}\t{series.coefficient(e)}\n")
    return 0


def cmd_verify_decomp(args, out) -> int:
    order = args.order if args.order is not None else _default_order()
    if order < 1:
        raise UsageError("--order must be at least 1")
    report = verify_e8_decomposition(order)
    if args.json:
        json.dump({
            "passed": report.passed,
            "order": order,
            "tuples": report.tuples,
            "leading_exponent": format_fraction(report.lhs_leading) if report.lhs_leading is not None else None,
            "central_charge_total": format_fraction(report.central_charge_total),
            "first_mismatch": None if report.first_mismatch is None else {
                "exponent": format_fraction(report.first_mismatch[0]),
                "lhs": report.first_mismatch[1],
                "rhs": report.first_mismatch[2],
            },
        }, out, indent=2)
        out.write("\n")
    else:
        out.write(("PASS" if report.passed else "FAIL") + "\n")
        out.write(report.summary() + "\n")
    return 0 if report.passed else 1


def _threec_checks() -> list[Check]:
    ds = threec.load_dataset()
    checks, derived = run_checks(ds.branching, threec.build_u_ring(), threec.ising_ring(), threec.ising_data())
    if derived is not None:
        fails = threec.rule_family_failures(derived)
        checks.append(Check("four displayed M fusion rule families", not fails, "; ".join(fails[:2])))
    matches = threec.kac_table_matches()
    missing = [(h1, h9) for h1, h9, f1, f9 in matches if f1 is None or f9 is None]
    checks.append(Check(f"{len(matches)} summand weights found in the Kac tables (m=1, m=9)", not missing,
                        str(missing[:3]) if missing else ""))
    pos = verify_weight_positivity(ds.decomp_specs(), threec.u_label(0))
    checks.append(Check("lowest weights: vacuum 0, all others positive", pos.ok,
                        "" if pos.ok else str(pos.failures[:2])))
    return checks


def _file_checks(args) -> list[Check]:
    try:
        table = BranchingTable.from_json(Path(args.table))
        big = FusionRing.from_json(Path(args.big_ring).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read input: {exc}") from None
    if args.sub_m is None:
        raise UsageError("--sub-m is required with --table")
    model = MinimalModel(args.sub_m)
    sub_ring = minimal_model_fusion(model).relabel(str)
    sub_data = relabel(s_matrix(model), str)
    checks, derived = run_checks(table, big, sub_ring, sub_data)
    if derived is not None and args.out:
        Path(args.out).write_text(json.dumps(derived.to_json(), indent=2) + "\n")
    return checks


def cmd_verify_factorization(args, out) -> int:
    if args.instance:
        _instance(args.instance)
        checks = _threec_checks()
        note = ("note: U(2i) x U(2j) channels use the admissible triple ((2i+1,1),(2j+1,1),(2k+1,1)) "
                "with p=11, q=12; the literal (2i-1,1) form gives r=-1 at i=0 and no unit")
    elif args.table:
        checks = _file_checks(args)
        note = None
    else:
        raise UsageError("give --instance or --table")
    ok = all(c.ok for c in checks)
    if args.json:
        json.dump({"passed": ok, "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]},
                  out, indent=2)
        out.write("\n")
    else:
        for c in checks:
            out.write(c.line() + "\n")
        if note:
            out.write(note + "\n")
        out.write(("PASS" if ok else "FAIL") + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cosetfusion", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kac", help="list primaries of a minimal model with c, h, qdim")
    p.add_argument("--m", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_kac)

    p = sub.add_parser("dims", help="quantum dimensions")
    p.add_argument("--m", type=int)
    p.add_argument("--instance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("fusion", help="fusion table or a single product")
    p.add_argument("--m", type=int)
    p.add_argument("--instance")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fusion)

    p = sub.add_parser("chars", help="character q-expansion, 'exponent<TAB>coefficient' lines")
    p.add_argument("--c", type=_rational)
    p.add_argument("--h", type=_rational)
    p.add_argument("--m", type=int)
    p.add_argument("--field")
    p.add_argument("--order", type=int, help=f"integer steps above the leading exponent (env {ORDER_ENV})")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_chars)

    p = sub.add_parser("verify-decomp", help="check the sqrt(2)E8 character identity")
    p.add_argument("--order", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_decomp)

    p = sub.add_parser("verify-factorization", help="validate a branching table and derive commutant fusion")
    p.add_argument("--instance")
    p.add_argument("--table", help="branching table JSON")
    p.add_argument("--big-ring", help="fusion ring JSON over I")
    p.add_argument("--sub-m", type=int, help="J labels are fields 'm:r.s' of this minimal model")
    p.add_argument("--out", help="write the derived ring JSON here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_factorization)
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"cosetfusion: error: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
