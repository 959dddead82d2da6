"""Command-line entry point: verify, loci, construct, geography, table, symmetrize.

Exit status: 0 when every requested check passes, 1 when a check fails,
2 for input errors and 3 when a budget cap is hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra_core.field import CoefficientError, FieldSpec
from .algebra_core.groebner import Budget, BudgetExceeded
from .algebra_core.orders import MonomialOrder
from .algebra_core.poly import ParseError, Polynomial, format_polynomial
from .cmf import CMFDocument, format_cmf, parse_cmf
from .formmatrix import FormMatrix, LayoutError
from . import constructors, geography, monad, projection

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# ------------------------------------------------------------------ JSON

def plain(x):
    """JSON-ready copy: Fractions become "p/q" strings, polynomials their text."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Polynomial):
        return format_polynomial(x)
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, float):
        return repr(x)
    return str(x)


def dumps(doc: dict) -> str:
    return json.dumps(plain(doc), indent=2, sort_keys=True) + "\n"


# ------------------------------------------------------------------ arguments

def parse_field(text: str | None) -> FieldSpec | None:
    if text is None:
        return None
    t = text.strip().lower()
    if t in ("q", "qq", "rationals"):
        return FieldSpec.rationals()
    if t.startswith("fp:") or t.startswith("fp "):
        t = t[3:]
    try:
        return FieldSpec.prime(int(t))
    except (ValueError, CoefficientError) as e:
        raise InputError(f"bad field {text!r}: {e}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", help="q or fp:<prime>")
    common.add_argument("--order", default="grevlex", help="grevlex, lex, block:<k> or weighted:<w,...>")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", help="caps, e.g. basis=500,degree=40,pairs=1e5,seconds=60")
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--output", "-o", help="write the report (and any matrix) here")

    p = _Parser(prog="symdet", description="symmetric determinantal surfaces in P^3")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def invariants(sp, required=False):
        sp.add_argument("--pg", type=int, required=required)
        sp.add_argument("--q", type=int, required=required)
        sp.add_argument("--K2", type=int, required=required)

    v = sub.add_parser("verify", parents=[common], help="run the verification checks on a CMF file")
    v.add_argument("input")
    invariants(v)
    lo = sub.add_parser("loci", parents=[common], help="non-normal locus, triple locus, adjoint surface")
    lo.add_argument("input")
    invariants(lo)
    c = sub.add_parser("construct", parents=[common], help="explicit constructions")
    c.add_argument("kind", choices=("sextic", "mainstream", "cover"))
    c.add_argument("--variant", choices=("as_written", "symmetrized"), default="as_written")
    c.add_argument("--lam", default="2")
    c.add_argument("--method", choices=("elimination", "linear_algebra"), default="elimination")
    g = sub.add_parser("geography", parents=[common], help="inequalities and invariant bookkeeping")
    g.add_argument("--pg", type=int)
    g.add_argument("--q", type=int)
    g.add_argument("--K2", type=int)
    g.add_argument("--pencil", action="store_true", help="the Albanese image is a curve")
    g.add_argument("--b", type=int)
    g.add_argument("--g", type=int)
    g.add_argument("--degree", type=int, help="degree of the canonical map")
    g.add_argument("--family", help="polarization:d1,d2,d3 | z2z2:theta2 | quotient:d1,d2,d3")
    g.add_argument("--strata", action="store_true")
    g.add_argument("--bundles", action="store_true")
    t = sub.add_parser("table", parents=[common], help="Beilinson cohomology table")
    invariants(t, required=True)
    t.add_argument("--m", type=int, default=3, choices=(2, 3))
    s = sub.add_parser("symmetrize", parents=[common], help="symmetric form of a self-dual presentation")
    s.add_argument("input")
    s.add_argument("--attempts", type=int, default=6)
    return p


# ------------------------------------------------------------------ helpers

def _read_doc(path: str, fld: FieldSpec | None) -> CMFDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    doc = parse_cmf(text)
    if fld is not None and fld != doc.ring.field:
        doc = parse_cmf(_with_field_header(text, fld))
    return doc


def _with_field_header(text: str, fld: FieldSpec) -> str:
    lines = [ln for ln in text.splitlines() if ln.split("#", 1)[0].strip().split(" ")[0] != "field"]
    return fld.cmf_header() + "\n" + "\n".join(lines) + "\n"


def _need_matrix(doc: CMFDocument) -> FormMatrix:
    if doc.matrix is None:
        raise InputError("the input has no matrix (missing twists)")
    return doc.matrix


def _budget(args) -> Budget:
    try:
        return Budget.parse(args.budget) if args.budget else Budget.from_env()
    except (ValueError, TypeError) as e:
        raise InputError(f"bad budget: {e}") from None


def _config(args, budget: Budget) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("json", "output")}
    cfg["budget"] = budget.as_dict()
    return cfg


# ------------------------------------------------------------------ commands

def cmd_verify(args, budget):
    doc = _read_doc(args.input, parse_field(args.field))
    alpha = _need_matrix(doc)
    datum = projection.ProjectionDatum(alpha, args.pg, args.q, args.K2, args.seed)
    rep = projection.verify(datum, budget)
    out = {"verification": rep.as_dict()}
    ok = rep.ok
    if doc.summands is not None and None not in (args.pg, args.q, args.K2):
        want = projection.expected_bundle(args.pg, args.q, args.K2)
        match = doc.summands.label() == want.label()
        out["bundle"] = {"declared": doc.summands.label(), "expected": want.label(), "matches": match}
        ok = ok and match
    if rep.budget_hits and ok:
        ok = None
    return ok, out, _verify_text(rep)


def _verify_text(rep) -> str:
    lines = [f"{name:28s} {c.status}" for name, c in rep.checks.items()]
    lines.append("result: " + ("PASS" if rep.ok else "FAIL (" + ", ".join(rep.failed) + ")"))
    if rep.budget_hits:
        lines.append("budget exceeded in: " + ", ".join(rep.budget_hits))
    return "\n".join(lines)


def cmd_loci(args, budget):
    doc = _read_doc(args.input, parse_field(args.field))
    alpha = _need_matrix(doc)
    datum = projection.ProjectionDatum(alpha, args.pg, args.q, args.K2, args.seed)
    res = projection.loci(datum, budget)
    order = MonomialOrder.from_text(args.order)
    out = {"loci": res.as_dict(),
           "gamma_basis": [format_polynomial(g) for g in res.gamma_ideal.groebner_basis(order, budget)]}
    lines = [f"Gamma: dim {res.gamma_dim}, degree {res.gamma_degree}",
             f"T: {'empty' if res.t_is_empty else f'dim {res.t_dim}, degree {res.t_degree}'}",
             f"adjoint surface degree {res.adjoint_degree}"]
    return True, out, "\n".join(lines)


def cmd_construct(args, budget):
    fld = parse_field(args.field)
    if args.kind == "sextic":
        inp = constructors.SexticInput.random(args.seed, fld or FieldSpec.prime())
        o = constructors.build_sextic(inp, args.variant)
        out = {"sextic": {"A": o.A_form, "A_other_variant": o.A_form_symmetrized, "B": o.B_form,
                          "C": o.C_form, "quartic_curve": o.quartic_curve,
                          "genus5_quadrics": o.genus5_quadrics, "determinant": o.sextic,
                          "variant": args.variant}}
        matrix = format_cmf(o.alpha_plus, comments=[f"special sextic, seed {args.seed}"])
        out["sextic"]["cmf"] = matrix
        return True, out, matrix
    if args.kind == "mainstream":
        try:
            lam = Fraction(args.lam)
        except ValueError:
            raise InputError(f"bad lambda {args.lam!r}") from None
        seed = args.seed or constructors.MAINSTREAM_SEED
        o = constructors.build_mainstream(lam, seed, fld, budget, args.method)
        cert = dict(o.certificate)
        timing = cert.pop("seconds", None)
        out = {"mainstream": {"certificate": cert, "section": o.chosen_section,
                              "sigma_generators": list(o.sigma_ideal.generators)},
               "timing": timing}
        ok = cert["sigma_principal"] and cert["sigma_degree"] == 12
        return ok, out, f"Sigma: generator degrees {cert['sigma_generator_degrees']}"
    o = constructors.build_cover_presentation(fld)
    return True, {"cover": o.as_dict()}, "\n".join(str(r) for r in o.relations)


def cmd_geography(args, budget):
    out: dict = {}
    lines = []
    ok = True
    if args.pg is not None or args.q is not None:
        if args.pg is None or args.q is None:
            raise InputError("geography needs both --pg and --q")
        rec = geography.InvariantRecord(args.pg, args.q, args.K2, "curve" if args.pencil else None,
                                        args.b, args.g, args.degree)
        rep = geography.inequality_report(rec)
        out["inequalities"] = rep.as_dict()
        ok = rep.ok
        for c in rep.checks:
            note = f"  [{'; '.join(c.forced)}]" if c.forced else ""
            lines.append(f"{c.name:22s} {c.verdict:15s} {c.formula}{note}")
        for k, v in rep.forced.items():
            lines.append(f"forced {k}: {v}")
    if args.family:
        fam = geography.special_family_invariants(geography.parse_family(args.family))
        out["family"] = {"invariants": fam.record.as_dict(), "family_dimension": fam.family_dimension}
        lines.append(f"family {args.family}: (p_g, q, K^2) = {fam.triple}")
    if args.strata:
        out["strata"] = [s.as_dict() for s in geography.strata_table()]
        lines.extend(f"M({s.tag}) dim {s.dimension}" for s in geography.strata_table())
    if args.bundles:
        out["bundle_types"] = geography.enumerate_bundle_types()
        lines.extend(str(t) for t in out["bundle_types"])
    if not out:
        raise InputError("geography needs --pg/--q, --family, --strata or --bundles")
    return ok, out, "\n".join(lines)


def cmd_table(args, budget):
    tab = monad.beilinson_table(args.pg, args.q, args.K2, args.m)
    ok = tab.vanishing_ok()
    out = {"table": tab.as_dict()}
    if args.m == 2:
        out["serre_symmetric"] = tab.is_serre_symmetric()
        ok = ok and out["serre_symmetric"]
    return ok, out, tab.render()


def cmd_symmetrize(args, budget):
    doc = _read_doc(args.input, parse_field(args.field))
    alpha = _need_matrix(doc)
    res = projection.symmetrize(alpha, args.seed, args.attempts)
    text = format_cmf(res.beta, comments=["symmetrized"])
    return True, {"symmetrize": {"sign": res.sign, "attempts": res.attempts, "cmf": text}}, text


COMMANDS = {"verify": cmd_verify, "loci": cmd_loci, "construct": cmd_construct,
            "geography": cmd_geography, "table": cmd_table, "symmetrize": cmd_symmetrize}


def run(argv=None, stdout=None, stderr=None) -> int:
    """Run one command; each command returns (ok, report body, text) with ok None on a budget hit."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        budget = _budget(args)
        MonomialOrder.from_text(args.order)
    except InputError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_INPUT
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, "configuration": _config(args, budget)}
    try:
        ok, body, text = COMMANDS[args.command](args, budget)
        report.update(body)
        if ok is None:
            report["status"], code = "budget_exceeded", EXIT_BUDGET
        else:
            report["status"], code = ("pass", EXIT_OK) if ok else ("fail", EXIT_FAIL)
    except BudgetExceeded as e:
        report.update(status="budget_exceeded", error=str(e))
        text, code = str(e), EXIT_BUDGET
    except (InputError, ParseError, LayoutError, CoefficientError, geography.GeographyError,
            constructors.ConstructionError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_INPUT
    except projection.SymmetrizeError as e:
        report.update(status="fail", error=str(e))
        text, code = f"symmetrize failed: {e}", EXIT_FAIL
    except ValueError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_INPUT
    rendered = dumps(report) if args.json else text + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        stdout.write(rendered)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
