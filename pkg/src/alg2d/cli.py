"""Command-line entry point: ``alg2d <command> --p P [--n N] ...``.

Exit codes: 0 success (warnings allowed), 1 usage error, 2 internal
consistency failure (oracle mismatch, catalog gap or overlap, identity violation).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import census as cen
from . import families as fam
from . import orbitmap as om
from .algebra import (
    ShapeError, StructureMatrix, invariants, is_isomorphic, parse_matrix, x_cubed_form,
)
from .field import FieldError, FieldSpec, generator, make_field

EXIT_OK, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2

log = logging.getLogger("alg2d")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    p: int
    n: int
    modulus: tuple[int, ...] | None
    command: str
    format: str = "text"
    jobs: int = 1
    out: str | None = None

    def field(self) -> FieldSpec:
        try:
            return make_field(self.p, self.n, self.modulus)
        except (FieldError, ValueError) as exc:
            raise UsageError(str(exc)) from exc


def _modulus(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"modulus must be comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="field characteristic")
    common.add_argument("--n", type=int, default=1, help="extension degree (default 1)")
    common.add_argument("--modulus", type=_modulus, default=None,
                        help="monic irreducible modulus, coefficients constant term first")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--out", default=None, help="write output to this file")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="alg2d", description="Two-dimensional algebras over finite fields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("field", parents=[common], help="describe GF(p^n)")
    c = sub.add_parser("census", parents=[common], help="orbit census and formula report")
    c.add_argument("--catalog", choices=fam.VARIANTS, default="corrected")
    c.add_argument("--recompute", action="store_true", help="ignore a cached report at --out")
    c = sub.add_parser("classify", parents=[common], help="catalog class of one algebra")
    c.add_argument("matrix", help="a1,a2,a3,a4,b1,b2,b3,b4 as field indices")
    c = sub.add_parser("isotest", parents=[common], help="test two algebras for isomorphism")
    c.add_argument("a")
    c.add_argument("b")
    c = sub.add_parser("catalog", parents=[common], help="list the catalog classes")
    c.add_argument("--catalog", choices=fam.VARIANTS, default="corrected")
    sub.add_parser("orbitmap", parents=[common], help="check the f(a,t) composition law, export its graph")
    return parser


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps({"schema": cen.SCHEMA, **obj}, indent=2) + "\n"


# --- commands -----------------------------------------------------------------------------

def cmd_field(cfg: RunConfig, args) -> int:
    F = cfg.field()
    info = {"p": F.p, "n": F.n, "q": F.q, "modulus": list(F.modulus),
            "char_case": F.char_case, "generator": int(generator(F))}
    if cfg.format == "json":
        _emit(cfg, _json({"field": info}))
    else:
        _emit(cfg, "".join(f"{k:<10} {v}\n" for k, v in info.items()))
    return EXIT_OK


def cmd_census(cfg: RunConfig, args) -> int:
    F = cfg.field()
    report = None
    if cfg.out and os.path.exists(cfg.out) and cfg.format == "json" and not args.recompute:
        try:
            cached = cen.load_report(cfg.out)
            if cached.field == F and cached.variant == args.catalog:
                report = cached
                log.info("reusing cached report %s", cfg.out)
        except (cen.CensusError, ValueError, KeyError):
            report = None
    if report is None:
        try:
            report = cen.verify_partition(F, variant=args.catalog, jobs=cfg.jobs)
        except cen.OracleMismatch as exc:
            print(f"oracle mismatch: {exc}", file=sys.stderr)
            return EXIT_INCONSISTENT
        _emit(cfg, report.dumps(cfg.format))
    elif cfg.format != "json":
        _emit(cfg, report.dumps(cfg.format))
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def _witness_json(g) -> dict:
    return {"inverse": list(g.inv_entries), "describe": g.describe()}


def cmd_classify(cfg: RunConfig, args) -> int:
    F = cfg.field()
    try:
        A = parse_matrix(F, args.matrix)
    except (ShapeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    result: dict = {"matrix": A.to_text()}
    status = EXIT_OK
    try:
        cls, g = cen.classify_with_witness(A)
        result.update(cls=cls.to_json(), label=str(cls), witness=_witness_json(g))
    except cen.CatalogOverlapError as exc:
        result["overlap"] = [{"cls": m.to_json(), "label": str(m), "witness": _witness_json(w)}
                             for m, w in zip(exc.matches, exc.witnesses)]
        status = EXIT_INCONSISTENT
    except cen.CatalogGapError:
        result["gap"] = True
        status = EXIT_INCONSISTENT
    if A.is_fifth_shape():
        fcls, fg = fam.reduce_fifth_family(A)
        result["case_analysis"] = {"cls": fcls.to_json(), "label": str(fcls), "witness": _witness_json(fg)}

    if cfg.format == "json":
        _emit(cfg, _json(result))
        return status
    lines = [f"matrix   {result['matrix']}"]
    if "label" in result:
        lines.append(f"class    {result['label']}")
        lines.append(f"witness  {result['witness']['describe']}")
    if "overlap" in result:
        lines.append("class    ambiguous: the catalog lists this algebra more than once")
        for o in result["overlap"]:
            lines.append(f"  {o['label']:<12} witness {o['witness']['describe']}")
    if result.get("gap"):
        lines.append("class    none: no catalog class matches")
    if "case_analysis" in result:
        ca = result["case_analysis"]
        lines.append(f"reduced  {ca['label']} via {ca['witness']['describe']}")
    _emit(cfg, "\n".join(lines) + "\n")
    return status


def _distinguish(A: StructureMatrix, B: StructureMatrix) -> str | None:
    diff = invariants(A).first_difference(invariants(B))
    if diff is not None:
        return diff
    qa, qb = x_cubed_form(A), x_cubed_form(B)
    if (qa is None) != (qb is None):
        return "x_cubed_form"
    return None


def cmd_isotest(cfg: RunConfig, args) -> int:
    F = cfg.field()
    try:
        A, B = parse_matrix(F, args.a), parse_matrix(F, args.b)
    except (ShapeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    g = is_isomorphic(A, B)
    if g is not None:
        res = {"isomorphic": True, "witness": _witness_json(g)}
        text = f"isomorphic\nwitness  {g.describe()}\ng^-1     {list(g.inv_entries)}\n"
    else:
        inv = _distinguish(A, B)
        res = {"isomorphic": False, "distinguished_by": inv}
        text = "non-isomorphic\n" + (f"differs in {inv}\n" if inv else "")
    _emit(cfg, _json(res) if cfg.format == "json" else text)
    return EXIT_OK


def cmd_catalog(cfg: RunConfig, args) -> int:
    F = cfg.field()
    rows = []
    for f in fam.families(F.char_case, args.catalog):
        computed = fam.family_count(f.id, F, args.catalog)
        closed = fam.closed_form_count(f.id, F) if args.catalog == "corrected" else None
        for rep in fam.param_orbits(f.id, F, args.catalog):
            cls = fam.FamilyClass(f.id, rep)
            rows.append({"cls": cls.to_json(), "label": f.id.label, "params": list(rep),
                         "matrix": fam.representative(cls, F, args.catalog).to_text(),
                         "computed_count": computed, "closed_form_count": closed})
    if cfg.format == "json":
        _emit(cfg, _json({"field": F.to_json(), "variant": args.catalog, "classes": rows}))
    elif cfg.format == "csv":
        out = ["label,params,matrix,computed_count,closed_form_count"]
        for r in rows:
            cf = "" if r["closed_form_count"] is None else r["closed_form_count"]
            out.append(f"{r['label']},\"{' '.join(map(str, r['params']))}\",\"{r['matrix']}\","
                       f"{r['computed_count']},{cf}")
        _emit(cfg, "\n".join(out) + "\n")
    else:
        out = []
        for r in rows:
            cf = "-" if r["closed_form_count"] is None else r["closed_form_count"]
            params = ",".join(map(str, r["params"]))
            out.append(f"{r['label']:<7} ({params:<9}) {r['matrix']:<28} {r['computed_count']:>5} {cf:>5}")
        _emit(cfg, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_orbitmap(cfg: RunConfig, args) -> int:
    F = cfg.field()
    try:
        violations = om.f_associativity_check(F)
    except om.CharacteristicError as exc:
        raise UsageError(str(exc)) from exc
    graph = om.orbit_graph(F)
    cmp_full = graph.compare_param_orbits()
    cmp_adm = om.orbit_graph(F, admissible_only=True).compare_param_orbits()
    if cfg.format == "json":
        text = _json({
            "field": F.to_json(), "violations": len(violations),
            "defined_triples": om.defined_triples(F),
            "first_violations": [list(vars(v).values()) for v in violations[:10]],
            "edges": [list(e) for e in graph.edges],
            "reachability": cmp_full, "admissible_reachability": cmp_adm,
        })
    else:
        lines = [f"{len(violations)} violations of f(f(a,s),t) = f(a,f(s,t)) "
                 f"over {om.defined_triples(F)} defined triples"]
        for v in violations[:10]:
            lines.append(f"  a={v.a} s={v.s} t={v.t}: {v.lhs} != {v.rhs}")
        lines.append(f"reachability classes        {cmp_full['classes']}")
        lines.append(f"admissible-move classes     {cmp_adm['classes']}")
        lines.append(f"parameter orbits            {cmp_full['param_orbits']}")
        lines.append("edges (a t f(a,t)):")
        text = "\n".join(lines) + "\n" + graph.edge_list()
    _emit(cfg, text)
    return EXIT_INCONSISTENT if violations else EXIT_OK


COMMANDS = {
    "field": cmd_field, "census": cmd_census, "classify": cmd_classify,
    "isotest": cmd_isotest, "catalog": cmd_catalog, "orbitmap": cmd_orbitmap,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cfg = RunConfig(args.p, args.n, args.modulus, args.command, args.format, args.jobs, args.out)
    try:
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"alg2d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
