"""Exhaustive orbit census of GL(2, q) acting on all q^8 structure matrices.

Two independent counts (orbit enumeration and Burnside) provide the ground
truth; classification against the catalog is layered on top of it.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import families as fam
from .algebra import (
    BasisChange, StructureMatrix, act, gl2_order, group_table, is_isomorphic,
)
from .field import FieldSpec, field_from_json, make_field
from .linalg import nullity

log = logging.getLogger(__name__)

SCHEMA = 1
MAX_ENUM_Q = 9


class CensusError(RuntimeError):
    pass


class BudgetExceeded(CensusError):
    pass


class OracleMismatch(CensusError):
    pass


class CatalogGapError(CensusError):
    def __init__(self, matrix: StructureMatrix):
        self.matrix = matrix
        super().__init__(f"no catalog class matches {matrix.to_text()}")


class CatalogOverlapError(CensusError):
    def __init__(self, matrix: StructureMatrix, matches: list[fam.FamilyClass], witnesses: list[BasisChange]):
        self.matrix = matrix
        self.matches = matches
        self.witnesses = witnesses
        labels = ", ".join(str(m) for m in matches)
        super().__init__(f"{matrix.to_text()} matches several catalog classes: {labels}")


class PartitionError(CensusError):
    def __init__(self, report: "CensusReport"):
        self.report = report
        super().__init__(
            f"classification over {report.field!r} is not a bijection: "
            f"{len(report.gaps)} gap(s), {len(report.overlaps)} overlap(s)")


# --- enumeration --------------------------------------------------------------------------

@dataclass
class OrbitTable:
    field: FieldSpec
    codes: np.ndarray   # lex-min code of each orbit, increasing
    sizes: np.ndarray
    stabilizers: np.ndarray

    def __len__(self) -> int:
        return len(self.codes)

    def representative(self, k: int) -> StructureMatrix:
        return StructureMatrix.from_code(self.field, int(self.codes[k]))

    def representatives(self) -> Iterable[StructureMatrix]:
        for k in range(len(self)):
            yield self.representative(k)


def _check_budget(F: FieldSpec) -> None:
    if F.q > MAX_ENUM_Q:
        raise BudgetExceeded(
            f"enumerating GF({F.q}) needs a {F.q ** 8:,}-entry visited table "
            f"({F.q ** 8 / 2 ** 20:.0f} MiB); the limit is q <= {MAX_ENUM_Q}")


def orbit_enumerate(F: FieldSpec) -> OrbitTable:
    """Partition all q^8 matrices into orbits, scanning codes in increasing order."""
    _check_budget(F)
    q = F.q
    total = q ** 8
    table = group_table(F)
    visited = np.zeros(total, dtype=bool)
    digits = q ** np.arange(7, -1, -1, dtype=np.int64)
    reps, sizes, stabs = [], [], []
    cursor, chunk = 0, 1 << 16
    while cursor < total:
        free = np.flatnonzero(~visited[cursor:cursor + chunk])
        if not len(free):
            cursor += chunk
            continue
        code = cursor + int(free[0])
        entries = [(code // d) % q for d in digits]
        images = table.codes(entries)
        members = np.unique(images)
        visited[members] = True
        reps.append(code)
        sizes.append(len(members))
        stabs.append(int(np.count_nonzero(images == code)))
        cursor = code + 1
    sizes_a = np.array(sizes, dtype=np.int64)
    if int(sizes_a.sum()) != total:
        raise OracleMismatch(f"orbit sizes sum to {int(sizes_a.sum())}, expected {total}")
    return OrbitTable(F, np.array(reps, dtype=np.int64), sizes_a, np.array(stabs, dtype=np.int64))


# --- Burnside ----------------------------------------------------------------------------------

def _operator_minus_identity(g: BasisChange) -> list[list[int]]:
    """Matrix of A -> act(g, A) - A, built column by column from unit matrices."""
    F = g.field
    cols = []
    for j in range(8):
        e = [0] * 8
        e[j] = 1
        cols.append(act(g, StructureMatrix(F, tuple(e))).entries)
    sub = lambda x, y: F.add[x][F.neg[y]]
    return [[sub(cols[j][i], 1 if i == j else 0) for j in range(8)] for i in range(8)]


def fixed_point_count(g: BasisChange) -> int:
    return g.field.q ** nullity(g.field, _operator_minus_identity(g))


def fixed_point_count_scan(g: BasisChange) -> int:
    F = g.field
    return sum(1 for code in range(F.q ** 8)
               if act(g, StructureMatrix.from_code(F, code)).code == code)


def _fix_sum(args) -> int:
    fjson, rows = args
    F = field_from_json(fjson)
    return sum(fixed_point_count(BasisChange(F, tuple(r))) for r in rows)


def burnside_count(F: FieldSpec, method: str = "kernel", jobs: int = 1) -> int:
    """Number of orbits as the average number of fixed points over GL(2, q).

    ``method="kernel"`` counts fixed points as q^(kernel dimension);
    ``"scan"`` checks every matrix (only sensible for q = 2).
    """
    table = group_table(F)
    rows = [tuple(int(v) for v in r) for r in table.inv_entries]
    if method == "scan":
        total = sum(fixed_point_count_scan(BasisChange(F, r)) for r in rows)
    elif method != "kernel":
        raise ValueError(f"unknown method {method!r}")
    elif jobs > 1:
        parts = [rows[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            total = sum(pool.map(_fix_sum, [(F.to_json(), p) for p in parts]))
    else:
        total = _fix_sum((F.to_json(), rows))
    order = gl2_order(F.q)
    if len(rows) != order:
        raise OracleMismatch(f"group table has {len(rows)} elements, expected {order}")
    count, rem = divmod(total, order)
    if rem:
        raise OracleMismatch(f"fixed-point total {total} is not divisible by |GL(2,{F.q})| = {order}")
    return count


# --- classification ---------------------------------------------------------------------------

def canonical_code(A: StructureMatrix) -> int:
    return int(group_table(A.field).codes(A.entries).min())


@lru_cache(maxsize=None)
def catalog_index(F: FieldSpec, variant: str = "corrected") -> dict[int, tuple[fam.FamilyClass, ...]]:
    """Canonical (lex-min) orbit code of every catalog class."""
    index: dict[int, list] = {}
    for cls in fam.catalog_classes(F, variant):
        code = canonical_code(fam.representative(cls, F, variant))
        index.setdefault(code, []).append(cls)
    return {k: tuple(v) for k, v in index.items()}


def classify_all(A: StructureMatrix, variant: str = "corrected") -> list[fam.FamilyClass]:
    """Every catalog class isomorphic to ``A`` (the trivial tag for the zero matrix)."""
    if A.is_zero():
        return [fam.trivial_class(A.field)]
    return list(catalog_index(A.field, variant).get(canonical_code(A), ()))


def _witness(A: StructureMatrix, cls: fam.FamilyClass, variant: str) -> BasisChange:
    B = fam.representative(cls, A.field, variant)
    g = is_isomorphic(A, B, prefilter=False)
    if g is None:
        raise AssertionError(f"{A.to_text()} and {cls} share an orbit but no witness was found")
    return g


def classify(A: StructureMatrix, variant: str = "corrected") -> fam.FamilyClass:
    return classify_with_witness(A, variant)[0]


def classify_with_witness(A: StructureMatrix, variant: str = "corrected") -> tuple[fam.FamilyClass, BasisChange]:
    """The unique matching class and g with ``act(g, A) == representative(class)``.

    Raises CatalogGapError / CatalogOverlapError when no class or several match.
    """
    matches = classify_all(A, variant)
    if not matches:
        raise CatalogGapError(A)
    if len(matches) > 1:
        raise CatalogOverlapError(A, matches, [_witness(A, m, variant) for m in matches])
    cls = matches[0]
    if cls.is_trivial:
        return cls, BasisChange.identity(A.field)
    return cls, _witness(A, cls, variant)


# --- the report ----------------------------------------------------------------------------------

@dataclass
class FamilyRow:
    family: str
    computed_count: int
    closed_form_count: int | None
    orbits_hit: int

    @property
    def match(self) -> bool | None:
        return None if self.closed_form_count is None else self.closed_form_count == self.computed_count


@dataclass
class CensusReport:
    field: FieldSpec
    variant: str
    orbit_count_enumeration: int | None
    orbit_count_burnside: int
    families: list[FamilyRow] = dc_field(default_factory=list)
    catalog_class_count: int | None = None
    gaps: list[str] = dc_field(default_factory=list)
    overlaps: list[dict] = dc_field(default_factory=list)
    formulas: dict = dc_field(default_factory=dict)
    warnings: list[str] = dc_field(default_factory=list)
    original_check: dict | None = None
    inverse_exponent: dict | None = None

    @property
    def enumerated(self) -> bool:
        return self.orbit_count_enumeration is not None

    @property
    def oracles_agree(self) -> bool:
        return not self.enumerated or self.orbit_count_enumeration == self.orbit_count_burnside

    @property
    def bijection(self) -> bool | None:
        if not self.enumerated:
            return None
        return (not self.gaps and not self.overlaps
                and self.catalog_class_count + 1 == self.orbit_count_enumeration)

    @property
    def consistent(self) -> bool:
        return self.oracles_agree and self.bijection is not False

    def family_count(self, label: str) -> int:
        for row in self.families:
            if row.family == label:
                return row.computed_count
        raise KeyError(label)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "field": self.field.to_json(),
            "variant": self.variant,
            "orbit_count_enumeration": self.orbit_count_enumeration,
            "orbit_count_burnside": self.orbit_count_burnside,
            "oracles_agree": self.oracles_agree,
            "catalog_class_count": self.catalog_class_count,
            "bijection": self.bijection,
            "families": [
                {"family": r.family, "computed_count": r.computed_count,
                 "closed_form_count": r.closed_form_count, "match": r.match,
                 "orbits_hit": r.orbits_hit}
                for r in self.families
            ],
            "gaps": self.gaps,
            "overlaps": self.overlaps,
            "formulas": self.formulas,
            "warnings": self.warnings,
            "original_catalog_check": self.original_check,
            "inverse_exponent_check": self.inverse_exponent,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CensusReport":
        if d.get("schema") != SCHEMA:
            raise CensusError(f"unsupported report schema {d.get('schema')!r}")
        rep = cls(field_from_json(d["field"]), d["variant"], d["orbit_count_enumeration"],
                  d["orbit_count_burnside"])
        rep.families = [FamilyRow(r["family"], r["computed_count"], r["closed_form_count"], r["orbits_hit"])
                        for r in d["families"]]
        rep.catalog_class_count = d["catalog_class_count"]
        rep.gaps, rep.overlaps = d["gaps"], d["overlaps"]
        rep.formulas, rep.warnings = d["formulas"], d["warnings"]
        rep.original_check = d["original_catalog_check"]
        rep.inverse_exponent = d["inverse_exponent_check"]
        return rep

    def to_csv(self) -> str:
        lines = ["family,computed_count,closed_form_count,match"]
        for r in self.families:
            cf = "" if r.closed_form_count is None else str(r.closed_form_count)
            m = "" if r.match is None else str(r.match).lower()
            lines.append(f"{r.family},{r.computed_count},{cf},{m}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        out = [f"census over {self.field!r} (catalog: {self.variant})", ""]
        enum = "skipped" if not self.enumerated else str(self.orbit_count_enumeration)
        out.append(f"  orbits (enumeration) {enum:>10}")
        out.append(f"  orbits (Burnside)    {self.orbit_count_burnside:>10}")
        out.append(f"  oracles agree        {str(self.oracles_agree):>10}")
        if self.enumerated:
            out.append(f"  catalog classes + 1  {self.catalog_class_count + 1:>10}")
            out.append(f"  bijection            {str(self.bijection):>10}")
        out += ["", f"  {'family':<8} {'computed':>9} {'closed form':>12} {'match':>6} {'orbits hit':>11}"]
        for r in self.families:
            cf = "-" if r.closed_form_count is None else str(r.closed_form_count)
            m = "-" if r.match is None else ("yes" if r.match else "NO")
            out.append(f"  {r.family:<8} {r.computed_count:>9} {cf:>12} {m:>6} {r.orbits_hit:>11}")
        out += ["", "  totals"]
        for key, val in self.formulas.items():
            out.append(f"    {key:<32} {val}")
        if self.gaps:
            out += ["", f"  gaps ({len(self.gaps)}): orbits matching no catalog class"]
            out += [f"    {g}" for g in self.gaps]
        if self.overlaps:
            out += ["", f"  overlaps ({len(self.overlaps)}): orbits matching several classes"]
            for o in self.overlaps:
                out.append(f"    {o['matrix']}: " + ", ".join(
                    f"{m} via g^-1={w}" for m, w in zip(o["classes"], o["witnesses"])))
        if self.original_check is not None:
            oc = self.original_check
            out += ["", "  earlier catalog (no-root conditions)",
                    f"    classes + 1 {oc['catalog_class_count'] + 1}, gaps {oc['gaps']}, "
                    f"overlaps {oc['overlaps']}, bijection {oc['bijection']}"]
        if self.inverse_exponent is not None:
            ie = self.inverse_exponent
            out += ["", f"  {ie['family']}: b1 ~ 1/b1 for all nonzero b1: {ie['holds']}"]
            if ie["counterexamples"]:
                out.append(f"    counterexamples {ie['counterexamples']}")
        if self.warnings:
            out += ["", "  warnings"]
            out += [f"    {w}" for w in self.warnings]
        return "\n".join(out) + "\n"

    def dumps(self, fmt: str = "text") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2) + "\n"
        if fmt == "csv":
            return self.to_csv()
        return self.to_text()


def load_report(path: str) -> CensusReport:
    with open(path) as fh:
        return CensusReport.from_json(json.load(fh))


def _partition_check(F: FieldSpec, orbits: OrbitTable, variant: str):
    index = catalog_index(F, variant)
    n_classes = sum(len(v) for v in index.values())
    reps = set(int(c) for c in orbits.codes)
    zero = 0
    gaps = [StructureMatrix.from_code(F, c).to_text() for c in sorted(reps - set(index) - {zero})]
    overlaps = []
    hits: dict[str, int] = {}
    for code, classes in sorted(index.items()):
        for c in classes:
            hits[c.id.label] = hits.get(c.id.label, 0) + 1
        if len(classes) > 1:
            A = StructureMatrix.from_code(F, code)
            ws = [_witness(A, c, variant) for c in classes]
            overlaps.append({"matrix": A.to_text(), "classes": [str(c) for c in classes],
                             "witnesses": [list(w.inv_entries) for w in ws]})
    return n_classes, gaps, overlaps, hits


def _inverse_exponent_check(F: FieldSpec) -> dict:
    cube = fam.fifth_family(F.char_case, "cube")
    bad = []
    for b in range(1, F.q):
        inv = F.inv[b]
        A = fam.representative(fam.FamilyClass(cube.id, (b,)), F)
        B = fam.representative(fam.FamilyClass(cube.id, (inv,)), F)
        if canonical_code(A) != canonical_code(B):
            bad.append([b, inv])
    return {"family": cube.id.label, "holds": not bad, "counterexamples": bad}


def verify_partition(F: FieldSpec, variant: str = "corrected", strict: bool = False,
                     jobs: int = 1, enumerate_orbits: bool | None = None,
                     cross_check_original: bool = True) -> CensusReport:
    """Run both oracles, classify every orbit, and compare every printed total.

    With ``strict`` a failed bijection raises PartitionError (carrying the
    report).  Oracle disagreement always raises OracleMismatch.
    """
    if enumerate_orbits is None:
        enumerate_orbits = F.q <= MAX_ENUM_Q
    warnings: list[str] = []
    burn = burnside_count(F, jobs=jobs)
    orbits = None
    if enumerate_orbits:
        orbits = orbit_enumerate(F)
        if len(orbits) != burn:
            raise OracleMismatch(f"enumeration found {len(orbits)} orbits, Burnside gives {burn}")
    else:
        warnings.append(f"GF({F.q}) is beyond the enumeration limit; Burnside count only")
    rep = CensusReport(F, variant, len(orbits) if orbits is not None else None, burn, warnings=warnings)

    hits: dict[str, int] = {}
    if orbits is not None:
        n_classes, rep.gaps, rep.overlaps, hits = _partition_check(F, orbits, variant)
        rep.catalog_class_count = n_classes
        for o in rep.overlaps:
            warnings.append(f"catalog overlap: {' ~ '.join(o['classes'])}")
        for gmat in rep.gaps:
            warnings.append(f"catalog gap: {gmat}")
    for f in fam.families(F.char_case, variant):
        cnt = fam.family_count(f.id, F, variant)
        cf = fam.closed_form_count(f.id, F) if variant == "corrected" else None
        rep.families.append(FamilyRow(f.id.label, cnt, cf, hits.get(f.id.label, 0)))
        if cf is not None and cf != cnt:
            warnings.append(f"{f.id.label}: computed {cnt}, closed form {cf} (delta {cnt - cf:+d})")

    census_total = burn
    beta_label = fam.beta_family_label(F.char_case)
    beta_count = fam.family_count(fam.FamilyId(F.char_case, beta_label), F)
    closed_sum = 1 + sum(r.closed_form_count for r in rep.families if r.closed_form_count is not None)
    catalog_total = 1 + sum(fam.family_count(f.id, F) for f in fam.families(F.char_case))
    formulas = {
        "census_total": census_total,
        "published_formula": fam.published_total(F),
        "closed_form_total_printed": fam.closed_form_total(F),
        "closed_form_total_summed": closed_sum,
        f"printed_total_plus_|{beta_label}|": fam.total_with_beta_family(F, beta_count),
        f"|{beta_label}|_computed": beta_count,
        "catalog_total": catalog_total,
    }
    rep.formulas = formulas
    for key in ("published_formula", "closed_form_total_printed", "closed_form_total_summed",
                f"printed_total_plus_|{beta_label}|", "catalog_total"):
        delta = formulas[key] - census_total
        if delta:
            warnings.append(f"{key} = {formulas[key]} differs from the census total {census_total} (delta {delta:+d})")
    if formulas["closed_form_total_printed"] != closed_sum:
        warnings.append(
            f"printed closed-form total {formulas['closed_form_total_printed']} differs from the sum of "
            f"the per-family closed forms {closed_sum} (delta {formulas['closed_form_total_printed'] - closed_sum:+d})")

    if orbits is not None and cross_check_original and variant == "corrected":
        n, gaps, overlaps, _ = _partition_check(F, orbits, "original")
        rep.original_check = {
            "catalog_class_count": n, "gaps": len(gaps), "overlaps": len(overlaps),
            "bijection": not gaps and not overlaps and n + 1 == len(orbits),
        }
    if orbits is not None:
        rep.inverse_exponent = _inverse_exponent_check(F)

    if not rep.oracles_agree:
        raise OracleMismatch("enumeration and Burnside disagree")
    if strict and rep.bijection is False:
        raise PartitionError(rep)
    return rep


def census(p: int, n: int = 1, **kw) -> CensusReport:
    return verify_partition(make_field(p, n), **kw)
