"""The rational map f(a, t) acting on the beta'-family parameter.

``f(a, t) = (a^2 t^3 + 6 a t^2 + 3 a t + a - 2)^2 / (a t^2 + a t + 1)^3``,
valid in characteristic other than 2 and 3.  Undefined points (vanishing
denominator) are represented explicitly rather than raised.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import families as fam
from .field import FieldElement, FieldSpec


class CharacteristicError(ValueError):
    pass


def _require(F: FieldSpec) -> None:
    if F.char_case != "generic":
        raise CharacteristicError(f"the map f needs characteristic other than 2 and 3, got {F!r}")


@dataclass(frozen=True)
class MapEvaluation:
    a: FieldElement
    t: FieldElement
    defined: bool
    value: FieldElement | None

    def __str__(self) -> str:
        return f"{int(self.a)} {int(self.t)} {int(self.value) if self.defined else '-'}"


def _num_den(a, t):
    return (a * a * t ** 3 + 6 * a * t * t + 3 * a * t + a - 2) ** 2, (a * t * t + a * t + 1) ** 3


def f_eval(F: FieldSpec, a, t) -> MapEvaluation:
    _require(F)
    a = a if isinstance(a, FieldElement) else F(a)
    t = t if isinstance(t, FieldElement) else F(t)
    num, den = _num_den(a, t)
    if not den:
        return MapEvaluation(a, t, False, None)
    return MapEvaluation(a, t, True, num / den)


def _table(F: FieldSpec) -> list[list[int | None]]:
    out = []
    for a in F.elements():
        row = []
        for t in F.elements():
            ev = f_eval(F, a, t)
            row.append(int(ev.value) if ev.defined else None)
        out.append(row)
    return out


@dataclass(frozen=True)
class Violation:
    a: int
    s: int
    t: int
    lhs: int  # f(f(a, s), t)
    rhs: int  # f(a, f(s, t))


def f_associativity_check(F: FieldSpec) -> list[Violation]:
    """All triples (a, s, t), in lexicographic order, where both sides are defined and differ."""
    _require(F)
    f = _table(F)
    bad = []
    for a, s, t in itertools.product(range(F.q), repeat=3):
        u, v = f[a][s], f[s][t]
        if u is None or v is None:
            continue
        lhs, rhs = f[u][t], f[a][v]
        if lhs is None or rhs is None:
            continue
        if lhs != rhs:
            bad.append(Violation(a, s, t, lhs, rhs))
    return bad


def defined_triples(F: FieldSpec) -> int:
    _require(F)
    f = _table(F)
    n = 0
    for a, s, t in itertools.product(range(F.q), repeat=3):
        u, v = f[a][s], f[s][t]
        if u is not None and v is not None and f[u][t] is not None and f[a][v] is not None:
            n += 1
    return n


def f_rational(a: Fraction, t: Fraction) -> Fraction | None:
    num, den = _num_den(Fraction(a), Fraction(t))
    return None if den == 0 else num / den


def formal_counterexample(bound: int = 3) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction] | None:
    """Search small rational points for a failure of f(f(a,s),t) = f(a,f(s,t)) over Q.

    A single failure at a point where everything is defined shows the identity
    is not a rational-function identity either.
    """
    grid = [Fraction(n, d) for d in (1, 2) for n in range(-bound, bound + 1)]
    for a, s, t in itertools.product(grid, repeat=3):
        u, v = f_rational(a, s), f_rational(s, t)
        if u is None or v is None:
            continue
        lhs, rhs = f_rational(u, t), f_rational(a, v)
        if lhs is None or rhs is None:
            continue
        if lhs != rhs:
            return a, s, t, lhs, rhs
    return None


@dataclass
class OrbitGraph:
    field: FieldSpec
    edges: list[tuple[int, int, int]]  # (a, t, f(a, t))

    def successors(self, a: int) -> list[int]:
        return sorted({v for x, _, v in self.edges if x == a})

    def out_degree(self, a: int) -> int:
        return sum(1 for x, _, _ in self.edges if x == a)

    def classes(self) -> list[tuple[int, ...]]:
        """Weakly connected components, each sorted, in order of smallest member."""
        uf = fam._UnionFind(range(self.field.q))
        for a, _, v in self.edges:
            uf.union(a, v)
        groups: dict[int, list[int]] = {}
        for x in range(self.field.q):
            groups.setdefault(uf.find(x), []).append(x)
        return sorted(tuple(sorted(g)) for g in groups.values())

    def edge_list(self) -> str:
        return "".join(f"{a} {t} {v}\n" for a, t, v in self.edges)

    def compare_param_orbits(self) -> dict:
        """How the reachability classes sit relative to the beta'-family parameter orbits."""
        fid = fam.FamilyId("generic", "A10")
        orbits = sorted(tuple(m[0] for m in members)
                        for members in fam.param_partition(fid, self.field).values())
        classes = self.classes()
        within = lambda small, big: all(any(set(s) <= set(b) for b in big) for s in small)
        return {
            "classes": [list(c) for c in classes],
            "param_orbits": [list(o) for o in orbits],
            "equal": classes == orbits,
            "classes_refine_orbits": within(classes, orbits),
            "orbits_refine_classes": within(orbits, classes),
        }


def orbit_graph(F: FieldSpec, b1: int | None = None, admissible_only: bool = False) -> OrbitGraph:
    """Edges ``a -> f(a, t)`` for every defined t (all nodes, or only ``b1``).

    With ``admissible_only`` the edges are exactly the catalog moves: t must
    pass the admissibility test, and at t = -1/2 the edge goes to 4 - a.
    """
    _require(F)
    f = _table(F)
    nodes = range(F.q) if b1 is None else [int(b1)]
    edges = []
    for a in nodes:
        for t in range(F.q):
            if admissible_only:
                fid = fam.FamilyId("generic", "A10")
                if fam.admissible(fid, F.element(a), F.element(t)):
                    edges.append((a, t, int(fam.beta_prime(F.element(a), F.element(t)))))
            elif f[a][t] is not None:
                edges.append((a, t, f[a][t]))
    return OrbitGraph(F, edges)


def iter_evaluations(F: FieldSpec) -> Iterator[MapEvaluation]:
    for a in F.elements():
        for t in F.elements():
            yield f_eval(F, a, t)
