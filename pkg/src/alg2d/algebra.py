"""Two-dimensional algebras by structure constants, and the GL(2, q) action.

A structure matrix ``((a1, a2, a3, a4), (b1, b2, b3, b4))`` encodes

    e1 e1 = a1 e1 + b1 e2     e1 e2 = a2 e1 + b2 e2
    e2 e1 = a3 e1 + b3 e2     e2 e2 = a4 e1 + b4 e2

and a basis change ``g`` acts by ``A -> g A (g^-1 (x) g^-1)``.  Basis changes
are stored through the entries of ``g^-1 = ((xi1, eta1), (xi2, eta2))``; its
columns are the new basis vectors written in the old basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .field import FieldElement, FieldSpec, MixedFieldError


class ShapeError(ValueError):
    """Input matrix does not have the required shape."""


def _to_index(F: FieldSpec, v) -> int:
    if isinstance(v, FieldElement):
        if v.field != F:
            raise MixedFieldError(f"{v.field!r} vs {F!r}")
        return v.index
    return F.from_int(int(v))


def _same_field(*fields: FieldSpec) -> FieldSpec:
    F = fields[0]
    for other in fields[1:]:
        if other is not F and other != F:
            raise MixedFieldError(f"{F!r} vs {other!r}")
    return F


@dataclass(frozen=True, order=False)
class StructureMatrix:
    field: FieldSpec
    entries: tuple[int, ...]  # field indices a1..a4, b1..b4

    def __post_init__(self):
        if len(self.entries) != 8:
            raise ShapeError(f"need 8 entries, got {len(self.entries)}")
        if not all(0 <= e < self.field.q for e in self.entries):
            raise ShapeError(f"entries {self.entries} out of range for {self.field!r}")

    @classmethod
    def from_rows(cls, F: FieldSpec, alpha: Sequence, beta: Sequence) -> "StructureMatrix":
        """Plain ints are read in the prime subfield, so ``-1`` means ``p - 1``."""
        return cls(F, tuple(_to_index(F, v) for v in (*alpha, *beta)))

    @classmethod
    def from_indices(cls, F: FieldSpec, indices: Sequence[int]) -> "StructureMatrix":
        return cls(F, tuple(int(i) for i in indices))

    @classmethod
    def from_code(cls, F: FieldSpec, code: int) -> "StructureMatrix":
        out = []
        for _ in range(8):
            code, r = divmod(code, F.q)
            out.append(r)
        return cls(F, tuple(reversed(out)))

    @classmethod
    def zero(cls, F: FieldSpec) -> "StructureMatrix":
        return cls(F, (0,) * 8)

    @property
    def alpha(self) -> tuple[FieldElement, ...]:
        return tuple(self.field.element(i) for i in self.entries[:4])

    @property
    def beta(self) -> tuple[FieldElement, ...]:
        return tuple(self.field.element(i) for i in self.entries[4:])

    @property
    def code(self) -> int:
        """Base-q integer with a1 as the most significant digit (lex order)."""
        out = 0
        for e in self.entries:
            out = out * self.field.q + e
        return out

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_fifth_shape(self) -> bool:
        """((a1, a2, a2, a4), (b1, -a1, -a1, -a2))."""
        F = self.field
        a1, a2, a3, a4, b1, b2, b3, b4 = self.entries
        return a2 == a3 and b2 == b3 == F.neg[a1] and b4 == F.neg[a2]

    def to_text(self) -> str:
        a, b = self.entries[:4], self.entries[4:]
        return f"[[{','.join(map(str, a))}],[{','.join(map(str, b))}]]"

    def __lt__(self, other: "StructureMatrix") -> bool:
        return self.entries < other.entries

    def __repr__(self) -> str:
        return f"StructureMatrix({self.to_text()} over {self.field!r})"


@dataclass(frozen=True)
class BasisChange:
    """Invertible 2x2 matrix ``g``, kept through ``g^-1 = ((xi1, eta1), (xi2, eta2))``."""

    field: FieldSpec
    inv_entries: tuple[int, int, int, int]  # xi1, eta1, xi2, eta2

    def __post_init__(self):
        F = self.field
        if self.det == 0:
            raise ValueError(f"singular basis change {self.inv_entries}")
        x1, e1, x2, e2 = self.inv_entries
        g = self.g
        # g * g^-1 must be the identity
        prod = (
            F.add[F.mul[g[0]][x1]][F.mul[g[1]][x2]], F.add[F.mul[g[0]][e1]][F.mul[g[1]][e2]],
            F.add[F.mul[g[2]][x1]][F.mul[g[3]][x2]], F.add[F.mul[g[2]][e1]][F.mul[g[3]][e2]],
        )
        if prod != (1, 0, 0, 1):
            raise AssertionError(f"g * g^-1 = {prod}")

    @classmethod
    def from_inverse(cls, F: FieldSpec, xi1, eta1, xi2, eta2) -> "BasisChange":
        return cls(F, tuple(_to_index(F, v) for v in (xi1, eta1, xi2, eta2)))

    @classmethod
    def from_forward(cls, F: FieldSpec, g11, g12, g21, g22) -> "BasisChange":
        return cls.from_inverse(F, *_inverse2(F, tuple(_to_index(F, v) for v in (g11, g12, g21, g22))))

    @classmethod
    def identity(cls, F: FieldSpec) -> "BasisChange":
        return cls(F, (1, 0, 0, 1))

    @property
    def det(self) -> int:
        """Index of det(g^-1) = xi1*eta2 - xi2*eta1."""
        F = self.field
        x1, e1, x2, e2 = self.inv_entries
        return F.sub[F.mul[x1][e2]][F.mul[x2][e1]]

    @property
    def g(self) -> tuple[int, int, int, int]:
        """Forward matrix, row-major: adjugate of g^-1 over its determinant."""
        return _inverse2(self.field, self.inv_entries)

    def inverse(self) -> "BasisChange":
        return BasisChange(self.field, self.g)

    def __matmul__(self, other: "BasisChange") -> "BasisChange":
        """``g2 @ g1`` is the basis change acting as ``act(g2, act(g1, .))``."""
        F = _same_field(self.field, other.field)
        # (g2 g1)^-1 = g1^-1 g2^-1
        return BasisChange(F, _mul2(F, other.inv_entries, self.inv_entries))

    def describe(self) -> str:
        x1, e1, x2, e2 = (self.field.element(i) for i in self.inv_entries)
        return f"g^-1 = [[xi1={x1!r}, eta1={e1!r}], [xi2={x2!r}, eta2={e2!r}]]"


def _mul2(F: FieldSpec, a, b) -> tuple[int, int, int, int]:
    a11, a12, a21, a22 = a
    b11, b12, b21, b22 = b
    add, mul = F.add, F.mul
    return (add[mul[a11][b11]][mul[a12][b21]], add[mul[a11][b12]][mul[a12][b22]],
            add[mul[a21][b11]][mul[a22][b21]], add[mul[a21][b12]][mul[a22][b22]])


def _inverse2(F: FieldSpec, m) -> tuple[int, int, int, int]:
    a, b, c, d = m
    det = F.sub[F.mul[a][d]][F.mul[b][c]]
    di = F.inverse(det)
    return (F.mul[d][di], F.mul[F.neg[b]][di], F.mul[F.neg[c]][di], F.mul[a][di])


def compose(g2: BasisChange, g1: BasisChange) -> BasisChange:
    return g2 @ g1


# --- multiplication and the action ---------------------------------------------

def product(A: StructureMatrix, x: Sequence, y: Sequence) -> tuple[FieldElement, FieldElement]:
    """``x y`` for coordinate vectors ``x = (u1, u2)``, ``y = (v1, v2)``."""
    F = A.field
    u1, u2 = (_to_index(F, v) for v in x)
    v1, v2 = (_to_index(F, v) for v in y)
    c = _product_idx(F, A.entries, u1, u2, v1, v2)
    return F.element(c[0]), F.element(c[1])


def _product_idx(F: FieldSpec, e, u1, u2, v1, v2) -> tuple[int, int]:
    add, mul = F.add, F.mul
    w = (mul[u1][v1], mul[u1][v2], mul[u2][v1], mul[u2][v2])
    first = second = 0
    for k in range(4):
        first = add[first][mul[w[k]][e[k]]]
        second = add[second][mul[w[k]][e[4 + k]]]
    return first, second


def act(g: BasisChange, A: StructureMatrix) -> StructureMatrix:
    """``g A (g^-1 (x) g^-1)`` with Kronecker rows/columns ordered e1e1, e1e2, e2e1, e2e2."""
    F = _same_field(g.field, A.field)
    add, mul = F.add, F.mul
    x1, e1, x2, e2 = g.inv_entries
    M = ((x1, e1), (x2, e2))
    K = [[mul[M[i][k]][M[j][l]] for k in range(2) for l in range(2)]
         for i in range(2) for j in range(2)]
    rows = (A.entries[:4], A.entries[4:])
    AK = []
    for r in rows:
        out = []
        for c in range(4):
            acc = 0
            for m in range(4):
                acc = add[acc][mul[r[m]][K[m][c]]]
            out.append(acc)
        AK.append(out)
    g11, g12, g21, g22 = g.g
    new = [add[mul[g11][AK[0][c]]][mul[g12][AK[1][c]]] for c in range(4)]
    new += [add[mul[g21][AK[0][c]]][mul[g22][AK[1][c]]] for c in range(4)]
    return StructureMatrix(F, tuple(new))


def act_fifth_explicit(g: BasisChange, a1, a2, a4, b1) -> tuple[FieldElement, ...]:
    """Primed parameters of a fifth-subset algebra under ``g``, by closed formulas.

    Inputs are the free parameters of ((a1, a2, a2, a4), (b1, -a1, -a1, -a2)).
    Integer coefficients (2, 3) are read in the field, so the same polynomials
    serve characteristics 2 and 3.
    """
    F = g.field
    a1, a2, a4, b1 = (F.element(_to_index(F, v)) for v in (a1, a2, a4, b1))
    x1, e1, x2, e2 = (F.element(i) for i in g.inv_entries)
    delta = x1 * e2 - x2 * e1
    if not delta:
        raise ValueError("singular basis change")
    d = delta.inverse()
    n1 = (-b1 * e1 * x1 ** 2 + a1 * e2 * x1 ** 2 + 2 * a1 * e1 * x1 * x2
          + 2 * a2 * e2 * x1 * x2 + a2 * e1 * x2 ** 2 + a4 * e2 * x2 ** 2)
    n2 = (b1 * e1 ** 2 * x1 - 2 * a1 * e1 * e2 * x1 - a2 * e2 ** 2 * x1
          - a1 * e1 ** 2 * x2 - 2 * a2 * e1 * e2 * x2 - a4 * e2 ** 2 * x2)
    n4 = b1 * e1 ** 3 - 3 * a1 * e1 ** 2 * e2 - 3 * a2 * e1 * e2 ** 2 - a4 * e2 ** 3
    nb = b1 * x1 ** 3 - 3 * a1 * x1 ** 2 * x2 - 3 * a2 * x1 * x2 ** 2 - a4 * x2 ** 3
    return (n1 * d, -n2 * d, -n4 * d, nb * d)


def fifth_params(A: StructureMatrix) -> tuple[int, int, int, int]:
    """(a1, a2, a4, b1) indices of a fifth-shape matrix."""
    if not A.is_fifth_shape():
        raise ShapeError(f"{A.to_text()} is not of fifth-subset shape")
    e = A.entries
    return e[0], e[1], e[3], e[4]


def fifth_matrix(F: FieldSpec, a1, a2, a4, b1) -> StructureMatrix:
    a1, a2, a4, b1 = (_to_index(F, v) for v in (a1, a2, a4, b1))
    n = F.neg
    return StructureMatrix(F, (a1, a2, a2, a4, b1, n[a1], n[a1], n[a2]))


# --- the whole group at once -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupTable:
    """All of GL(2, q), ordered lexicographically by (xi1, eta1, xi2, eta2).

    ``linear[k]`` is the 8x8 matrix (over field indices) of ``A -> act(g_k, A)``
    on flattened structure matrices.
    """

    field: FieldSpec
    inv_entries: np.ndarray  # (|G|, 4)
    linear: np.ndarray       # (|G|, 8, 8)

    def __len__(self) -> int:
        return len(self.inv_entries)

    def element(self, k: int) -> BasisChange:
        return BasisChange(self.field, tuple(int(v) for v in self.inv_entries[k]))

    def __iter__(self):
        for k in range(len(self)):
            yield self.element(k)

    def images(self, entries: Sequence[int]) -> np.ndarray:
        """(|G|, 8) array: row k is ``act(g_k, A)``."""
        F = self.field
        add, mul = F.add_table, F.mul_table
        L = self.linear
        out = mul[L[:, :, 0], entries[0]]
        for j in range(1, 8):
            if entries[j]:
                out = add[out, mul[L[:, :, j], entries[j]]]
        return out

    def codes(self, entries: Sequence[int]) -> np.ndarray:
        return encode(self.field.q, self.images(entries))


def encode(q: int, rows: np.ndarray) -> np.ndarray:
    weights = q ** np.arange(7, -1, -1, dtype=np.int64)
    return rows @ weights


def gl2_order(q: int) -> int:
    return (q * q - 1) * (q * q - q)


@lru_cache(maxsize=None)
def group_table(F: FieldSpec) -> GroupTable:
    q = F.q
    mul, add, sub = F.mul_table, F.add_table, F.add_table[:, F.neg_table]
    allm = np.array(list(itertools.product(range(q), repeat=4)), dtype=np.int64)
    x1, e1, x2, e2 = allm.T
    det = sub[mul[x1, e2], mul[x2, e1]]
    keep = det != 0
    allm, det = allm[keep], det[keep]
    x1, e1, x2, e2 = allm.T
    dinv = F.inv_table[det]
    neg = F.neg_table
    gf = np.stack([mul[e2, dinv], mul[neg[e1], dinv], mul[neg[x2], dinv], mul[x1, dinv]], axis=1)
    M = np.stack([x1, e1, x2, e2], axis=1).reshape(-1, 2, 2)
    Gf = gf.reshape(-1, 2, 2)
    K = np.empty((len(allm), 4, 4), dtype=np.int64)
    for i, j, k, l in itertools.product(range(2), repeat=4):
        K[:, 2 * i + j, 2 * k + l] = mul[M[:, i, k], M[:, j, l]]
    L = np.empty((len(allm), 8, 8), dtype=np.int64)
    for r, s in itertools.product(range(2), repeat=2):
        for m, c in itertools.product(range(4), repeat=2):
            L[:, 4 * r + c, 4 * s + m] = mul[Gf[:, r, s], K[:, m, c]]
    assert len(allm) == gl2_order(q)
    return GroupTable(F, allm, L)


def gl2(F: FieldSpec) -> list[BasisChange]:
    return list(group_table(F))


# --- isomorphism and invariants ------------------------------------------------------

@dataclass(frozen=True)
class InvariantFingerprint:
    commutative: bool
    idempotent_count: int
    power3_associative: bool
    automorphism_order: int | None
    left_unit_exists: bool
    right_unit_exists: bool

    def first_difference(self, other: "InvariantFingerprint") -> str | None:
        for name in ("commutative", "idempotent_count", "power3_associative",
                     "left_unit_exists", "right_unit_exists", "automorphism_order"):
            a, b = getattr(self, name), getattr(other, name)
            if a is not None and b is not None and a != b:
                return name
        return None


def _vectors(F: FieldSpec):
    return itertools.product(range(F.q), repeat=2)


def _cheap_invariants(A: StructureMatrix) -> dict:
    F, e = A.field, A.entries
    idem = 0
    p3 = True
    for u, v in _vectors(F):
        sq = _product_idx(F, e, u, v, u, v)
        if (u or v) and sq == (u, v):
            idem += 1
        if p3 and _product_idx(F, e, u, v, *sq) != _product_idx(F, e, *sq, u, v):
            p3 = False

    def unit(left: bool) -> bool:
        basis = ((1, 0), (0, 1))
        for u, v in _vectors(F):
            ok = True
            for y in basis:
                got = _product_idx(F, e, u, v, *y) if left else _product_idx(F, e, *y, u, v)
                if got != y:
                    ok = False
                    break
            if ok:
                return True
        return False

    return dict(commutative=e[1] == e[2] and e[5] == e[6], idempotent_count=idem,
                power3_associative=p3, left_unit_exists=unit(True), right_unit_exists=unit(False))


def automorphism_order(A: StructureMatrix) -> int:
    """Number of g in GL(2, q) fixing ``A``."""
    table = group_table(A.field)
    return int(np.count_nonzero(table.codes(A.entries) == A.code))


def invariants(A: StructureMatrix, with_automorphisms: bool = True) -> InvariantFingerprint:
    return InvariantFingerprint(
        automorphism_order=automorphism_order(A) if with_automorphisms else None,
        **_cheap_invariants(A),
    )


def find_witnesses(A: StructureMatrix, B: StructureMatrix) -> np.ndarray:
    """Indices into :func:`group_table` of every g with ``act(g, A) == B``."""
    F = _same_field(A.field, B.field)
    return np.flatnonzero(group_table(F).codes(A.entries) == B.code)


def is_isomorphic(A: StructureMatrix, B: StructureMatrix, prefilter: bool = True) -> BasisChange | None:
    """First g (lexicographic in g^-1) with ``act(g, A) == B``, or None."""
    F = _same_field(A.field, B.field)
    if prefilter and _cheap_invariants(A) != _cheap_invariants(B):
        return None
    hits = find_witnesses(A, B)
    if not len(hits):
        return None
    g = group_table(F).element(int(hits[0]))
    if act(g, A) != B:
        raise AssertionError(f"witness {g.inv_entries} failed re-verification")
    return g


def orbit(A: StructureMatrix) -> set[int]:
    return set(int(c) for c in group_table(A.field).codes(A.entries))


def canonical_form(A: StructureMatrix) -> tuple[StructureMatrix, BasisChange]:
    """Lex-minimal member of the orbit of ``A`` and the first g reaching it."""
    table = group_table(A.field)
    codes = table.codes(A.entries)
    k = int(np.argmin(codes))
    return StructureMatrix.from_code(A.field, int(codes[k])), table.element(k)


def x_cubed_form(A: StructureMatrix) -> dict[tuple[int, int], int] | None:
    """Coefficients of a quadratic form Q with ``x (x x) == Q(x) x`` for all x, if one exists.

    Q is returned as ``{(i, j): coeff}`` for the monomials u^2, uv, v^2, found by
    brute force over all coefficient triples.
    """
    F, e = A.field, A.entries
    cubes = {}
    for u, v in _vectors(F):
        sq = _product_idx(F, e, u, v, u, v)
        cubes[(u, v)] = _product_idx(F, e, u, v, *sq)
    mul, add = F.mul, F.add
    for c20, c11, c02 in itertools.product(range(F.q), repeat=3):
        ok = True
        for (u, v), cube in cubes.items():
            qv = add[add[mul[c20][mul[u][u]]][mul[c11][mul[u][v]]]][mul[c02][mul[v][v]]]
            if cube != (mul[qv][u], mul[qv][v]):
                ok = False
                break
        if ok:
            return {(2, 0): c20, (1, 1): c11, (0, 2): c02}
    return None


def parse_matrix(F: FieldSpec, text: str) -> StructureMatrix:
    """``"a1,a2,a3,a4,b1,b2,b3,b4"`` of field indices (also accepts the bracketed form)."""
    cleaned = text.replace("[", "").replace("]", "").replace(" ", "")
    parts = [p for p in cleaned.split(",") if p]
    if len(parts) != 8:
        raise ShapeError(f"expected 8 comma-separated entries, got {len(parts)}: {text!r}")
    vals = [int(p) for p in parts]
    if not all(0 <= v < F.q for v in vals):
        raise ShapeError(f"entries must lie in 0..{F.q - 1}: {text!r}")
    return StructureMatrix(F, tuple(vals))


def matrices(F: FieldSpec) -> Iterable[StructureMatrix]:
    for entries in itertools.product(range(F.q), repeat=8):
        yield StructureMatrix(F, entries)
