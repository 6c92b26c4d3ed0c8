"""Gaussian elimination over GF(q), on matrices of field indices."""

from __future__ import annotations

from typing import Sequence

from .field import FieldSpec


def row_reduce(F: FieldSpec, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = inv[m[r][c]]
        m[r] = [mul[s][x] for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = neg[m[i][c]]
                m[i] = [add[x][mul[f][y]] for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(F: FieldSpec, rows: Sequence[Sequence[int]]) -> int:
    return len(row_reduce(F, rows)[1])


def nullity(F: FieldSpec, rows: Sequence[Sequence[int]]) -> int:
    """Dimension of the right kernel."""
    ncols = len(rows[0]) if rows else 0
    return ncols - rank(F, rows)


def nullspace(F: FieldSpec, rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """A basis of the right kernel ``{x : rows x = 0}``."""
    ncols = len(rows[0])
    red, pivots = row_reduce(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg[red[i][f]]
        basis.append(v)
    return basis
