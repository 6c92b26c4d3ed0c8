import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from alg2d.algebra import (
    BasisChange, ShapeError, StructureMatrix, act, act_fifth_explicit, automorphism_order,
    canonical_form, fifth_matrix, gl2, gl2_order, group_table, invariants, is_isomorphic,
    parse_matrix, product, x_cubed_form,
)
from alg2d.field import make_field


def act_by_definition(g: BasisChange, A: StructureMatrix) -> StructureMatrix:
    """New basis f1 = xi1 e1 + xi2 e2, f2 = eta1 e1 + eta2 e2; write f_i f_j in that basis."""
    F = A.field
    x1, e1, x2, e2 = (F.element(i) for i in g.inv_entries)
    f = [(x1, x2), (e1, e2)]
    gf = [F.element(i) for i in g.g]
    alpha, beta = [], []
    for i, j in itertools.product(range(2), repeat=2):
        u, v = product(A, f[i], f[j])
        alpha.append(gf[0] * u + gf[1] * v)
        beta.append(gf[2] * u + gf[3] * v)
    return StructureMatrix.from_rows(F, alpha, beta)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2)])
def test_act_matches_definition(p, n):
    F = make_field(p, n)
    rng = random.Random(7)
    for g in gl2(F):
        for _ in range(6):
            A = StructureMatrix(F, tuple(rng.randrange(F.q) for _ in range(8)))
            assert act(g, A) == act_by_definition(g, A)


def test_group_table_images_match_scalar_act():
    F = make_field(3)
    table = group_table(F)
    rng = random.Random(1)
    for _ in range(20):
        A = StructureMatrix(F, tuple(rng.randrange(3) for _ in range(8)))
        imgs = table.images(A.entries)
        for k, g in enumerate(table):
            assert tuple(int(x) for x in imgs[k]) == act(g, A).entries


@pytest.mark.parametrize("q,order", [(2, 6), (3, 48), (4, 180), (5, 480)])
def test_gl2_order(q, order):
    p, n = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1)}[q]
    assert gl2_order(q) == order
    assert len(group_table(make_field(p, n))) == order


def test_fifth_explicit_formulas_gf5_sample():
    F = make_field(5)
    rng = random.Random(3)
    G = gl2(F)
    for _ in range(500):
        params = [rng.randrange(5) for _ in range(4)]
        g = rng.choice(G)
        expected = act(g, fifth_matrix(F, *params))
        got = act_fifth_explicit(g, *params)
        assert tuple(int(x) for x in got) == (expected.entries[0], expected.entries[1],
                                              expected.entries[3], expected.entries[4])
        assert expected.is_fifth_shape()


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_action_law_gf5(data):
    F = make_field(5)
    G = gl2(F)
    g1 = G[data.draw(st.integers(0, len(G) - 1))]
    g2 = G[data.draw(st.integers(0, len(G) - 1))]
    A = StructureMatrix(F, tuple(data.draw(st.integers(0, 4)) for _ in range(8)))
    assert act(g2, act(g1, A)) == act(g2 @ g1, A)
    assert act(g1.inverse(), act(g1, A)) == A


def test_basis_change_validation():
    F = make_field(3)
    with pytest.raises(ValueError):
        BasisChange.from_inverse(F, 1, 1, 1, 1)
    g = BasisChange.from_forward(F, 1, 2, 0, 1)
    assert g.g == (1, 2, 0, 1)
    assert (g @ g.inverse()).inv_entries == (1, 0, 0, 1)


def test_from_code_round_trip_and_lex_order():
    F = make_field(3)
    A = StructureMatrix(F, (1, 0, 2, 0, 0, 1, 2, 2))
    assert StructureMatrix.from_code(F, A.code) == A
    B = StructureMatrix(F, (0, 2, 2, 2, 2, 2, 2, 2))
    assert (B < A) == (B.code < A.code)


def test_parse_matrix():
    F = make_field(5)
    assert parse_matrix(F, "1,0,0,0,0,4,4,0").entries == (1, 0, 0, 0, 0, 4, 4, 0)
    assert parse_matrix(F, "[[1,0,0,0],[0,4,4,0]]").entries == (1, 0, 0, 0, 0, 4, 4, 0)
    with pytest.raises(ShapeError):
        parse_matrix(F, "1,2,3")
    with pytest.raises(ShapeError):
        parse_matrix(F, "1,0,0,0,0,4,4,5")


def test_isomorphism_witness_and_invariants():
    F = make_field(3)
    rng = random.Random(11)
    G = gl2(F)
    for _ in range(50):
        A = StructureMatrix(F, tuple(rng.randrange(3) for _ in range(8)))
        B = act(rng.choice(G), A)
        g = is_isomorphic(A, B)
        assert g is not None and act(g, A) == B
        assert invariants(A) == invariants(B)


def test_identity_and_non_isomorphic():
    F = make_field(5)
    A = StructureMatrix.from_rows(F, (1, 0, 0, 0), (0, 0, 0, 0))
    assert is_isomorphic(A, A).inv_entries == (1, 0, 0, 1)
    assert is_isomorphic(A, StructureMatrix.zero(F)) is None


def test_canonical_form_is_orbit_minimum():
    F = make_field(2)
    A = StructureMatrix(F, (1, 1, 0, 1, 0, 1, 1, 0))
    C, g = canonical_form(A)
    assert act(g, A) == C
    assert C.code == min(act(h, A).code for h in gl2(F))


def test_automorphisms_of_zero_algebra():
    F = make_field(3)
    assert automorphism_order(StructureMatrix.zero(F)) == 48


def test_x_cubed_form():
    F = make_field(5)
    # commutative associative algebra with e1 e1 = e2, others zero: x(xx) = 0
    A = StructureMatrix.from_rows(F, (0, 0, 0, 0), (1, 0, 0, 0))
    assert x_cubed_form(A) == {(2, 0): 0, (1, 1): 0, (0, 2): 0}
    # dual numbers: x(xx) = u^3 e1 + 3u^2 v e2, not a multiple of x
    U = StructureMatrix.from_rows(F, (1, 0, 0, 0), (0, 1, 1, 0))
    assert x_cubed_form(U) is None
