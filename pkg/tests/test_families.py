import itertools
import random

import pytest

from alg2d import families as fam
from alg2d.algebra import ShapeError, StructureMatrix, act, fifth_matrix, is_isomorphic
from alg2d.census import canonical_code
from alg2d.families import (
    CharacteristicMismatch, DomainError, FamilyClass, FamilyId, OmittedFamilyError,
)
from alg2d.field import make_field

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 3)]


def fid(F, label):
    return FamilyId(F.char_case, label)


def cls(F, label, *params):
    return FamilyClass(fid(F, label), tuple(params))


# --- representatives --------------------------------------------------------------------

def test_a9_over_gf5():
    F = make_field(5)
    assert fam.representative(cls(F, "A9"), F).entries == (2, 0, 0, 0, 1, 4, 3, 0)


@pytest.mark.parametrize("p", [5, 7])
def test_cube_family_at_zero(p):
    F = make_field(p)
    assert fam.representative(cls(F, "A11", 0), F).entries == (0, 0, 0, 1, 0, 0, 0, 0)


def test_special_points_char2():
    F = make_field(2)
    for a1 in range(2):
        assert fam.representative(cls(F, "A2,2", a1, 0, 1), F).entries == (a1, 0, 0, 0, 1, 1, 1 ^ a1, 0)
    with pytest.raises(DomainError):
        fam.representative(cls(F, "A2,2", 0, 0, 0), F)
    fam.representative(cls(F, "A5,2", 1, 0), F)
    with pytest.raises(DomainError):
        fam.representative(cls(F, "A5,2", 0, 0), F)


def test_representative_errors():
    F5, F2 = make_field(5), make_field(2)
    with pytest.raises(DomainError):
        fam.representative(cls(F5, "A2", 1, 0, 1), F5)
    with pytest.raises(DomainError):
        fam.representative(cls(F5, "A1", 1, 2), F5)
    with pytest.raises(CharacteristicMismatch):
        fam.representative(FamilyClass(FamilyId("2", "A1,2"), (0, 0, 0, 0)), F5)
    for label in ("A13",):
        with pytest.raises(OmittedFamilyError):
            fam.representative(cls(F5, label), F5)
    with pytest.raises(OmittedFamilyError):
        fam.representative(cls(F2, "A12,2"), F2)
    F3 = make_field(3)
    for label in ("A12,3", "A13,3"):
        with pytest.raises(OmittedFamilyError):
            fam.family(fid(F3, label))


def test_labels_per_case():
    assert [f.id.label for f in fam.families("2")] == [f"A{i},2" for i in range(1, 12)]
    assert [f.id.label for f in fam.families("3")] == [f"A{i},3" for i in range(1, 12)]
    assert [f.id.label for f in fam.families("generic")] == [f"A{i}" for i in range(1, 13)]
    # the three fifth-subset shapes in characteristic 3, told apart by matrix shape
    F = make_field(3)
    shapes = {fam.fifth_family("3", k).id.label: fam.representative(cls(F, fam.fifth_family("3", k).id.label, 2), F).entries
              for k in ("beta", "cube", "square")}
    assert shapes == {"A9,3": (0, 1, 1, 1, 2, 0, 0, 2), "A10,3": (0, 0, 0, 1, 2, 0, 0, 0),
                      "A11,3": (0, 1, 1, 0, 2, 0, 0, 2)}


# --- moves ----------------------------------------------------------------------------------

def test_move_sets():
    F = make_field(5)
    assert fam.equivalence_moves(fid(F, "A1")) == ()
    (m,) = fam.equivalence_moves(fid(F, "A11"))
    assert "a^3" in m.description
    (m,) = fam.equivalence_moves(FamilyId("2", "A11,2"))
    assert m.description.startswith("b1 -> b^2(b1 + a^2)")
    assert len(fam.equivalence_moves(FamilyId("generic", "A11"), "original")) == 2


def _move_pairs(F, fam_def):
    for pt in fam_def.domain_points(F):
        els = tuple(F.element(i) for i in pt)
        for mv in fam_def.moves:
            for _, new in mv.instances(F, els):
                yield pt, tuple(int(x) for x in new)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1)])
def test_every_move_is_an_isomorphism_exhaustive(p, n):
    F = make_field(p, n)
    for f in fam.families(F.char_case):
        for a, b in _move_pairs(F, f):
            A = fam.representative(FamilyClass(f.id, a), F)
            B = fam.representative(FamilyClass(f.id, b), F)
            g = is_isomorphic(A, B)
            assert g is not None, (f.id.label, a, b)
            assert act(g, A) == B


@pytest.mark.parametrize("p,n", [(5, 1), (2, 2), (7, 1)])
def test_every_move_is_an_isomorphism_sampled(p, n):
    F = make_field(p, n)
    rng = random.Random(p * 10 + n)
    for f in fam.families(F.char_case):
        pairs = list(_move_pairs(F, f))
        for a, b in rng.sample(pairs, min(40, len(pairs))):
            A = fam.representative(FamilyClass(f.id, a), F)
            B = fam.representative(FamilyClass(f.id, b), F)
            assert canonical_code(A) == canonical_code(B), (f.id.label, a, b)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)])
def test_move_witnesses_are_exact(p, n):
    F = make_field(p, n)
    for f in fam.families(F.char_case):
        if f.fifth_kind is None:
            continue
        for pt in f.domain_points(F):
            els = tuple(F.element(i) for i in pt)
            for mv in f.moves:
                for sc, new in mv.instances(F, els):
                    w = fam.move_witness(f.id, F, pt, [int(s) for s in sc])
                    A = fam.representative(FamilyClass(f.id, pt), F)
                    B = fam.representative(FamilyClass(f.id, tuple(int(x) for x in new)), F)
                    assert act(w, A) == B


# --- the normalisation map -----------------------------------------------------------------

def test_beta_prime_examples():
    F = make_field(5)
    b = F(1)
    assert fam.beta_prime(b, F(2)) == F(3)
    assert fam.beta_prime_rational(b, F(2)) == F(3)
    for b in F.elements():
        assert fam.beta_prime(b, F(2), "generic") == 4 - b
    F2 = make_field(2, 2)
    for t in F2.elements():
        assert fam.beta_prime(F2.zero, t) == F2.zero
    with pytest.raises(CharacteristicMismatch):
        fam.beta_prime(F(1), F(1), "2")


def test_beta_prime_undefined():
    F = make_field(7)
    # 1 + t + t^2 = 0 at t = 2
    with pytest.raises(fam.UndefinedValue):
        fam.beta_prime(F(1), F(2))


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)])
def test_char_specific_formulas_are_the_generic_one_reduced(p, n):
    F = make_field(p, n)
    sp = fam.special_point(F)
    for b, t in itertools.product(F.elements(), repeat=2):
        if t == sp:
            continue
        generic = fam.beta_prime_rational(b, t)
        if generic is None:
            with pytest.raises(fam.UndefinedValue):
                fam.beta_prime(b, t)
        else:
            assert fam.beta_prime(b, t) == generic


def test_admissible_examples():
    F2, F5 = make_field(2), make_field(5)
    a82 = FamilyId("2", "A8,2")
    assert fam.admissible(a82, F2(1), F2(0))
    assert not any(fam.admissible(a82, F2(0), a) for a in F2.elements())
    assert not fam.admissible(FamilyId("generic", "A10"), F5(0), F5(3))
    assert fam.admissible(FamilyId("generic", "A10"), F5(1), F5(2))  # special point
    with pytest.raises(fam.CatalogError):
        fam.admissible(FamilyId("generic", "A11"), F5(0), F5(3))


# --- parameter orbits and counts -------------------------------------------------------------

def test_param_orbit_examples():
    F5 = make_field(5)
    assert fam.family_count(fid(F5, "A3"), F5) == 75
    assert fam.param_partition(fid(F5, "A11"), F5) == {(0,): ((0,),), (1,): ((1,), (2,), (3,), (4,))}
    F2 = make_field(2)
    assert fam.param_orbits(fid(F2, "A10,2"), F2) == [(0,), (1,)]
    assert fam.param_partition(fid(F5, "A10"), F5) == {(0,): ((0,), (4,)), (1,): ((1,), (3,)), (2,): ((2,),)}


@pytest.mark.parametrize("p,n", FIELDS)
def test_closed_forms_match_orbit_counts(p, n):
    F = make_field(p, n)
    for f in fam.families(F.char_case):
        cf = fam.closed_form_count(f.id, F)
        if cf is not None:
            assert fam.family_count(f.id, F) == cf, f.id.label


def test_closed_form_examples():
    F2, F4 = make_field(2), make_field(2, 2)
    assert fam.closed_form_count(FamilyId("2", "A4,2"), F2) == 6
    assert fam.closed_form_count(FamilyId("2", "A7,2"), F2) == 3
    assert fam.closed_form_count(FamilyId("2", "A9,2"), F4) == 4
    assert fam.closed_form_count(FamilyId("2", "A8,2"), F2) is None


def test_range_count():
    F2, F4 = make_field(2), make_field(2, 2)
    assert fam.range_count_x2ax(F2, 0) == 2
    assert fam.range_count_x2ax(F2, 1) == 1
    assert fam.range_count_x2ax(F4, 1) == 2
    for a in range(1, 8):
        assert fam.range_count_x2ax(make_field(2, 3), a) == 4
    with pytest.raises(CharacteristicMismatch):
        fam.range_count_x2ax(make_field(3), 1)


@pytest.mark.parametrize("p,n", FIELDS)
def test_poly_identities(p, n):
    F = make_field(p, n)
    assert all(fam.poly_identities(F, b) for b in range(F.q))


def test_poly_identity_char2_by_hand():
    F = make_field(2)
    # (t^3 + t + 1)^2 = t^6 + t^2 + 1
    sq = fam._pmul(F, [F(1), F(1), F(0), F(1)], [F(1), F(1), F(0), F(1)])
    assert [int(c) for c in sq] == [1, 0, 1, 0, 0, 0, 1]


def test_totals():
    assert fam.published_total(make_field(5)) == 877
    assert fam.published_total(make_field(2)) == 52
    assert fam.published_total(make_field(3)) == 162
    # the printed total for q = 2^(2k) is one less than the sum of its own family counts
    F4 = make_field(2, 2)
    summed = 1 + sum(fam.closed_form_count(f.id, F4) for f in fam.families("2")
                     if fam.closed_form_count(f.id, F4) is not None)
    assert fam.closed_form_total(F4) == summed - 1


# --- the fifth-subset reduction --------------------------------------------------------------

@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 3)])
def test_reduce_fifth_family_exhaustive(p, n):
    F = make_field(p, n)
    for idx in itertools.product(range(F.q), repeat=4):
        A = fifth_matrix(F, *idx)
        c, g = fam.reduce_fifth_family(A)
        assert act(g, A) == fam.representative(c, F)
        if not c.is_trivial:
            assert c.params == fam.canonical_params(c.id, F, c.params)


def test_reduce_examples():
    F = make_field(5)
    c, _ = fam.reduce_fifth_family(StructureMatrix.from_rows(F, (0, 1, 1, 1), (4, 0, 0, -1)))
    assert c == cls(F, "A10", 0)
    c, g = fam.reduce_fifth_family(StructureMatrix.from_rows(F, (0, 0, 0, 3), (2, 0, 0, 0)))
    assert c.id.label == "A11"
    assert g.inv_entries[1] == 0 and g.inv_entries[2] == 0
    c, _ = fam.reduce_fifth_family(StructureMatrix.from_rows(F, (1, 0, 0, 0), (0, -1, -1, 0)))
    assert c == cls(F, "A12", 0)
    c, _ = fam.reduce_fifth_family(StructureMatrix.from_rows(F, (0, 0, 0, 0), (1, 0, 0, 0)))
    assert c == cls(F, "A11", 0)
    c, _ = fam.reduce_fifth_family(StructureMatrix.zero(F))
    assert c.is_trivial
    with pytest.raises(ShapeError):
        fam.reduce_fifth_family(StructureMatrix.from_rows(F, (1, 0, 0, 0), (0, 0, 0, 0)))


def test_family_class_json():
    c = FamilyClass(FamilyId("2", "A4,2"), (1, 0, 1))
    assert c.to_json() == {"char_case": "2", "label": "A4,2", "params": [1, 0, 1]}
    assert FamilyClass.from_json(c.to_json()) == c


@pytest.mark.parametrize("p", [2, 3, 5])
def test_original_catalog_partitions_orbits(p):
    """The earlier lists with no-root conditions hit each orbit exactly once."""
    from alg2d.census import catalog_index, orbit_enumerate
    F = make_field(p)
    idx = catalog_index(F, "original")
    assert all(len(v) == 1 for v in idx.values())
    assert set(idx) | {0} == set(int(c) for c in orbit_enumerate(F).codes)


@pytest.mark.parametrize("p,n,expected", [
    (2, 1, [["A8,2(0)", "A11,2(0)"], ["A9,2(1)", "A10,2(1)"]]),
    (3, 1, [["A10,3(1)", "A11,3(2)"], ["A9,3(2)", "A11,3(1)"]]),
    (5, 1, [["A10(0)", "A12(0)"], ["A10(2)", "A11(1)", "A12(1)"]]),
])
def test_corrected_catalog_overlaps(p, n, expected):
    """Cross-family coincidences among the fifth-subset items, pinned."""
    from alg2d.census import catalog_index
    F = make_field(p, n)
    found = sorted(sorted(map(str, v)) for v in catalog_index(F).values() if len(v) > 1)
    assert found == sorted(sorted(e) for e in expected)
