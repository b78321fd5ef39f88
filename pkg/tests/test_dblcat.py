from __future__ import annotations

import pytest

from proequip import catalog
from proequip import dblcat as db
from proequip.errors import BoundaryError, InterchangeError, StructuralError
from proequip.fincat import monoid, validate_category

CORPUS_DOUBLES = [db.commutative_squares(C) for C in catalog.corpus()] + [
    db.free_companion(), db.free_conjoint(), db.trivial_double(),
    db.vertical_only(catalog.category("2")), db.vertical_only(catalog.category("Z2")),
]


def _eckmann_hilton(vertical_table):
    """One object, identity arrows only; squares form a set with two unital products."""
    pt = catalog.category("1")
    els = ["0", "1", "2", "3"]
    z4 = {(a, b): str((int(a) + int(b)) % 4) for a in els for b in els}
    squares = {s: db.Boundary("id*", "id*", "id*", "id*") for s in els}
    return db.from_squares(pt, pt, squares, z4, vertical_table, {"id*": "0"}, {"id*": "0"}, "EH")


KLEIN = {(a, b): str(int(a) ^ int(b)) for a in "0123" for b in "0123"}
Z4 = {(a, b): str((int(a) + int(b)) % 4) for a in "0123" for b in "0123"}


@pytest.mark.parametrize("D", CORPUS_DOUBLES, ids=lambda D: D.name)
def test_corpus_doubles_are_valid(D):
    assert db.validate_double(D) == []


def test_square_double_of_arrow_counts():
    P = db.free_companion()
    assert len(P.objects) == 2
    assert len(P.vertical.morphisms) == 3 and len(P.horizontal.morphisms) == 3
    assert len(P.squares) == 6
    assert db.hop(P) == db.free_conjoint()
    assert db.hop(db.hop(P)) == P


def test_mutated_vertical_product_breaks_interchange():
    good = _eckmann_hilton(Z4)
    assert db.validate_double(good) == []
    bad = _eckmann_hilton(KLEIN)
    found = db.validate_double(bad)
    assert found and all(v.law == "interchange" for v in found)
    s1, s2, s3, s4 = found[0].witness
    with pytest.raises(InterchangeError):
        db.paste_grid(bad, [[s1, s2], [s3, s4]])


def test_dangling_square_ids():
    pt = catalog.category("1")
    with pytest.raises(StructuralError):
        db.from_squares(pt, pt, {"s": db.Boundary("id*", "id*", "id*", "id*")},
                        {("s", "s"): "t"}, {("s", "s"): "s"}, {"id*": "s"}, {"id*": "s"})


def test_paste_grid_examples():
    D = db.commutative_squares(catalog.category("[2]"))
    s = D.squares[3]
    assert db.paste_grid(D, [[s]]) == s
    i0 = D.vid(D.horizontal.id("0"))
    assert db.paste_grid(D, [[i0, i0], [i0, i0]]) == i0
    # a mixed grid: the composite is the unique square with the composite boundary
    H, V = D.horizontal, D.vertical
    grids = [(a, c, b, d) for a in D.squares for c in D.squares_with(left=D.boundary[a].right)
             for b in D.squares_with(top=D.boundary[a].bottom)
             for d in D.squares_with(top=D.boundary[c].bottom, left=D.boundary[b].right)]
    a, c, b, d = next(g for g in grids if len(set(g)) == 4)
    res = db.paste_grid(D, [[a, c], [b, d]])
    bd = D.boundary[res]
    want = db.Boundary(H.compose(D.boundary[c].top, D.boundary[a].top),
                       H.compose(D.boundary[d].bottom, D.boundary[b].bottom),
                       V.compose(D.boundary[b].left, D.boundary[a].left),
                       V.compose(D.boundary[d].right, D.boundary[c].right))
    assert bd == want
    assert D.squares_with(top=bd.top, bottom=bd.bottom, left=bd.left, right=bd.right) == [res]


def test_paste_grid_rejects_mismatch():
    D = db.free_companion()
    ids = [D.vid(h) for h in D.horizontal.morphism_ids]
    with pytest.raises(BoundaryError):
        db.paste_grid(D, [[ids[0], ids[2]]])
    with pytest.raises(StructuralError):
        db.paste_grid(D, [[ids[0]], []])


@pytest.mark.parametrize("D", CORPUS_DOUBLES[:9], ids=lambda D: D.name)
def test_paste_grid_all_2x2_grids_agree(D):
    assert db.interchange_violations(D) == []


def test_companion_search_examples():
    P = db.free_companion()
    for x in P.objects:
        c = db.find_companion(P, P.vertical.id(x))
        assert c.harrow == P.horizontal.id(x)
        assert c.entry == c.exit == P.vid(P.horizontal.id(x))
    c = db.find_companion(P, "u")
    assert c.harrow == "u"
    assert db.find_conjoint(P, "u") is None
    assert db.find_conjoint(db.free_conjoint(), "u") is not None
    # only identity h-arrows: u has no candidate
    assert db.find_companion(db.vertical_only(catalog.category("2")), "u") is None


def test_equipment_double_examples(cat12):
    assert db.is_equipment_double(db.trivial_double())
    assert not db.is_equipment_double(db.free_companion())
    assert db.is_equipment_double(cat12)


@pytest.mark.parametrize("D", CORPUS_DOUBLES, ids=lambda D: D.name)
def test_equipment_iff_cartesian_fillers(D):
    assert db.is_equipment_double(D) == db.has_all_cartesian_fillers(D)


@pytest.mark.parametrize("D", CORPUS_DOUBLES, ids=lambda D: D.name)
def test_free_companion_property_on_corpus(D):
    assert db.free_companion_property(D)


@pytest.mark.parametrize("D", CORPUS_DOUBLES, ids=lambda D: D.name)
def test_companions_unique_up_to_invertible_square(D):
    for v in D.vertical.morphism_ids:
        data = db.companion_data(D, v)
        for a in data:
            for b in data:
                assert db.companion_comparison(D, a, b) is not None


def test_horizontal_adjunction_trivial():
    D = db.trivial_double()
    i = D.horizontal.id("*")
    sq = D.vid(i)
    assert db.horizontal_adjunction_check(D, i, i, sq, sq)


def test_truncated_cat_double(cat12, cat_inst):
    assert db.validate_double(cat12) == []
    assert db.has_all_cartesian_fillers(cat12)
    assert db.free_companion_property(cat12)
    meta = cat12.meta
    for v, f in meta.varrows.items():
        comp = db.find_companion(cat12, v)
        conj = db.find_conjoint(cat12, v)
        assert cat_inst.iso_proarrows(meta.harrows[comp.harrow], cat_inst.companion(f)) is not None
        assert cat_inst.iso_proarrows(meta.harrows[conj.harrow], cat_inst.conjoint(f)) is not None
        for a in db.companion_data(cat12, v):
            assert db.companion_comparison(cat12, comp, a) is not None


def test_truncated_cat_adjunction(cat12):
    v = next(k for k, f in cat12.meta.varrows.items() if f.name == "1->2#1")
    comp, conj = db.find_companion(cat12, v), db.find_conjoint(cat12, v)
    unit = cat12.hcomp(comp.entry, conj.entry)
    counit = cat12.hcomp(conj.exit, comp.exit)
    assert db.horizontal_adjunction_check(cat12, comp.harrow, conj.harrow, unit, counit)
    bu = cat12.boundary[unit]
    others = [s for s in cat12.squares_with(top=bu.top, bottom=bu.bottom, left=bu.left, right=bu.right)
              if s != unit]
    wrong = others[0] if others else cat12.vid(comp.harrow)
    assert not db.horizontal_adjunction_check(cat12, comp.harrow, conj.harrow, wrong, counit)


def test_truncated_span_double(span01, span_inst):
    assert len(span01.horizontal.morphisms) == 5
    assert len(span01.vertical.morphisms) == 3
    assert len(span01.squares) == 14
    assert db.validate_double(span01) == []
    assert db.is_equipment_double(span01)
    assert db.free_companion_property(span01)
    meta = span01.meta
    for v, f in meta.varrows.items():
        comp = db.find_companion(span01, v)
        assert span_inst.iso_proarrows(meta.harrows[comp.harrow], span_inst.companion(f)) is not None


def test_truncate_small_cases(cat_inst):
    empty = db.truncate_equipment(cat_inst, [])
    assert empty.objects == () and empty.squares == ()
    pt = db.truncate_equipment(cat_inst, [catalog.category("1")])
    assert len(pt.horizontal.morphisms) == 1
    assert db.validate_double(pt) == []


def test_interchange_witness_is_a_grid():
    bad = _eckmann_hilton(KLEIN)
    grid = db.interchange_violations(bad)[0].witness
    db.check_grid(bad, db.PastingGrid((grid[:2], grid[2:])))
    # the mutated product is itself a lawful monoid, so only interchange fails
    assert validate_category(monoid(["0", "1", "2", "3"], "0", KLEIN)) == []
