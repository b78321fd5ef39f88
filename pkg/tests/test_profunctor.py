from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proequip import catalog
from proequip import profunctor as pf
from proequip.errors import BoundaryError, NotACorrespondenceError
from proequip.fincat import (
    identity_functor,
    opposite,
    opposite_functor,
    validate_category,
    validate_functor,
)

from .oracles import brute_coend_sizes
from .strategies import corpus_categories, corpus_functors, profunctors

ONE = catalog.category("1")
TWO = catalog.category("2")
PICK0 = catalog.pick("2", "0")
PICK1 = catalog.pick("2", "1")
COLLAPSE = catalog.collapse("2")


def is_iso(cell) -> bool:
    return pf.validate_cell(cell) == [] and cell.is_bijective()


def test_hom_examples():
    assert pf.hom_profunctor(ONE).table() == {("*", "*"): 1}
    H = pf.hom_profunctor(TWO)
    assert H("0", "0") == ("id0",)
    assert H("0", "1") == ("u",)
    assert H("1", "0") == ()
    assert H("1", "1") == ("id1",)


def test_companion_conjoint_examples():
    assert pf.companion_of(PICK1).elements == {("0", "*"): ("u",), ("1", "*"): ("id1",)}
    assert pf.companion_of(PICK0).elements == {("0", "*"): ("id0",), ("1", "*"): ()}
    assert pf.conjoint_of(PICK1).elements == {("*", "0"): (), ("*", "1"): ("id1",)}
    for C in catalog.corpus():
        H = pf.hom_profunctor(C)
        assert pf.companion_of(identity_functor(C)) == H
        assert pf.conjoint_of(identity_functor(C)) == H


@settings(max_examples=40)
@given(corpus_functors())
def test_conjoint_is_companion_in_opposites(f):
    dual = pf.opposite_prof(pf.companion_of(opposite_functor(f)))
    assert dual == pf.conjoint_of(f)


@settings(max_examples=60)
@given(profunctors())
def test_random_profunctors_are_valid(P):
    assert pf.validate_profunctor(P) == []


@settings(max_examples=40, deadline=None)
@given(profunctors())
def test_unitors_are_isomorphisms(P):
    assert is_iso(pf.left_unitor(P))
    assert is_iso(pf.right_unitor(P))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_associator_is_iso(data):
    A, B, C, D = (data.draw(corpus_categories) for _ in range(4))
    F = data.draw(profunctors(A, B))
    G = data.draw(profunctors(B, C))
    H = data.draw(profunctors(C, D))
    assert is_iso(pf.associator(H, G, F))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_coend_matches_brute_force(data):
    C, D, E = (data.draw(corpus_categories) for _ in range(3))
    F = data.draw(profunctors(C, D))
    G = data.draw(profunctors(D, E))
    GF = pf.compose_prof(G, F)
    assert GF.table() == brute_coend_sizes(G, F)
    assert pf.validate_profunctor(GF) == []


def test_coend_matches_brute_force_frozen_sample():
    # 200 seeded triples; the sizes agreed with the union-find oracle when frozen
    rng = random.Random(0)
    cats = catalog.corpus(include_empty=False)
    for _ in range(200):
        C, D, E = (rng.choice(cats) for _ in range(3))
        F = pf.random_profunctor(rng, C, D, max_size=3)
        G = pf.random_profunctor(rng, D, E, max_size=3)
        assert pf.compose_prof(G, F).table() == brute_coend_sizes(G, F)


def test_composite_examples():
    H = pf.hom_profunctor(TWO)
    assert pf.iso_prof(pf.compose_prof(H, H), H) is not None
    ff = pf.compose_prof(pf.conjoint_of(PICK1), pf.companion_of(PICK1))
    assert ff.table() == {("*", "*"): 1}
    back = pf.compose_prof(pf.companion_of(PICK1), pf.conjoint_of(PICK1))
    assert back.table() == {("0", "0"): 0, ("0", "1"): 1, ("1", "0"): 0, ("1", "1"): 1}
    assert back.table() == brute_coend_sizes(pf.companion_of(PICK1), pf.conjoint_of(PICK1))


def test_compose_boundary_mismatch():
    with pytest.raises(BoundaryError):
        pf.compose_prof(pf.hom_profunctor(ONE), pf.hom_profunctor(TWO))


@pytest.mark.parametrize("name", ["2", "Z2", "V", "Split"])
def test_left_extension_unit_and_yoneda(name):
    X = catalog.category(name)
    rng = random.Random(7)
    for _ in range(4):
        F = pf.random_profunctor(rng, catalog.category("2"), X, max_size=3)
        ext = pf.left_extension(pf.hom_profunctor(X), F)
        assert pf.validate_profunctor(ext.profunctor) == []
        assert pf.iso_prof(ext.profunctor, F) is not None
        for f in catalog.functors("2", name)[:4]:
            W = pf.companion_of(f)
            yon = pf.left_extension(W, F).profunctor
            ref = pf.restrict(F, identity_functor(F.source), f).top
            assert pf.iso_prof(yon, ref) is not None


@pytest.mark.parametrize("name", ["2", "Z2", "L", "Split"])
def test_right_extension_unit_and_yoneda(name):
    X = catalog.category(name)
    rng = random.Random(11)
    for _ in range(4):
        F = pf.random_profunctor(rng, X, catalog.category("2"), max_size=3)
        ext = pf.right_extension(pf.hom_profunctor(X), F)
        assert pf.validate_profunctor(ext.profunctor) == []
        assert pf.iso_prof(ext.profunctor, F) is not None
        for f in catalog.functors("2", name)[:4]:
            W = pf.conjoint_of(f)
            yon = pf.right_extension(W, F).profunctor
            ref = pf.restrict(F, f, identity_functor(F.target)).top
            assert pf.iso_prof(yon, ref) is not None


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_left_extension_adjunction_bijection(data):
    C, D, E = (data.draw(st.sampled_from(["1", "2", "D2", "Z2"])) for _ in range(3))
    C, D, E = catalog.category(C), catalog.category(D), catalog.category(E)
    W = data.draw(profunctors(C, D, max_size=2))
    V = data.draw(profunctors(E, C, max_size=2))
    F = data.draw(profunctors(E, D, max_size=2))
    ext = pf.left_extension(W, F)
    lhs = pf.enumerate_morphisms(pf.compose_prof(W, V), F)
    rhs = pf.enumerate_morphisms(V, ext.profunctor)
    assert len(lhs) == len(rhs)
    forward = {pf.left_adjunct(ext, theta) for theta in lhs}
    assert forward == set(rhs)
    for theta in lhs:
        assert pf.left_unadjunct(ext, pf.left_adjunct(ext, theta)) == theta
    assert pf.validate_cell(pf.left_extension_counit(ext)) == []


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_right_extension_adjunction_bijection(data):
    C, D, E = (data.draw(st.sampled_from(["1", "2", "D2", "Z2"])) for _ in range(3))
    C, D, E = catalog.category(C), catalog.category(D), catalog.category(E)
    W = data.draw(profunctors(C, D, max_size=2))
    V = data.draw(profunctors(D, E, max_size=2))
    F = data.draw(profunctors(C, E, max_size=2))
    ext = pf.right_extension(W, F)
    lhs = pf.enumerate_morphisms(pf.compose_prof(V, W), F)
    rhs = pf.enumerate_morphisms(V, ext.profunctor)
    assert len(lhs) == len(rhs)
    assert {pf.right_adjunct(ext, theta) for theta in lhs} == set(rhs)
    for theta in lhs:
        assert pf.right_unadjunct(ext, pf.right_adjunct(ext, theta)) == theta
    assert pf.validate_cell(pf.right_extension_counit(ext)) == []


def test_restrict_examples():
    H = pf.hom_profunctor(TWO)
    cell = pf.restrict(H, identity_functor(TWO), identity_functor(TWO))
    assert cell.top == H and cell == pf.identity_cell(H)
    ff = pf.restrict(H, PICK1, PICK1).top
    assert pf.iso_prof(ff, pf.hom_profunctor(ONE)) is not None
    chain = pf.compose_prof(pf.conjoint_of(PICK1), pf.compose_prof(H, pf.companion_of(PICK1)))
    assert chain.table() == ff.table()
    collapsed = pf.restrict(pf.hom_profunctor(ONE), COLLAPSE, COLLAPSE).top
    assert collapsed("1", "0") == ("id*",)
    assert pf.iso_prof(H, collapsed) is None


def test_cocartesian_examples():
    H1 = pf.hom_profunctor(ONE)
    cell = pf.cocartesian_filler(pf.hom_profunctor(TWO), identity_functor(TWO), identity_functor(TWO))
    assert pf.iso_prof(cell.bottom, pf.hom_profunctor(TWO)) is not None
    filler = pf.cocartesian_filler(H1, PICK1, PICK1)
    expected = {("0", "0"): 0, ("0", "1"): 1, ("1", "0"): 0, ("1", "1"): 1}
    assert filler.bottom.table() == expected
    assert pf.validate_cell(filler) == []


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_interchange_bijection(data):
    names = ["1", "2", "D2", "Z2"]
    A, B, C, D = (catalog.category(data.draw(st.sampled_from(names))) for _ in range(4))
    f = data.draw(st.sampled_from(catalog.functors(A.name, C.name)))
    g = data.draw(st.sampled_from(catalog.functors(B.name, D.name)))
    F = data.draw(profunctors(A, B, max_size=2))
    G = data.draw(profunctors(C, D, max_size=2))
    filler = pf.cocartesian_filler(F, f, g)
    R = pf.restrict(G, f, g).top
    left = pf.enumerate_morphisms(filler.bottom, G)
    right = pf.enumerate_morphisms(F, R)
    assert len(left) == len(right)
    assert {pf.interchange_forward(filler, psi) for psi in left} == set(right)
    for phi in right:
        back = pf.interchange_backward(filler, phi, G)
        assert pf.validate_cell(back) == []
        assert pf.interchange_forward(filler, back) == phi


def test_is_cartesian_examples():
    rng = random.Random(3)
    for _ in range(10):
        G = pf.random_profunctor(rng, TWO, catalog.category("Z2"), max_size=3)
        for f in catalog.functors("D2", "2"):
            assert pf.is_cartesian_cell(pf.restrict(G, f, identity_functor(G.target)))
    # the defining square of a companion
    comp = pf.companion_of(PICK1)
    square = pf.ProfCell(comp, pf.hom_profunctor(TWO), PICK1, identity_functor(TWO),
                         {k: {h: h for h in xs} for k, xs in comp.elements.items()})
    assert pf.validate_cell(square) == []
    assert pf.is_cartesian_cell(square)
    H2 = pf.hom_profunctor(TWO)
    squash = pf.ProfCell(H2, pf.hom_profunctor(ONE), COLLAPSE, COLLAPSE,
                         {k: {h: "id*" for h in xs} for k, xs in H2.elements.items()})
    assert pf.validate_cell(squash) == []
    assert not pf.is_cartesian_cell(squash)


def test_collage_examples():
    col = pf.collage(pf.hom_profunctor(ONE)).category
    assert validate_category(col) == []
    assert len(col.objects) == 2 and len(col.morphisms) == 3
    empty = pf.empty_profunctor(TWO, catalog.category("Z2"))
    col = pf.collage(empty)
    assert len(col.category.objects) == 3
    assert len(col.category.morphisms) == len(TWO.morphisms) + len(catalog.category("Z2").morphisms)


@settings(max_examples=40, deadline=None)
@given(profunctors())
def test_collage_round_trip(P):
    col = pf.collage(P)
    assert validate_category(col.category) == []
    assert validate_functor(col.projection) == []
    assert is_iso(pf.collage_round_trip(P))


def test_prof_from_collage_rejects_backwards_morphism():
    # over 2^op the only non-identity arrow runs from fiber 1 to fiber 0
    E = opposite(TWO)
    with pytest.raises(NotACorrespondenceError):
        pf.prof_from_collage(E, identity_functor(E))


def test_elements_span_examples():
    S = pf.elements_span(pf.hom_profunctor(ONE))
    assert len(S.category.objects) == 1 and len(S.category.morphisms) == 1
    S2 = pf.elements_span(pf.hom_profunctor(TWO))
    assert len(S2.category.objects) == 3
    assert validate_category(S2.category) == []
    assert S2.to_source.name == "ev1" and S2.to_target.name == "ev0"
    empty = pf.elements_span(pf.empty_profunctor(TWO, TWO))
    assert empty.category.objects == ()


@settings(max_examples=40, deadline=None)
@given(profunctors())
def test_elements_span_is_discrete_fibration(P):
    S = pf.elements_span(P)
    assert validate_category(S.category) == []
    assert validate_functor(S.to_source) == [] and validate_functor(S.to_target) == []
    assert pf.discreteness_violations(P, S) == []


def test_iso_prof_examples():
    H = pf.hom_profunctor(TWO)
    cell = pf.iso_prof(H, H)
    assert cell == pf.identity_cell(H)
    assert pf.iso_prof(H, pf.companion_of(identity_functor(TWO))) == pf.identity_cell(H)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_conduche_composite_and_mutations(data):
    A, B, C = (data.draw(corpus_categories) for _ in range(3))
    F = data.draw(profunctors(A, B, max_size=2))
    G = data.draw(profunctors(B, C, max_size=2))
    M = pf.composite_trimodule(F, G)
    assert pf.validate_trimodule(M) == []
    assert pf.conduche_check(M)
    e, c = data.draw(st.sampled_from(sorted(M.H.elements)))
    grown = pf.add_free_element(M, e, c)
    res = pf.conduche_check(grown)
    assert not res and res.witness[0] == "not-surjective"
    mergeable = [k for k, xs in M.H.elements.items() if len(xs) >= 2]
    if mergeable:
        k = data.draw(st.sampled_from(mergeable))
        x, y = M.H(*k)[:2]
        merged = pf.merge_elements(M, k, x, y)
        res = pf.conduche_check(merged)
        assert not res and res.witness[0] == "not-injective"


def test_conduche_witnesses():
    F, G = pf.companion_of(PICK1), pf.conjoint_of(PICK1)
    M = pf.composite_trimodule(F, G)
    assert pf.conduche_check(M)
    grown = pf.add_free_element(M, "*", "*")
    assert pf.conduche_check(grown).witness == ("not-surjective", ("*", "*"), "new:(id*,id*)")
