from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proequip import catalog
from proequip import profunctor as pf
from proequip.equip import (
    BrokenRestrictionCat,
    CatEquipment,
    Function,
    Span,
    SpanCell,
    SpanEquipment,
    cartesian_filler_check,
    cocartesian_filler_check,
    compose_spans,
    enumerate_functions,
    finite_set,
    identity_function,
    interchange_check,
    paste,
    triangle_identities,
    verify_equipment,
)
from proequip.errors import BoundaryError
from proequip.fincat import identity_functor

CAT = CatEquipment()
SPAN = SpanEquipment()
SETS = [finite_set(n) for n in range(4)]
SMALL_CATS = ["1", "2", "D2", "Z2"]


def test_cat_companion_of_identity():
    for C in catalog.corpus():
        comp = CAT.companion(identity_functor(C))
        assert CAT.iso_proarrows(comp, CAT.identity_proarrow(C)) is not None


def test_cat_restriction_is_cartesian():
    G = pf.hom_profunctor(catalog.category("2"))
    for f in catalog.functors("D2", "2"):
        for g in catalog.functors("1", "2"):
            cell = CAT.restrict(G, f, g)
            assert CAT.is_cartesian(cell)
            assert all(cartesian_filler_check(CAT, f, G, g))


def test_cat_interchange_on_examples():
    one, two = catalog.category("1"), catalog.category("2")
    Fs = [pf.hom_profunctor(one), pf.empty_profunctor(one, one)]
    Gs = [pf.hom_profunctor(two), CAT.companion(identity_functor(two)), pf.empty_profunctor(two, two)]
    for F in Fs:
        for f in catalog.functors("1", "2"):
            for g in catalog.functors("1", "2"):
                for G in Gs:
                    assert interchange_check(CAT, F, f, g, G)


def test_span_companion_example():
    A, B = finite_set(1), finite_set(2)
    f = Function(A, B, {"0": "1"}, "f")
    S = SPAN.companion(f)
    assert S.apex == ("0",)
    assert S.left == {"0": "0"} and S.right == {"0": "1"}
    C = SPAN.conjoint(f)
    assert C.left == {"0": "1"} and C.right == {"0": "0"}


def test_span_composite_cardinality():
    A, B, Cc = finite_set(1, "A"), finite_set(1, "B"), finite_set(1, "C")
    X = Span(A, B, ["x0", "x1"], {"x0": "0", "x1": "0"}, {"x0": "0", "x1": "0"}, "X")
    Y = Span(B, Cc, ["y0", "y1", "y2"], dict.fromkeys(["y0", "y1", "y2"], "0"),
             dict.fromkeys(["y0", "y1", "y2"], "0"), "Y")
    assert len(compose_spans(Y, X).apex) == 6


def test_span_unit_law():
    for A in SETS:
        for B in SETS[:3]:
            for f in enumerate_functions(A, B):
                S = SPAN.companion(f)
                left = compose_spans(SPAN.identity_proarrow(B), S)
                right = compose_spans(S, SPAN.identity_proarrow(A))
                assert SPAN.iso_proarrows(left, S) is not None
                assert SPAN.iso_proarrows(right, S) is not None


def test_span_cell_rejects_bad_legs():
    A = finite_set(2)
    S = SPAN.identity_proarrow(A)
    swap = Function(A, A, {"0": "1", "1": "0"})
    with pytest.raises(BoundaryError):
        SpanCell(S, S, identity_function(A), swap, {"0": "0", "1": "1"})


def test_verify_cat_on_point_and_arrow():
    rep = verify_equipment(CAT, [catalog.category("1"), catalog.category("2")])
    assert rep.ok, rep.failures[:5]
    assert rep.checks == 770


def test_verify_span_small():
    rep = verify_equipment(SPAN, SETS[:3])
    assert rep.ok, rep.failures[:5]
    assert rep.checks > 0


def test_verify_parallel_matches_serial():
    objs = [catalog.category("1"), catalog.category("D2")]
    a = verify_equipment(CAT, objs)
    b = verify_equipment(CAT, objs, jobs=2)
    assert (a.checks, a.failures) == (b.checks, b.failures)


def test_broken_instance_reports_cartesian_failures():
    rep = verify_equipment(BrokenRestrictionCat(), [catalog.category("1"), catalog.category("2")])
    assert not rep.ok
    assert all(msg.startswith("restriction not cartesian") for msg in rep.failures)


@pytest.mark.parametrize("name", catalog.corpus_names())
def test_triangle_identities_cat(name):
    for target in ("1", "2", "Z2"):
        for f in catalog.functors(name, target):
            assert triangle_identities(CAT, f) == (True, True)


def test_triangle_identities_span():
    for A in SETS:
        for B in SETS:
            for f in enumerate_functions(A, B):
                assert triangle_identities(SPAN, f) == (True, True)


def test_paste_requires_matching_rows():
    f = catalog.pick("2", "1")
    with pytest.raises(BoundaryError):
        paste(CAT, [[CAT.companion_exit(f)], [CAT.companion_exit(f)]])


@st.composite
def span_quadruples(draw):
    A, B = (draw(st.sampled_from(SETS)) for _ in range(2))
    C, D = (draw(st.sampled_from(SETS[1:])) for _ in range(2))
    f = draw(st.sampled_from(enumerate_functions(A, C)))
    g = draw(st.sampled_from(enumerate_functions(B, D)))
    F = _random_span(draw, A, B)
    G = _random_span(draw, C, D)
    return F, f, g, G


def _random_span(draw, A, B):
    n = draw(st.integers(0, 3)) if len(A) and len(B) else 0
    apex = [f"x{i}" for i in range(n)]
    left = {x: draw(st.sampled_from(A.elements)) for x in apex}
    right = {x: draw(st.sampled_from(B.elements)) for x in apex}
    return Span(A, B, apex, left, right, "S")


@settings(max_examples=60, deadline=None)
@given(span_quadruples())
def test_span_interchange_bijection(q):
    F, f, g, G = q
    assert interchange_check(SPAN, F, f, g, G)
    assert cocartesian_filler_check(SPAN, F, f, g)
    assert all(cartesian_filler_check(SPAN, f, G, g))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_cat_interchange_bijection(data):
    A, B, C, D = (catalog.category(data.draw(st.sampled_from(SMALL_CATS))) for _ in range(4))
    f = data.draw(st.sampled_from(catalog.functors(A.name, C.name)))
    g = data.draw(st.sampled_from(catalog.functors(B.name, D.name)))
    from .strategies import profunctors
    F = data.draw(profunctors(A, B, max_size=2))
    G = data.draw(profunctors(C, D, max_size=2))
    assert interchange_check(CAT, F, f, g, G)
    assert cocartesian_filler_check(CAT, F, f, g)
    assert all(cartesian_filler_check(CAT, f, G, g))


def _cartesian_composition(inst, c, cells_above):
    """For cartesian ``c`` and each ``d`` stacked on it: d cartesian iff d;c cartesian."""
    assert inst.is_cartesian(c)
    for d in cells_above:
        assert inst.is_cartesian(d) == inst.is_cartesian(inst.vcomp(d, c))


def test_cartesian_cells_compose_cat():
    two = catalog.category("2")
    G = pf.hom_profunctor(two)
    for f in catalog.functors("D2", "2"):
        for g in catalog.functors("1", "2"):
            c = CAT.restrict(G, f, g)
            R = c.top
            for f2 in catalog.functors("1", "D2"):
                for g2 in catalog.functors("1", "1"):
                    for F in (pf.hom_profunctor(catalog.category("1")),
                              pf.empty_profunctor(catalog.category("1"), catalog.category("1"))):
                        _cartesian_composition(CAT, c, CAT.enumerate_cells(F, R, f2, g2))


def test_cartesian_cells_compose_span():
    for G in (SPAN.identity_proarrow(SETS[2]), SPAN.companion(enumerate_functions(SETS[2], SETS[2])[1])):
        for f in enumerate_functions(SETS[1], SETS[2]) + enumerate_functions(SETS[2], SETS[2]):
            for g in enumerate_functions(SETS[1], SETS[2]):
                c = SPAN.restrict(G, f, g)
                R = c.top
                for f2 in enumerate_functions(SETS[1], R.source):
                    for g2 in enumerate_functions(SETS[1], R.target):
                        for F in (SPAN.identity_proarrow(SETS[1]),
                                  Span(SETS[1], SETS[1], ["a", "b"], {"a": "0", "b": "0"},
                                       {"a": "0", "b": "0"}, "two")):
                            _cartesian_composition(SPAN, c, SPAN.enumerate_cells(F, R, f2, g2))


def test_unit_counit_cells_have_identity_sides():
    f = catalog.pick("2", "1")
    eta, eps = CAT.unit_cell(f), CAT.counit_cell(f)
    top, bottom, left, right = CAT.boundary(eta)
    assert left == right == identity_functor(f.source)
    top, bottom, left, right = CAT.boundary(eps)
    assert left == right == identity_functor(f.target)
