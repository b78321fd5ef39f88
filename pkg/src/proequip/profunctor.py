"""Set-valued profunctors between finite categories.

Convention: a proarrow ``C -> D`` is a functor ``D^op x C -> Set``.  Its
elements are keyed ``(d, c)``.  The left action is covariant in ``C``: for
``a: c -> c'`` it maps ``P(d, c) -> P(d, c')``.  The right action is
contravariant in ``D``: for ``b: d' -> d`` it maps ``P(d, c) -> P(d', c)``.

Composites carry their coend bookkeeping (which triple represents which
class) so that unitors, associators and filler cells can be written down
directly instead of being searched for.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field

from scipy.cluster.hierarchy import DisjointSet

from . import guard as _guard
from ._search import ActionSystem, natural_maps
from .catalog import arrow
from .errors import BoundaryError, NotACorrespondenceError, StructuralError
from .fincat import (
    FinCategory,
    FinFunctor,
    Violation,
    compose_functors,
    fmt,
    identity_functor,
    opposite,
    validate_functor,
)

Key = tuple[str, str]


def coend_id(y: str, d: str, x: str) -> str:
    return f"[{y}|{d}|{x}]"


def family_id(table: Mapping[str, Mapping[str, str]], order: Iterable[str]) -> str:
    """Stable name for an end element: its function table in object order."""
    parts = []
    for k in order:
        fn = table[k]
        parts.append(k + ":" + ",".join(f"{w}>{fn[w]}" for w in sorted(fn)))
    return "{" + ";".join(parts) + "}"


@dataclass(frozen=True)
class Coend:
    """Bookkeeping for a composite ``G ∘ F``.

    ``rep[(e, c)][cls] = (d, y, x)`` is the least triple of a class and
    ``lookup[(e, c)][(d, y, x)]`` is the class of any triple.
    """

    outer: Profunctor
    inner: Profunctor
    rep: Mapping[Key, Mapping[str, tuple[str, str, str]]]
    lookup: Mapping[Key, Mapping[tuple[str, str, str], str]]

    def cls(self, e: str, c: str, d: str, y: str, x: str) -> str:
        return self.lookup[(e, c)][(d, y, x)]


class Profunctor:
    __slots__ = ("source", "target", "elements", "lact", "ract", "name", "coend", "tag", "_key", "_hash")

    def __init__(self, source: FinCategory, target: FinCategory,
                 elements: Mapping[Key, Iterable[str]],
                 lact: Mapping[tuple[str, str], Mapping[str, str]],
                 ract: Mapping[tuple[str, str], Mapping[str, str]],
                 name: str = "", coend: Coend | None = None):
        C, D = source, target
        self.source = C
        self.target = D
        self.name = name
        self.coend = coend
        # ("hom",), ("comp", f) or ("conj", f) for the canonical proarrows
        self.tag: tuple | None = None
        self.elements: dict[Key, tuple[str, ...]] = {}
        for d in D.objects:
            for c in C.objects:
                if (d, c) not in elements:
                    raise StructuralError(f"profunctor {name!r}: no element set at ({d}, {c})")
                xs = tuple(elements[(d, c)])
                if len(set(xs)) != len(xs):
                    raise StructuralError(f"profunctor {name!r}: repeated element at ({d}, {c})")
                self.elements[(d, c)] = xs
        extra = set(elements) - set(self.elements)
        if extra:
            raise StructuralError(f"profunctor {name!r}: element sets at unknown pairs {sorted(extra)}")
        self.lact: dict[tuple[str, str], dict[str, str]] = {}
        self.ract: dict[tuple[str, str], dict[str, str]] = {}
        for a, s, t in C.morphisms:
            for d in D.objects:
                self.lact[(a, d)] = self._action(lact, (a, d), self.elements[(d, s)],
                                                 self.elements[(d, t)], C.is_identity(a))
        for b, s, t in D.morphisms:
            for c in C.objects:
                self.ract[(b, c)] = self._action(ract, (b, c), self.elements[(t, c)],
                                                 self.elements[(s, c)], D.is_identity(b))
        self._key = None
        self._hash = None

    def _action(self, table, key, dom, cod, is_id) -> dict[str, str]:
        fn = table.get(key)
        if fn is None:
            if is_id:
                return {x: x for x in dom}
            if not dom:
                return {}
            raise StructuralError(f"profunctor {self.name!r}: missing action {key}")
        fn = dict(fn)
        if set(fn) != set(dom):
            raise StructuralError(f"profunctor {self.name!r}: action {key} is not total")
        cset = set(cod)
        for x, y in fn.items():
            if y not in cset:
                raise StructuralError(f"profunctor {self.name!r}: action {key} sends {x} outside its target")
        return fn

    @classmethod
    def build(cls, source: FinCategory, target: FinCategory,
              elements: Callable[[str, str], Iterable[str]],
              left: Callable[[str, str, str, str], str],
              right: Callable[[str, str, str, str], str],
              name: str = "", coend: Coend | None = None) -> Profunctor:
        """Construct from functions.

        ``left(a, d, c, x)`` acts by ``a: c -> c'`` on ``x`` in ``P(d, c)``;
        ``right(b, d, c, x)`` acts by ``b: d' -> d`` on ``x`` in ``P(d, c)``.
        """
        C, D = source, target
        els = {(d, c): tuple(elements(d, c)) for d in D.objects for c in C.objects}
        lact = {(a, d): {x: left(a, d, s, x) for x in els[(d, s)]}
                for a, s, _t in C.morphisms for d in D.objects}
        ract = {(b, c): {x: right(b, t, c, x) for x in els[(t, c)]}
                for b, _s, t in D.morphisms for c in C.objects}
        return cls(C, D, els, lact, ract, name, coend)

    # -- access -----------------------------------------------------------

    def __call__(self, d: str, c: str) -> tuple[str, ...]:
        return self.elements[(d, c)]

    def left(self, a: str, d: str, x: str) -> str:
        return self.lact[(a, d)][x]

    def right(self, b: str, c: str, x: str) -> str:
        return self.ract[(b, c)][x]

    def size(self) -> int:
        return sum(len(v) for v in self.elements.values())

    def system(self) -> ActionSystem:
        C, D = self.source, self.target
        arrows = {}
        for a, s, t in C.morphisms:
            if not C.is_identity(a):
                for d in D.objects:
                    arrows[("L", a, d)] = ((d, s), (d, t), self.lact[(a, d)])
        for b, s, t in D.morphisms:
            if not D.is_identity(b):
                for c in C.objects:
                    arrows[("R", b, c)] = ((t, c), (s, c), self.ract[(b, c)])
        return ActionSystem(dict(self.elements), arrows)

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.source.key, self.target.key,
                         tuple(sorted(self.elements.items())),
                         tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.lact.items())),
                         tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.ract.items())))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Profunctor) and self.key == other.key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __repr__(self) -> str:
        return (f"<Profunctor {self.name or '?'}: {self.source.name or '?'} -> "
                f"{self.target.name or '?'}, {self.size()} elements>")

    def renamed(self, name: str) -> Profunctor:
        P = Profunctor(self.source, self.target, self.elements, self.lact, self.ract, name, self.coend)
        P.tag = self.tag
        return P

    def tagged(self, tag: tuple) -> Profunctor:
        self.tag = tag
        return self

    def table(self) -> dict[Key, int]:
        return {k: len(v) for k, v in self.elements.items()}


def validate_profunctor(P: Profunctor) -> list[Violation]:
    C, D = P.source, P.target
    out = []
    for (g, f), h in C.comp.items():
        for d in D.objects:
            for x in P(d, C.src(f)):
                if P.left(g, d, P.left(f, d, x)) != P.left(h, d, x):
                    out.append(Violation("left-action-composition", (g, f, d, x)))
    for (g, f), h in D.comp.items():
        # b = g ∘ f acts as ract(f) ∘ ract(g)
        for c in C.objects:
            for x in P(D.tgt(g), c):
                if P.right(f, c, P.right(g, c, x)) != P.right(h, c, x):
                    out.append(Violation("right-action-composition", (g, f, c, x)))
    for a, cs, ct in C.morphisms:
        for b, ds, dt in D.morphisms:
            for x in P(dt, cs):
                if P.left(a, ds, P.right(b, cs, x)) != P.right(b, ct, P.left(a, dt, x)):
                    out.append(Violation("actions-commute", (a, b, x)))
    return out


# -- basic profunctors ----------------------------------------------------------

def hom_profunctor(C: FinCategory) -> Profunctor:
    return Profunctor.build(
        C, C,
        lambda d, c: C.hom(d, c),
        lambda a, d, c, x: C.compose(a, x),
        lambda b, d, c, x: C.compose(x, b),
        f"hom_{C.name}" if C.name else "hom",
    ).tagged(("hom",))


def companion_of(f: FinFunctor) -> Profunctor:
    """``(d, c) -> hom_D(d, f c)``; a proarrow ``C -> D``."""
    C, D = f.source, f.target
    return Profunctor.build(
        C, D,
        lambda d, c: D.hom(d, f.obj(c)),
        lambda a, d, c, h: D.compose(f.mor(a), h),
        lambda b, d, c, h: D.compose(h, b),
        f"comp({f.name})" if f.name else "comp",
    ).tagged(("comp", f))


def conjoint_of(f: FinFunctor) -> Profunctor:
    """``(c, d) -> hom_D(f c, d)``; a proarrow ``D -> C``."""
    C, D = f.source, f.target
    return Profunctor.build(
        D, C,
        lambda c, d: D.hom(f.obj(c), d),
        lambda b, c, d, h: D.compose(b, h),
        lambda a, c, d, h: D.compose(h, f.mor(a)),
        f"conj({f.name})" if f.name else "conj",
    ).tagged(("conj", f))


def representable(C: FinCategory, D: FinCategory, d0: str, c0: str, name: str = "") -> Profunctor:
    """Free profunctor on one element at ``(d0, c0)``: ``(d, c) -> hom(d, d0) x hom(c0, c)``."""
    pair = {}
    for d in D.objects:
        for c in C.objects:
            for h in D.hom(d, d0):
                for k in C.hom(c0, c):
                    pair[fmt(h, k)] = (h, k)
    named = {v: k for k, v in pair.items()}

    def left(a, d, c, x):
        h, k = pair[x]
        return named[(h, C.compose(a, k))]

    def right(b, d, c, x):
        h, k = pair[x]
        return named[(D.compose(h, b), k)]

    return Profunctor.build(
        C, D,
        lambda d, c: [fmt(h, k) for h in D.hom(d, d0) for k in C.hom(c0, c)],
        left, right, name or f"rep({d0},{c0})",
    )


def empty_profunctor(C: FinCategory, D: FinCategory) -> Profunctor:
    return Profunctor.build(C, D, lambda d, c: (), lambda *a: "", lambda *a: "", "empty")


def coproduct(P: Profunctor, Q: Profunctor, tags: tuple[str, str] = ("0", "1")) -> Profunctor:
    """Componentwise disjoint union; elements are tagged ``tag:x``."""
    _same_boundary(P, Q)
    l, r = tags
    return Profunctor.build(
        P.source, P.target,
        lambda d, c: [f"{l}:{x}" for x in P(d, c)] + [f"{r}:{x}" for x in Q(d, c)],
        lambda a, d, c, x: (f"{l}:{P.left(a, d, x[len(l) + 1:])}" if x.startswith(l + ":")
                            else f"{r}:{Q.left(a, d, x[len(r) + 1:])}"),
        lambda b, d, c, x: (f"{l}:{P.right(b, c, x[len(l) + 1:])}" if x.startswith(l + ":")
                            else f"{r}:{Q.right(b, c, x[len(r) + 1:])}"),
        f"{P.name}+{Q.name}",
    )


def congruence(P: Profunctor, pairs: Iterable[tuple[Key, str, str]]) -> dict[tuple[Key, str], tuple[Key, str]]:
    """Smallest action-stable equivalence containing the given pairs.

    Returns the class representative (least element) of every element.
    """
    members = [(k, x) for k, xs in P.elements.items() for x in xs]
    ds = DisjointSet(members)
    todo = [((k, x), (k, y)) for k, x, y in pairs]
    C, D = P.source, P.target
    while todo:
        u, v = todo.pop()
        if ds.connected(u, v):
            continue
        ds.merge(u, v)
        (d, c), x = u
        _, y = v
        for a in C.morphism_ids:
            if C.src(a) == c:
                todo.append((((d, C.tgt(a)), P.left(a, d, x)), ((d, C.tgt(a)), P.left(a, d, y))))
        for b in D.morphism_ids:
            if D.tgt(b) == d:
                todo.append((((D.src(b), c), P.right(b, c, x)), ((D.src(b), c), P.right(b, c, y))))
    rep = {}
    for group in ds.subsets():
        least = min(group)
        for m in group:
            rep[m] = least
    return rep


def quotient_profunctor(P: Profunctor, pairs: Iterable[tuple[Key, str, str]]) -> tuple[Profunctor, dict]:
    """Quotient by the congruence generated by ``pairs``; also returns the projection."""
    rep = congruence(P, pairs)
    Q = Profunctor.build(
        P.source, P.target,
        lambda d, c: sorted({rep[((d, c), x)][1] for x in P(d, c)}),
        lambda a, d, c, x: rep[((d, P.source.tgt(a)), P.left(a, d, x))][1],
        lambda b, d, c, x: rep[((P.target.src(b), c), P.right(b, c, x))][1],
        f"{P.name}/~",
    )
    proj = {k: {x: rep[(k, x)][1] for x in P.elements[k]} for k in P.elements}
    return Q, proj


def opposite_prof(P: Profunctor) -> Profunctor:
    """``P`` as a proarrow ``D^op -> C^op``: same elements keyed ``(c, d)``, actions swapped."""
    C, D = P.source, P.target
    els = {(c, d): P.elements[(d, c)] for d in D.objects for c in C.objects}
    lact = {(b, c): P.ract[(b, c)] for b in D.morphism_ids for c in C.objects}
    ract = {(a, d): P.lact[(a, d)] for a in C.morphism_ids for d in D.objects}
    name = P.name[:-3] if P.name.endswith("^op") else (P.name + "^op" if P.name else "")
    return Profunctor(opposite(D), opposite(C), els, lact, ract, name)


def _same_boundary(P: Profunctor, Q: Profunctor) -> None:
    if P.source != Q.source or P.target != Q.target:
        raise BoundaryError(f"profunctors {P.name!r} and {Q.name!r} have different boundaries")


# -- morphisms and cells ----------------------------------------------------------

@dataclass(frozen=True)
class ProfCell:
    """A square with verticals ``f: A -> C``, ``g: B -> D``, top ``F: A -> B``,
    bottom ``G: C -> D``; ``comps[(b, a)]`` maps ``F(b, a) -> G(g b, f a)``."""

    top: Profunctor
    bottom: Profunctor
    left: FinFunctor
    right: FinFunctor
    comps: Mapping[Key, Mapping[str, str]]

    def __post_init__(self):
        F, G, f, g = self.top, self.bottom, self.left, self.right
        if f.source != F.source or g.source != F.target:
            raise BoundaryError("cell: verticals do not start at the top proarrow's ends")
        if f.target != G.source or g.target != G.target:
            raise BoundaryError("cell: verticals do not end at the bottom proarrow's ends")
        for (b, a), xs in F.elements.items():
            fn = self.comps.get((b, a))
            if fn is None or set(fn) != set(xs):
                raise StructuralError(f"cell: component at ({b}, {a}) is not total")
            target = set(G(g.obj(b), f.obj(a)))
            if not set(fn.values()) <= target:
                raise StructuralError(f"cell: component at ({b}, {a}) leaves G({g.obj(b)}, {f.obj(a)})")

    def __call__(self, b: str, a: str, x: str) -> str:
        return self.comps[(b, a)][x]

    def flat(self) -> dict[tuple[Key, str], str]:
        return {(k, x): y for k, fn in self.comps.items() for x, y in fn.items()}

    @property
    def key(self) -> tuple:
        return (self.top.key, self.bottom.key, self.left.key, self.right.key,
                tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.comps.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, ProfCell) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def is_bijective(self) -> bool:
        G, f, g = self.bottom, self.left, self.right
        for (b, a), fn in self.comps.items():
            if len(set(fn.values())) != len(fn) or len(fn) != len(G(g.obj(b), f.obj(a))):
                return False
        return True


def validate_cell(cell: ProfCell) -> list[Violation]:
    F, G, f, g = cell.top, cell.bottom, cell.left, cell.right
    A, B = F.source, F.target
    out = []
    for a, s, t in A.morphisms:
        for b in B.objects:
            for x in F(b, s):
                if cell(b, t, F.left(a, b, x)) != G.left(f.mor(a), g.obj(b), cell(b, s, x)):
                    out.append(Violation("cell-left-naturality", (a, b, x)))
    for bm, s, t in B.morphisms:
        for a in A.objects:
            for x in F(t, a):
                if cell(s, a, F.right(bm, a, x)) != G.right(g.mor(bm), f.obj(a), cell(t, a, x)):
                    out.append(Violation("cell-right-naturality", (bm, a, x)))
    return out


def morphism(F: Profunctor, G: Profunctor, comps: Mapping[Key, Mapping[str, str]]) -> ProfCell:
    """A cell with identity verticals."""
    return ProfCell(F, G, identity_functor(F.source), identity_functor(F.target), comps)


def identity_cell(F: Profunctor) -> ProfCell:
    return morphism(F, F, {k: {x: x for x in xs} for k, xs in F.elements.items()})


def cell_from_flat(F: Profunctor, G: Profunctor, f: FinFunctor, g: FinFunctor,
                   flat: Mapping[tuple[Key, str], str]) -> ProfCell:
    comps = {k: {x: flat[(k, x)] for x in xs} for k, xs in F.elements.items()}
    return ProfCell(F, G, f, g, comps)


def vcompose_cells(upper: ProfCell, lower: ProfCell) -> ProfCell:
    """Stack ``upper`` on ``lower`` (upper's bottom is lower's top)."""
    if upper.bottom != lower.top:
        raise BoundaryError("vertical composite: middle proarrows differ")
    f1, g1 = upper.left, upper.right
    comps = {}
    for (b, a), fn in upper.comps.items():
        inner = lower.comps[(g1.obj(b), f1.obj(a))]
        comps[(b, a)] = {x: inner[y] for x, y in fn.items()}
    return ProfCell(upper.top, lower.bottom, compose_functors(upper.left, lower.left),
                    compose_functors(upper.right, lower.right), comps)


def hcompose_cells(second: ProfCell, first: ProfCell) -> ProfCell:
    """``second ∘ first`` side by side: first's right vertical is second's left."""
    if first.right != second.left:
        raise BoundaryError("horizontal composite: shared vertical differs")
    top = compose_prof(second.top, first.top)
    bottom = compose_prof(second.bottom, first.bottom)
    mid = first.right
    comps = {}
    co = top.coend
    for (e, c), reps in co.rep.items():
        fn = {}
        for cls, (d, y, x) in reps.items():
            y2 = second(e, d, y)
            x2 = first(d, c, x)
            fn[cls] = bottom.coend.cls(second.right.obj(e), first.left.obj(c), mid.obj(d), y2, x2)
        comps[(e, c)] = fn
    return ProfCell(top, bottom, first.left, second.right, comps)


def enumerate_morphisms(F: Profunctor, G: Profunctor, guard: int | None = None) -> list[ProfCell]:
    _same_boundary(F, G)
    maps = natural_maps(F.system(), G.system(), what=f"profunctor maps {F.name} => {G.name}", guard=guard)
    return [cell_from_flat(F, G, identity_functor(F.source), identity_functor(F.target), m) for m in maps]


def enumerate_cells(F: Profunctor, G: Profunctor, f: FinFunctor, g: FinFunctor,
                    guard: int | None = None) -> list[ProfCell]:
    """Every cell ``F => G`` over the verticals ``f`` and ``g``."""
    R = restrict(G, f, g).top
    maps = natural_maps(F.system(), R.system(), what=f"cells {F.name} => {G.name}", guard=guard)
    return [cell_from_flat(F, G, f, g, m) for m in maps]


def iso_prof(F: Profunctor, G: Profunctor, guard: int | None = None) -> ProfCell | None:
    """A natural isomorphism ``F => G`` found by exhaustive search, or ``None``."""
    _same_boundary(F, G)
    if F.table() != G.table():
        return None
    maps = natural_maps(F.system(), G.system(), bijective=True, first=True,
                        what=f"isomorphisms {F.name} => {G.name}", guard=guard)
    if not maps:
        return None
    return cell_from_flat(F, G, identity_functor(F.source), identity_functor(F.target), maps[0])


def is_iso_cell(cell: ProfCell) -> bool:
    return not validate_cell(cell) and cell.is_bijective()


def invert_cell(cell: ProfCell) -> ProfCell:
    """Inverse of a bijective cell with identity verticals."""
    comps = {k: {y: x for x, y in fn.items()} for k, fn in cell.comps.items()}
    return morphism(cell.bottom, cell.top, comps)


# -- composition ----------------------------------------------------------------

def compose_prof(G: Profunctor, F: Profunctor, name: str = "") -> Profunctor:
    """``G ∘ F`` for ``F: C -> D`` and ``G: D -> E``, by the coend over ``D``."""
    if F.target != G.source:
        raise BoundaryError(f"cannot compose {G.name!r} after {F.name!r}: middle categories differ")
    C, D, E = F.source, F.target, G.target
    total = sum(len(G(e, d)) * len(F(d, c)) for e in E.objects for d in D.objects for c in C.objects)
    _guard.check("coend composite", total)
    rep: dict[Key, dict[str, tuple[str, str, str]]] = {}
    lookup: dict[Key, dict[tuple[str, str, str], str]] = {}
    nonid = [(m, s, t) for m, s, t in D.morphisms if not D.is_identity(m)]
    for e in E.objects:
        for c in C.objects:
            members = [(d, y, x) for d in D.objects for y in G(e, d) for x in F(d, c)]
            if not members:
                rep[(e, c)] = {}
                lookup[(e, c)] = {}
                continue
            ds = DisjointSet(members)
            for m, s, t in nonid:
                for y in G(e, s):
                    y2 = G.left(m, e, y)
                    for x2 in F(t, c):
                        ds.merge((t, y2, x2), (s, y, F.right(m, c, x2)))
            reps = {}
            look = {}
            for group in ds.subsets():
                ids = {coend_id(y, d, x): (d, y, x) for d, y, x in group}
                least = min(ids)
                reps[least] = ids[least]
                for t3 in group:
                    look[t3] = least
            rep[(e, c)] = dict(sorted(reps.items()))
            lookup[(e, c)] = look
    els = {k: tuple(v) for k, v in rep.items()}

    def left(a: str, e: str, c: str, cls: str) -> str:
        d, y, x = rep[(e, c)][cls]
        return lookup[(e, C.tgt(a))][(d, y, F.left(a, d, x))]

    def right(b: str, e: str, c: str, cls: str) -> str:
        d, y, x = rep[(e, c)][cls]
        return lookup[(E.src(b), c)][(d, G.right(b, d, y), x)]

    P = Profunctor.build(C, E, lambda e, c: els[(e, c)], left, right,
                         name or (f"{G.name}.{F.name}" if G.name and F.name else ""))
    co = Coend(G, F, rep, lookup)
    return Profunctor(P.source, P.target, P.elements, P.lact, P.ract, P.name, co)


def left_unitor(F: Profunctor) -> ProfCell:
    """Canonical map ``hom_D ∘ F => F``: ``[h, x] -> x.h``."""
    H = compose_prof(hom_profunctor(F.target), F)
    comps = {k: {cls: F.right(h, c, x) for cls, (d, h, x) in reps.items()}
             for k, reps in H.coend.rep.items() for c in [k[1]]}
    return morphism(H, F, comps)


def right_unitor(F: Profunctor) -> ProfCell:
    """Canonical map ``F ∘ hom_C => F``: ``[y, k] -> k.y``."""
    H = compose_prof(F, hom_profunctor(F.source))
    comps = {k: {cls: F.left(h, k[0], y) for cls, (c2, y, h) in reps.items()}
             for k, reps in H.coend.rep.items()}
    return morphism(H, F, comps)


def associator(H: Profunctor, G: Profunctor, F: Profunctor) -> ProfCell:
    """Canonical map ``H ∘ (G ∘ F) => (H ∘ G) ∘ F``: ``[z, [y, x]] -> [[z, y], x]``."""
    GF = compose_prof(G, F)
    HG = compose_prof(H, G)
    left_side = compose_prof(H, GF)
    right_side = compose_prof(HG, F)
    comps = {}
    for (e, c), reps in left_side.coend.rep.items():
        fn = {}
        for cls, (d2, z, inner) in reps.items():
            d, y, x = GF.coend.rep[(d2, c)][inner]
            zy = HG.coend.cls(e, d, d2, z, y)
            fn[cls] = right_side.coend.cls(e, c, d, zy, x)
        comps[(e, c)] = fn
    return morphism(left_side, right_side, comps)


# -- restriction and extension -------------------------------------------------------

def restrict(G: Profunctor, f: FinFunctor, g: FinFunctor) -> ProfCell:
    """The cartesian cell ``G(g-, f-) => G`` over ``f`` and ``g``."""
    if f.target != G.source or g.target != G.target:
        raise BoundaryError("restrict: verticals do not land on the proarrow's ends")
    A, B = f.source, g.source
    R = Profunctor.build(
        A, B,
        lambda b, a: G(g.obj(b), f.obj(a)),
        lambda m, b, a, x: G.left(f.mor(m), g.obj(b), x),
        lambda m, b, a, x: G.right(g.mor(m), f.obj(a), x),
        f"<{g.name}|{G.name}|{f.name}>",
    )
    comps = {k: {x: x for x in xs} for k, xs in R.elements.items()}
    return ProfCell(R, G, f, g, comps)


def cocartesian_filler(F: Profunctor, f: FinFunctor, g: FinFunctor) -> ProfCell:
    """The cocartesian cell ``F => comp(g) ∘ F ∘ conj(f)`` over ``f`` and ``g``."""
    if f.source != F.source or g.source != F.target:
        raise BoundaryError("cocartesian filler: verticals do not start at the proarrow's ends")
    inner = compose_prof(F, conjoint_of(f))
    outer = compose_prof(companion_of(g), inner,
                         f"<{g.name}|{F.name}|{f.name}>_!")
    D, C = g.target, f.target
    comps = {}
    for (b, a), xs in F.elements.items():
        fa, gb = f.obj(a), g.obj(b)
        fn = {}
        for x in xs:
            z = inner.coend.cls(b, fa, a, x, C.id(fa))
            fn[x] = outer.coend.cls(gb, fa, b, D.id(gb), z)
        comps[(b, a)] = fn
    return ProfCell(F, outer, f, g, comps)


def is_cartesian_cell(cell: ProfCell) -> bool:
    """Is the induced comparison into the restriction a bijection?"""
    return cell.is_bijective()


def interchange_forward(filler: ProfCell, psi: ProfCell) -> ProfCell:
    """``Map(filler, G) -> Map(F, <g|G|f>)``: precompose with the filler cell."""
    F, f, g = filler.top, filler.left, filler.right
    R = restrict(psi.bottom, f, g).top
    comps = {k: {x: psi.comps[(g.obj(k[0]), f.obj(k[1]))][y] for x, y in fn.items()}
             for k, fn in filler.comps.items()}
    return ProfCell(F, R, identity_functor(F.source), identity_functor(F.target), comps)


def interchange_backward(filler: ProfCell, phi: ProfCell, G: Profunctor) -> ProfCell:
    """``Map(F, <g|G|f>) -> Map(filler, G)``: ``[h, [x, k]] -> (phi(x).k).h``."""
    outer = filler.bottom
    inner = outer.coend.inner
    comps = {}
    for (d, c), reps in outer.coend.rep.items():
        fn = {}
        for cls, (b, h, z) in reps.items():
            a, x, k = inner.coend.rep[(b, c)][z]
            y = phi(b, a, x)
            y = G.left(k, filler.right.obj(b), y)
            fn[cls] = G.right(h, c, y)
        comps[(d, c)] = fn
    return morphism(outer, G, comps)


# -- horizontal closure ------------------------------------------------------------

def _family_system(P: Profunctor, fixed: str, side: str) -> ActionSystem:
    """``P`` with one variable frozen, as a system indexed by the other.

    ``side='c'`` freezes the source variable (index runs over the target
    category with right actions); ``side='d'`` freezes the target variable.
    """
    C, D = P.source, P.target
    if side == "c":
        sets = {d: P(d, fixed) for d in D.objects}
        arrows = {b: (t, s, P.ract[(b, fixed)]) for b, s, t in D.morphisms if not D.is_identity(b)}
    else:
        sets = {c: P(fixed, c) for c in C.objects}
        arrows = {a: (s, t, P.lact[(a, fixed)]) for a, s, t in C.morphisms if not C.is_identity(a)}
    return ActionSystem(sets, arrows)


@dataclass(frozen=True)
class Extension:
    """A closure profunctor with its families decoded."""

    profunctor: Profunctor
    weight: Profunctor
    base: Profunctor
    families: Mapping[Key, Mapping[str, Mapping[str, Mapping[str, str]]]] = field(repr=False)

    def family(self, k: Key, phi: str) -> Mapping[str, Mapping[str, str]]:
        return self.families[k][phi]


def left_extension(W: Profunctor, F: Profunctor, guard: int | None = None) -> Extension:
    """``W ▷ F`` for ``W: C -> D`` and ``F: E -> D``: a proarrow ``E -> C`` with
    ``(c, e)`` the natural families ``W(-, c) => F(-, e)``."""
    if W.target != F.target:
        raise BoundaryError("left extension: the two proarrows must share their target")
    C, D, E = W.source, W.target, F.source
    fams: dict[Key, dict[str, dict[str, dict[str, str]]]] = {}
    for c in C.objects:
        ws = _family_system(W, c, "c")
        for e in E.objects:
            fs = _family_system(F, e, "c")
            maps = natural_maps(ws, fs, what="end families", guard=guard)
            out = {}
            for m in maps:
                table = {d: {w: m[(d, w)] for w in W(d, c)} for d in D.objects}
                out[family_id(table, D.objects)] = table
            fams[(c, e)] = dict(sorted(out.items()))

    def lookup(k: Key, table) -> str:
        return family_id(table, D.objects)

    def left(a: str, c: str, e: str, phi: str) -> str:
        # a: e -> e' in E
        t = fams[(c, e)][phi]
        new = {d: {w: F.left(a, d, y) for w, y in t[d].items()} for d in D.objects}
        return lookup((c, E.tgt(a)), new)

    def right(b: str, c: str, e: str, phi: str) -> str:
        # b: c' -> c in C
        t = fams[(c, e)][phi]
        c2 = C.src(b)
        new = {d: {w: t[d][W.left(b, d, w)] for w in W(d, c2)} for d in D.objects}
        return lookup((c2, e), new)

    P = Profunctor.build(E, C, lambda c, e: fams[(c, e)], left, right, f"{W.name}|>{F.name}")
    return Extension(P, W, F, fams)


def right_extension(W: Profunctor, F: Profunctor, guard: int | None = None) -> Extension:
    """``F^W`` for ``W: C -> D`` and ``F: C -> E``: a proarrow ``D -> E`` with
    ``(e, d)`` the natural families ``W(d, -) => F(e, -)``."""
    if W.source != F.source:
        raise BoundaryError("right extension: the two proarrows must share their source")
    C, D, E = W.source, W.target, F.target
    fams: dict[Key, dict[str, dict[str, dict[str, str]]]] = {}
    for d in D.objects:
        ws = _family_system(W, d, "d")
        for e in E.objects:
            fs = _family_system(F, e, "d")
            maps = natural_maps(ws, fs, what="end families", guard=guard)
            out = {}
            for m in maps:
                table = {c: {w: m[(c, w)] for w in W(d, c)} for c in C.objects}
                out[family_id(table, C.objects)] = table
            fams[(e, d)] = dict(sorted(out.items()))

    def left(a: str, e: str, d: str, phi: str) -> str:
        # a: d -> d' in D; precompose with W's right action by a
        t = fams[(e, d)][phi]
        d2 = D.tgt(a)
        new = {c: {w: t[c][W.right(a, c, w)] for w in W(d2, c)} for c in C.objects}
        return family_id(new, C.objects)

    def right(b: str, e: str, d: str, phi: str) -> str:
        # b: e' -> e in E
        t = fams[(e, d)][phi]
        new = {c: {w: F.right(b, c, y) for w, y in t[c].items()} for c in C.objects}
        return family_id(new, C.objects)

    P = Profunctor.build(D, E, lambda e, d: fams[(e, d)], left, right, f"{F.name}^{W.name}")
    return Extension(P, W, F, fams)


def left_extension_counit(ext: Extension) -> ProfCell:
    """``W ∘ (W ▷ F) => F``: ``[w, phi] -> phi_d(w)``."""
    H = compose_prof(ext.weight, ext.profunctor)
    comps = {}
    for (d, e), reps in H.coend.rep.items():
        comps[(d, e)] = {cls: ext.family((c, e), phi)[d][w] for cls, (c, w, phi) in reps.items()}
    return morphism(H, ext.base, comps)


def right_extension_counit(ext: Extension) -> ProfCell:
    """``F^W ∘ W => F``: ``[phi, w] -> phi_c(w)``."""
    H = compose_prof(ext.profunctor, ext.weight)
    comps = {}
    for (e, c), reps in H.coend.rep.items():
        comps[(e, c)] = {cls: ext.family((e, d), phi)[c][w] for cls, (d, phi, w) in reps.items()}
    return morphism(H, ext.base, comps)


def left_adjunct(ext: Extension, theta: ProfCell) -> ProfCell:
    """``Map(W ∘ V, F) -> Map(V, W ▷ F)``."""
    W = ext.weight
    V = theta.top.coend.inner
    D = W.target
    comps = {}
    for (c, e), vs in V.elements.items():
        fn = {}
        for v in vs:
            table = {d: {w: theta.comps[(d, e)][theta.top.coend.cls(d, e, c, w, v)] for w in W(d, c)}
                     for d in D.objects}
            fn[v] = family_id(table, D.objects)
        comps[(c, e)] = fn
    return morphism(V, ext.profunctor, comps)


def left_unadjunct(ext: Extension, psi: ProfCell) -> ProfCell:
    """``Map(V, W ▷ F) -> Map(W ∘ V, F)``: ``[w, v] -> psi(v)_d(w)``."""
    V = psi.top
    H = compose_prof(ext.weight, V)
    comps = {}
    for (d, e), reps in H.coend.rep.items():
        comps[(d, e)] = {cls: ext.family((c, e), psi(c, e, v))[d][w] for cls, (c, w, v) in reps.items()}
    return morphism(H, ext.base, comps)


def right_adjunct(ext: Extension, theta: ProfCell) -> ProfCell:
    """``Map(V ∘ W, F) -> Map(V, F^W)``."""
    W = ext.weight
    V = theta.top.coend.outer
    C = W.source
    comps = {}
    for (e, d), vs in V.elements.items():
        fn = {}
        for v in vs:
            table = {c: {w: theta.comps[(e, c)][theta.top.coend.cls(e, c, d, v, w)] for w in W(d, c)}
                     for c in C.objects}
            fn[v] = family_id(table, C.objects)
        comps[(e, d)] = fn
    return morphism(V, ext.profunctor, comps)


def right_unadjunct(ext: Extension, psi: ProfCell) -> ProfCell:
    """``Map(V, F^W) -> Map(V ∘ W, F)``: ``[v, w] -> psi(v)_c(w)``."""
    V = psi.top
    H = compose_prof(V, ext.weight)
    comps = {}
    for (e, c), reps in H.coend.rep.items():
        comps[(e, c)] = {cls: ext.family((e, d), psi(e, d, v))[c][w] for cls, (d, v, w) in reps.items()}
    return morphism(H, ext.base, comps)


# -- collages and elements ----------------------------------------------------------

@dataclass(frozen=True)
class Collage:
    category: FinCategory
    projection: FinFunctor
    include_target: FinFunctor
    include_source: FinFunctor
    element_map: Mapping[Key, Mapping[str, str]]


def _cross_id(d: str, c: str, x: str) -> str:
    return "x:" + fmt(d, c, x)


def collage(F: Profunctor) -> Collage:
    """The category over the walking arrow classifying ``F``.

    Target objects sit over 0 (prefixed ``0:``), source objects over 1
    (prefixed ``1:``); ``hom(0:d, 1:c) = F(d, c)``.
    """
    C, D = F.source, F.target
    o0 = {d: "0:" + d for d in D.objects}
    o1 = {c: "1:" + c for c in C.objects}
    m0 = {m: "0:" + m for m in D.morphism_ids}
    m1 = {m: "1:" + m for m in C.morphism_ids}
    objects = [o0[d] for d in D.objects] + [o1[c] for c in C.objects]
    morphisms = [(m0[m], o0[s], o0[t]) for m, s, t in D.morphisms]
    morphisms += [(m1[m], o1[s], o1[t]) for m, s, t in C.morphisms]
    cross = {}
    for (d, c), xs in F.elements.items():
        for x in xs:
            cross[(d, c, x)] = _cross_id(d, c, x)
            morphisms.append((cross[(d, c, x)], o0[d], o1[c]))
    ids = {o0[d]: m0[D.id(d)] for d in D.objects} | {o1[c]: m1[C.id(c)] for c in C.objects}
    comp = {}
    for (g, f), h in D.comp.items():
        comp[(m0[g], m0[f])] = m0[h]
    for (g, f), h in C.comp.items():
        comp[(m1[g], m1[f])] = m1[h]
    for (d, c, x), mid in cross.items():
        for a in C.morphism_ids:
            if C.src(a) == c:
                comp[(m1[a], mid)] = cross[(d, C.tgt(a), F.left(a, d, x))]
        for b in D.morphism_ids:
            if D.tgt(b) == d:
                comp[(mid, m0[b])] = cross[(D.src(b), c, F.right(b, c, x))]
    E = FinCategory(objects, morphisms, ids, comp, f"coll({F.name})" if F.name else "")
    two = arrow()
    p = FinFunctor(E, two,
                   {o: ("0" if o.startswith("0:") else "1") for o in objects},
                   {m: ("id0" if s.startswith("0:") and t.startswith("0:") else
                        "id1" if s.startswith("1:") else "u") for m, s, t in morphisms},
                   "p")
    inc_d = FinFunctor(D, E, o0, m0, "i0")
    inc_c = FinFunctor(C, E, o1, m1, "i1")
    emap = {(d, c): {x: cross[(d, c, x)] for x in xs} for (d, c), xs in F.elements.items()}
    return Collage(E, p, inc_d, inc_c, emap)


def _full_subcategory(E: FinCategory, objects: list[str], name: str = "") -> FinCategory:
    obs = set(objects)
    morphisms = [m for m in E.morphisms if m[1] in obs and m[2] in obs]
    mids = {m[0] for m in morphisms}
    comp = {k: v for k, v in E.comp.items() if k[0] in mids and k[1] in mids}
    return FinCategory(objects, morphisms, {x: E.id(x) for x in objects}, comp, name)


def prof_from_collage(E: FinCategory, p: FinFunctor) -> Profunctor:
    """The profunctor ``fiber(1) -> fiber(0)`` of cross-fiber hom-sets."""
    if p.source != E:
        raise BoundaryError("projection does not start at the given category")
    bad = validate_functor(p)
    if bad:
        raise StructuralError(f"projection is not a functor: {bad[0]}")
    over = {x: p.obj(x) for x in E.objects}
    if set(over.values()) - {"0", "1"} or len(p.target.objects) != 2:
        raise StructuralError("projection must land in the walking arrow with objects 0 and 1")
    for m, s, t in E.morphisms:
        if over[s] == "1" and over[t] == "0":
            raise NotACorrespondenceError(f"morphism {m} runs from fiber 1 to fiber 0")
    D = _full_subcategory(E, [x for x in E.objects if over[x] == "0"], "E0")
    C = _full_subcategory(E, [x for x in E.objects if over[x] == "1"], "E1")
    return Profunctor.build(
        C, D,
        lambda d, c: E.hom(d, c),
        lambda a, d, c, x: E.compose(a, x),
        lambda b, d, c, x: E.compose(x, b),
        "cross",
    )


def collage_round_trip(F: Profunctor) -> ProfCell:
    """Canonical map ``F => <i0|cross|i1>`` sending ``x`` to its cross morphism."""
    col = collage(F)
    P = prof_from_collage(col.category, col.projection)
    C, D = F.source, F.target
    inc_c = FinFunctor(C, P.source, col.include_source.object_map, col.include_source.morphism_map)
    inc_d = FinFunctor(D, P.target, col.include_target.object_map, col.include_target.morphism_map)
    R = restrict(P, inc_c, inc_d).top
    return morphism(F, R, col.element_map)


@dataclass(frozen=True)
class ElementsSpan:
    category: FinCategory
    to_source: FinFunctor
    to_target: FinFunctor


def elements_span(F: Profunctor) -> ElementsSpan:
    """The two-sided discrete fibration of ``F``.

    Objects ``(d, c, x)``; a morphism ``(b, a): (d, c, x) -> (d', c', x')``
    with ``b: d -> d'``, ``a: c -> c'`` and ``a.x = x'.b``.
    """
    C, D = F.source, F.target
    objs = [(d, c, x) for (d, c), xs in F.elements.items() for x in xs]
    oid = {o: fmt(*o) for o in objs}
    morphisms = []
    data = {}
    for (d, c, x) in objs:
        for (d2, c2, x2) in objs:
            for b in D.hom(d, d2):
                for a in C.hom(c, c2):
                    if F.left(a, d, x) == F.right(b, c2, x2):
                        mid = f"{fmt(b, a)}:{oid[(d, c, x)]}->{oid[(d2, c2, x2)]}"
                        morphisms.append((mid, oid[(d, c, x)], oid[(d2, c2, x2)]))
                        data[mid] = (b, a, (d, c, x), (d2, c2, x2))
    look = {(b, a, s, t): m for m, (b, a, s, t) in data.items()}
    comp = {}
    for m2, (b2, a2, s2, t2) in data.items():
        for m1, (b1, a1, s1, t1) in data.items():
            if t1 == s2:
                comp[(m2, m1)] = look[(D.compose(b2, b1), C.compose(a2, a1), s1, t2)]
    ids = {oid[o]: look[(D.id(o[0]), C.id(o[1]), o, o)] for o in objs}
    E = FinCategory([oid[o] for o in objs], morphisms, ids, comp, f"el({F.name})" if F.name else "")
    to_c = FinFunctor(E, C, {oid[o]: o[1] for o in objs}, {m: v[1] for m, v in data.items()}, "ev1")
    to_d = FinFunctor(E, D, {oid[o]: o[0] for o in objs}, {m: v[0] for m, v in data.items()}, "ev0")
    return ElementsSpan(E, to_c, to_d)


def discreteness_violations(F: Profunctor, S: ElementsSpan) -> list[Violation]:
    """Unique lifts of source morphisms out of, and target morphisms into, every object;
    and fibers over identity pairs are discrete."""
    E, pc, pd = S.category, S.to_source, S.to_target
    C, D = F.source, F.target
    out = []
    for o in E.objects:
        d, c = pd.obj(o), pc.obj(o)
        for a in C.morphism_ids:
            if C.src(a) != c:
                continue
            lifts = [m for m, s, _t in E.morphisms if s == o and pc.mor(m) == a and pd.mor(m) == D.id(d)]
            if len(lifts) != 1:
                out.append(Violation("source-lift", (o, a, len(lifts))))
        for b in D.morphism_ids:
            if D.tgt(b) != d:
                continue
            lifts = [m for m, _s, t in E.morphisms if t == o and pd.mor(m) == b and pc.mor(m) == C.id(c)]
            if len(lifts) != 1:
                out.append(Violation("target-lift", (o, b, len(lifts))))
    for m, s, t in E.morphisms:
        if C.is_identity(pc.mor(m)) and D.is_identity(pd.mor(m)) and not E.is_identity(m):
            out.append(Violation("fiber-discrete", (m,)))
    return out


# -- trimodules and the bar condition -----------------------------------------------

@dataclass(frozen=True)
class TriModule:
    """``F: a -> b``, ``G: b -> c``, ``H: a -> c`` and a pairing
    ``mu[(e, c)][(d, y, x)]`` in ``H(e, c)`` for ``y`` in ``G(e, d)``, ``x`` in ``F(d, c)``."""

    F: Profunctor
    G: Profunctor
    H: Profunctor
    mu: Mapping[Key, Mapping[tuple[str, str, str], str]]

    def __post_init__(self):
        if self.F.target != self.G.source or self.H.source != self.F.source or self.H.target != self.G.target:
            raise BoundaryError("trimodule: boundaries do not match")


def validate_trimodule(M: TriModule) -> list[Violation]:
    F, G, H, mu = M.F, M.G, M.H, M.mu
    A, B, Cc = F.source, F.target, G.target
    out = []
    for e in Cc.objects:
        for c in A.objects:
            for d in B.objects:
                for y in G(e, d):
                    for x in F(d, c):
                        h = mu.get((e, c), {}).get((d, y, x))
                        if h is None or h not in H(e, c):
                            out.append(Violation("pairing-total", (e, c, d, y, x)))
                            return out
                        for a in A.morphism_ids:
                            if A.src(a) == c and mu[(e, A.tgt(a))][(d, y, F.left(a, d, x))] != H.left(a, e, h):
                                out.append(Violation("pairing-left", (a, e, d, y, x)))
                        for b in Cc.morphism_ids:
                            if Cc.tgt(b) == e and mu[(Cc.src(b), c)][(d, G.right(b, d, y), x)] != H.right(b, c, h):
                                out.append(Violation("pairing-right", (b, c, d, y, x)))
    for m, s, t in B.morphisms:
        for e in Cc.objects:
            for c in A.objects:
                for y in G(e, s):
                    for x in F(t, c):
                        if mu[(e, c)][(t, G.left(m, e, y), x)] != mu[(e, c)][(s, y, F.right(m, c, x))]:
                            out.append(Violation("pairing-balanced", (m, e, c, y, x)))
    return out


def composite_trimodule(F: Profunctor, G: Profunctor) -> TriModule:
    H = compose_prof(G, F)
    mu = {k: dict(look) for k, look in H.coend.lookup.items()}
    return TriModule(F, G, H, mu)


@dataclass(frozen=True)
class ConducheResult:
    ok: bool
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def conduche_check(M: TriModule) -> ConducheResult:
    """Is the map ``G ∘ F => H`` induced by the pairing a bijection?

    Witness on failure: ``("not-surjective", (e, c), h)`` or
    ``("not-injective", (e, c), cls1, cls2)``.
    """
    GF = compose_prof(M.G, M.F)
    for (e, c), reps in GF.coend.rep.items():
        seen: dict[str, str] = {}
        for cls, t in reps.items():
            h = M.mu[(e, c)][t]
            if h in seen:
                return ConducheResult(False, ("not-injective", (e, c), seen[h], cls))
            seen[h] = cls
        for h in M.H(e, c):
            if h not in seen:
                return ConducheResult(False, ("not-surjective", (e, c), h))
    return ConducheResult(True)


def add_free_element(M: TriModule, e0: str, c0: str) -> TriModule:
    """Mutation: ``H`` gains a free element at ``(e0, c0)``; the pairing is unchanged."""
    H = M.H
    R = representable(H.source, H.target, e0, c0)
    H2 = coproduct(H, R, ("h", "new"))
    mu = {k: {t: "h:" + v for t, v in fn.items()} for k, fn in M.mu.items()}
    return TriModule(M.F, M.G, H2, mu)


def merge_elements(M: TriModule, k: Key, x: str, y: str) -> TriModule:
    """Mutation: identify ``x`` and ``y`` in ``H(k)`` (and whatever that forces)."""
    H2, proj = quotient_profunctor(M.H, [(k, x, y)])
    mu = {kk: {t: proj[kk][v] for t, v in fn.items()} for kk, fn in M.mu.items()}
    return TriModule(M.F, M.G, H2, mu)


# -- random generation (test and benchmark support) ----------------------------------

def random_profunctor(rng, C: FinCategory, D: FinCategory, max_size: int = 4,
                      max_generators: int = 3, tries: int = 50) -> Profunctor:
    """A quotient of a sum of representables with every component of size <= max_size."""
    pairs = [(d, c) for d in D.objects for c in C.objects]
    for _ in range(tries):
        P = empty_profunctor(C, D)
        n = rng.randint(0, max_generators)
        for i in range(n):
            d0, c0 = rng.choice(pairs)
            P = coproduct(P, representable(C, D, d0, c0), (f"p{i}", f"g{i}")) if i else representable(C, D, d0, c0)
        if P.size() and rng.random() < 0.5:
            nonempty = [k for k, xs in P.elements.items() if len(xs) >= 2]
            if nonempty:
                k = rng.choice(nonempty)
                x, y = rng.sample(list(P(*k)), 2)
                P, _ = quotient_profunctor(P, [(k, x, y)])
        if max((len(v) for v in P.elements.values()), default=0) <= max_size:
            return _relabel(P, "rand")
    return empty_profunctor(C, D)


def _relabel(P: Profunctor, name: str) -> Profunctor:
    """Short element names ``e0, e1, ...`` per component."""
    ren = {k: {x: f"e{i}" for i, x in enumerate(xs)} for k, xs in P.elements.items()}
    C, D = P.source, P.target
    return Profunctor.build(
        C, D,
        lambda d, c: [ren[(d, c)][x] for x in P(d, c)],
        lambda a, d, c, x: ren[(d, C.tgt(a))][P.left(a, d, _inv(ren[(d, c)], x))],
        lambda b, d, c, x: ren[(D.src(b), c)][P.right(b, c, _inv(ren[(d, c)], x))],
        name,
    )


def _inv(fn: Mapping[str, str], y: str) -> str:
    for k, v in fn.items():
        if v == y:
            return k
    raise KeyError(y)


def all_pairs(C: FinCategory, D: FinCategory) -> Iterable[Key]:
    return itertools.product(D.objects, C.objects)
