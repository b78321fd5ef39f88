"""Finite categories given by explicit composition tables.

Everything here is decided by exhaustion: the category laws, functor
enumeration, (co)limits in a finite category, colimits and limits of
finite-set diagrams, and the Segal condition for 3-truncated simplicial
sets.

Identifiers are strings.  Derived constructions (opposite, product, comma,
nerve) build new identifiers with :func:`fmt`, so their output is
reproducible byte for byte.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from scipy.cluster.hierarchy import DisjointSet

from . import guard as _guard
from ._search import ActionSystem, natural_maps
from .errors import BoundaryError, StructuralError


def fmt(*parts: str) -> str:
    return "(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.law}: {', '.join(map(str, self.witness))}"


def _comp_items(composition) -> list[tuple[str, str, str]]:
    if isinstance(composition, Mapping):
        return [(g, f, h) for (g, f), h in composition.items()]
    return [tuple(t) for t in composition]


class FinCategory:
    """A finite category.

    ``comp[(g, f)]`` is ``g ∘ f`` and is meant to be defined exactly when
    ``tgt(f) == src(g)``.  The constructor only rejects dangling
    identifiers; the category laws are checked by :func:`validate_category`.
    """

    __slots__ = ("objects", "morphisms", "identities", "comp", "name",
                 "_src", "_tgt", "_hom", "_key", "_hash", "_idset")

    def __init__(self, objects: Iterable[str], morphisms: Iterable[tuple[str, str, str]],
                 identities: Mapping[str, str], composition, name: str = ""):
        self.objects = tuple(objects)
        self.morphisms = tuple(tuple(m) for m in morphisms)
        self.identities = dict(identities)
        self.comp = {}
        self.name = name
        if len(set(self.objects)) != len(self.objects):
            raise StructuralError(f"duplicate object identifiers in {name or 'category'}")
        obset = set(self.objects)
        self._src: dict[str, str] = {}
        self._tgt: dict[str, str] = {}
        for m in self.morphisms:
            if len(m) != 3:
                raise StructuralError(f"morphism entry {m!r} is not (id, src, tgt)")
            mid, s, t = m
            if mid in self._src:
                raise StructuralError(f"duplicate morphism identifier {mid!r}")
            if s not in obset or t not in obset:
                raise StructuralError(f"morphism {mid!r} has dangling endpoint")
            self._src[mid] = s
            self._tgt[mid] = t
        for x in self.objects:
            if x not in self.identities:
                raise StructuralError(f"object {x!r} has no identity")
        for x, i in self.identities.items():
            if x not in obset:
                raise StructuralError(f"identity declared for unknown object {x!r}")
            if i not in self._src:
                raise StructuralError(f"identity {i!r} of {x!r} is not a morphism")
        for g, f, h in _comp_items(composition):
            for m in (g, f, h):
                if m not in self._src:
                    raise StructuralError(f"composition entry ({g}, {f}) -> {h} names unknown morphism {m!r}")
            if (g, f) in self.comp and self.comp[(g, f)] != h:
                raise StructuralError(f"composition of ({g}, {f}) defined twice")
            self.comp[(g, f)] = h
        self._hom: dict[tuple[str, str], tuple[str, ...]] = {}
        for a in self.objects:
            for b in self.objects:
                self._hom[(a, b)] = ()
        for mid, s, t in self.morphisms:
            self._hom[(s, t)] = self._hom[(s, t)] + (mid,)
        self._idset = set(self.identities.values())
        self._key = None
        self._hash = None

    # -- access -------------------------------------------------------------

    @property
    def morphism_ids(self) -> tuple[str, ...]:
        return tuple(m[0] for m in self.morphisms)

    def src(self, m: str) -> str:
        return self._src[m]

    def tgt(self, m: str) -> str:
        return self._tgt[m]

    def id(self, x: str) -> str:
        return self.identities[x]

    def is_identity(self, m: str) -> bool:
        return m in self._idset

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._hom[(a, b)]

    def compose(self, g: str, f: str) -> str:
        """``g ∘ f``."""
        if self._tgt[f] != self._src[g]:
            raise BoundaryError(f"cannot compose {g} after {f}: {self._tgt[f]} != {self._src[g]}")
        try:
            return self.comp[(g, f)]
        except KeyError:
            raise StructuralError(f"composition table has no entry for ({g}, {f})") from None

    def composable_pairs(self) -> Iterable[tuple[str, str]]:
        for g, gs, _gt in self.morphisms:
            for f, _fs, ft in self.morphisms:
                if ft == gs:
                    yield g, f

    def __len__(self) -> int:
        return len(self.morphisms)

    # -- identity -----------------------------------------------------------

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.objects, self.morphisms,
                         tuple(sorted(self.identities.items())),
                         tuple(sorted(self.comp.items())))
        return self._key

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return isinstance(other, FinCategory) and self.key == other.key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __repr__(self) -> str:
        label = self.name or "FinCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    def renamed(self, name: str) -> FinCategory:
        return FinCategory(self.objects, self.morphisms, self.identities, self.comp, name)


def validate_category(C: FinCategory) -> list[Violation]:
    """All violated category laws; empty iff ``C`` is a category."""
    out: list[Violation] = []
    for x in C.objects:
        i = C.id(x)
        if C.src(i) != x or C.tgt(i) != x:
            out.append(Violation("identity-boundary", (x, i)))
    for (g, f), h in C.comp.items():
        if C.tgt(f) != C.src(g):
            out.append(Violation("composition-defined-on-non-composable", (g, f)))
        elif C.src(h) != C.src(f) or C.tgt(h) != C.tgt(g):
            out.append(Violation("composition-boundary", (g, f, h)))
    for g, f in C.composable_pairs():
        if (g, f) not in C.comp:
            out.append(Violation("composition-not-total", (g, f)))
    if out:
        return out
    for f, s, t in C.morphisms:
        if C.comp[(C.id(t), f)] != f:
            out.append(Violation("left-unit", (f,)))
        if C.comp[(f, C.id(s))] != f:
            out.append(Violation("right-unit", (f,)))
    for h, hs, _ in C.morphisms:
        for g in (m for m, ms, mt in C.morphisms if mt == hs):
            gs = C.src(g)
            for f in (m for m, ms, mt in C.morphisms if mt == gs):
                if C.comp[(h, C.comp[(g, f)])] != C.comp[(C.comp[(h, g)], f)]:
                    out.append(Violation("associativity", (h, g, f)))
    return out


# -- basic constructions ------------------------------------------------------

def _toggle_op(name: str) -> str:
    if not name:
        return ""
    return name[:-3] if name.endswith("^op") else name + "^op"


def opposite(C: FinCategory) -> FinCategory:
    """Same identifiers, endpoints swapped, composition reversed."""
    morphisms = [(m, t, s) for m, s, t in C.morphisms]
    comp = {(f, g): h for (g, f), h in C.comp.items()}
    return FinCategory(C.objects, morphisms, C.identities, comp, _toggle_op(C.name))


def terminal() -> FinCategory:
    return FinCategory(["*"], [("id*", "*", "*")], {"*": "id*"}, {("id*", "id*"): "id*"}, "1")


def empty_category() -> FinCategory:
    return FinCategory([], [], {}, {}, "0")


def discrete(objects: Iterable[str], name: str = "") -> FinCategory:
    objs = list(objects)
    ids = {x: f"id{x}" for x in objs}
    return FinCategory(objs, [(ids[x], x, x) for x in objs], ids,
                       {(ids[x], ids[x]): ids[x] for x in objs}, name)


def poset(elements: Iterable[str], relations: Iterable[tuple[str, str]], name: str = "",
          arrow_names: Mapping[tuple[str, str], str] | None = None) -> FinCategory:
    """The category of a finite poset given by generating relations ``a <= b``."""
    elems = list(elements)
    leq = {(a, a) for a in elems} | set(map(tuple, relations))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(leq), list(leq)):
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True
    for a, b in leq:
        if a != b and (b, a) in leq:
            raise StructuralError(f"relations are not antisymmetric at {a}, {b}")
    names = dict(arrow_names or {})

    def name_of(a: str, b: str) -> str:
        if (a, b) in names:
            return names[(a, b)]
        return f"id{a}" if a == b else f"{a}<{b}"

    morphisms = [(name_of(a, b), a, b) for a in elems for b in elems if (a, b) in leq]
    comp = {}
    for a, b, c in itertools.product(elems, repeat=3):
        if (a, b) in leq and (b, c) in leq:
            comp[(name_of(b, c), name_of(a, b))] = name_of(a, c)
    return FinCategory(elems, morphisms, {a: name_of(a, a) for a in elems}, comp, name)


def monoid(elements: Iterable[str], unit: str, table: Mapping[tuple[str, str], str],
           name: str = "", obj: str = "*") -> FinCategory:
    """One-object category; ``table[(g, f)]`` is ``g ∘ f``."""
    elems = list(elements)
    return FinCategory([obj], [(e, obj, obj) for e in elems], {obj: unit}, dict(table), name)


def product(C: FinCategory, D: FinCategory) -> FinCategory:
    objects = [fmt(c, d) for c in C.objects for d in D.objects]
    morphisms = [(fmt(m, n), fmt(ms, ns), fmt(mt, nt))
                 for m, ms, mt in C.morphisms for n, ns, nt in D.morphisms]
    ids = {fmt(c, d): fmt(C.id(c), D.id(d)) for c in C.objects for d in D.objects}
    comp = {}
    for (g, f), h in C.comp.items():
        for (k, l), m in D.comp.items():
            comp[(fmt(g, k), fmt(f, l))] = fmt(h, m)
    name = f"{C.name}x{D.name}" if C.name and D.name else ""
    return FinCategory(objects, morphisms, ids, comp, name)


# -- functors and natural transformations --------------------------------------

class FinFunctor:
    __slots__ = ("source", "target", "object_map", "morphism_map", "name", "_key", "_hash")

    def __init__(self, source: FinCategory, target: FinCategory,
                 object_map: Mapping[str, str], morphism_map: Mapping[str, str], name: str = ""):
        self.source = source
        self.target = target
        self.object_map = {x: object_map[x] for x in source.objects} if set(object_map) >= set(source.objects) else dict(object_map)
        self.morphism_map = {m: morphism_map[m] for m in source.morphism_ids} if set(morphism_map) >= set(source.morphism_ids) else dict(morphism_map)
        self.name = name
        if set(self.object_map) != set(source.objects):
            raise StructuralError(f"functor {name!r}: object map is not total on the source")
        if set(self.morphism_map) != set(source.morphism_ids):
            raise StructuralError(f"functor {name!r}: morphism map is not total on the source")
        tobs = set(target.objects)
        for x, y in self.object_map.items():
            if y not in tobs:
                raise StructuralError(f"functor {name!r}: {x} -> unknown object {y!r}")
        for m, n in self.morphism_map.items():
            if n not in target._src:
                raise StructuralError(f"functor {name!r}: {m} -> unknown morphism {n!r}")
        self._key = None
        self._hash = None

    def obj(self, x: str) -> str:
        return self.object_map[x]

    def mor(self, m: str) -> str:
        return self.morphism_map[m]

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.source.key, self.target.key,
                         tuple(self.object_map[x] for x in self.source.objects),
                         tuple(self.morphism_map[m] for m in self.source.morphism_ids))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, FinFunctor) and self.key == other.key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __repr__(self) -> str:
        omap = ", ".join(f"{x}->{y}" for x, y in self.object_map.items())
        return f"<FinFunctor {self.name or '?'}: {self.source.name or '?'} -> {self.target.name or '?'} [{omap}]>"

    def renamed(self, name: str) -> FinFunctor:
        return FinFunctor(self.source, self.target, self.object_map, self.morphism_map, name)


def validate_functor(F: FinFunctor) -> list[Violation]:
    C, D = F.source, F.target
    out = []
    for m, s, t in C.morphisms:
        n = F.mor(m)
        if D.src(n) != F.obj(s) or D.tgt(n) != F.obj(t):
            out.append(Violation("functor-boundary", (m, n)))
    if out:
        return out
    for x in C.objects:
        if F.mor(C.id(x)) != D.id(F.obj(x)):
            out.append(Violation("functor-identity", (x,)))
    for (g, f), h in C.comp.items():
        if D.compose(F.mor(g), F.mor(f)) != F.mor(h):
            out.append(Violation("functor-composition", (g, f)))
    return out


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor(C, C, {x: x for x in C.objects}, {m: m for m in C.morphism_ids},
                      f"id_{C.name}" if C.name else "id")


def compose_functors(F: FinFunctor, G: FinFunctor, name: str = "") -> FinFunctor:
    """``G ∘ F`` (apply ``F`` first)."""
    if F.target != G.source:
        raise BoundaryError("functors are not composable")
    return FinFunctor(F.source, G.target,
                      {x: G.obj(F.obj(x)) for x in F.source.objects},
                      {m: G.mor(F.mor(m)) for m in F.source.morphism_ids},
                      name or (f"{G.name}.{F.name}" if F.name and G.name else ""))


def opposite_functor(F: FinFunctor) -> FinFunctor:
    return FinFunctor(opposite(F.source), opposite(F.target), F.object_map, F.morphism_map,
                      _toggle_op(F.name))


def point(C: FinCategory, x: str) -> FinFunctor:
    """The functor from the terminal category picking ``x``."""
    return FinFunctor(terminal(), C, {"*": x}, {"id*": C.id(x)}, f"pt_{x}")


def to_terminal(C: FinCategory) -> FinFunctor:
    T = terminal()
    return FinFunctor(C, T, {x: "*" for x in C.objects}, {m: "id*" for m in C.morphism_ids},
                      f"!_{C.name}" if C.name else "!")


def constant_functor(C: FinCategory, D: FinCategory, y: str) -> FinFunctor:
    return FinFunctor(C, D, {x: y for x in C.objects}, {m: D.id(y) for m in C.morphism_ids},
                      f"const_{y}")


@dataclass(frozen=True)
class NatTransformation:
    source: FinFunctor
    target: FinFunctor
    components: Mapping[str, str]

    def __post_init__(self):
        F, G = self.source, self.target
        if F.source != G.source or F.target != G.target:
            raise BoundaryError("natural transformation between non-parallel functors")
        if set(self.components) != set(F.source.objects):
            raise StructuralError("natural transformation components are not total")

    def __getitem__(self, x: str) -> str:
        return self.components[x]

    @property
    def key(self) -> tuple:
        return (self.source.key, self.target.key,
                tuple(self.components[x] for x in self.source.source.objects))

    def __eq__(self, other) -> bool:
        return isinstance(other, NatTransformation) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def validate_nat(alpha: NatTransformation) -> list[Violation]:
    F, G = alpha.source, alpha.target
    C, D = F.source, F.target
    out = []
    for x in C.objects:
        a = alpha[x]
        if D.src(a) != F.obj(x) or D.tgt(a) != G.obj(x):
            out.append(Violation("component-boundary", (x, a)))
    if out:
        return out
    for m, s, t in C.morphisms:
        if D.compose(G.mor(m), alpha[s]) != D.compose(alpha[t], F.mor(m)):
            out.append(Violation("naturality", (m,)))
    return out


def identity_nat(F: FinFunctor) -> NatTransformation:
    return NatTransformation(F, F, {x: F.target.id(F.obj(x)) for x in F.source.objects})


def vcompose_nat(alpha: NatTransformation, beta: NatTransformation) -> NatTransformation:
    """``beta · alpha`` (apply ``alpha`` first)."""
    if alpha.target != beta.source:
        raise BoundaryError("natural transformations are not composable")
    D = alpha.source.target
    return NatTransformation(alpha.source, beta.target,
                             {x: D.compose(beta[x], alpha[x]) for x in alpha.source.source.objects})


def whisker_right(alpha: NatTransformation, H: FinFunctor) -> NatTransformation:
    """``H alpha``: postcompose with a functor."""
    return NatTransformation(compose_functors(alpha.source, H), compose_functors(alpha.target, H),
                             {x: H.mor(alpha[x]) for x in alpha.source.source.objects})


def whisker_left(K: FinFunctor, alpha: NatTransformation) -> NatTransformation:
    """``alpha K``: precompose with a functor."""
    return NatTransformation(compose_functors(K, alpha.source), compose_functors(K, alpha.target),
                             {x: alpha[K.obj(x)] for x in K.source.objects})


def enumerate_nat_transformations(F: FinFunctor, G: FinFunctor,
                                  guard: int | None = None) -> list[NatTransformation]:
    C, D = F.source, F.target
    choices = [D.hom(F.obj(x), G.obj(x)) for x in C.objects]
    _guard.check(f"natural transformations {F.name or '?'} => {G.name or '?'}",
                 math.prod(len(c) for c in choices), guard)
    out = []
    for combo in itertools.product(*choices):
        alpha = NatTransformation(F, G, dict(zip(C.objects, combo)))
        if all(D.compose(G.mor(m), alpha[s]) == D.compose(alpha[t], F.mor(m)) for m, s, t in C.morphisms):
            out.append(alpha)
    return out


def invertible(C: FinCategory, m: str) -> str | None:
    """An inverse of ``m`` if one exists."""
    s, t = C.src(m), C.tgt(m)
    for n in C.hom(t, s):
        if C.compose(n, m) == C.id(s) and C.compose(m, n) == C.id(t):
            return n
    return None


def isomorphic_objects(C: FinCategory, a: str, b: str) -> str | None:
    for m in C.hom(a, b):
        if invertible(C, m) is not None:
            return m
    return None


def nat_is_iso(alpha: NatTransformation) -> bool:
    D = alpha.source.target
    return all(invertible(D, alpha[x]) is not None for x in alpha.source.source.objects)


# -- functor enumeration ---------------------------------------------------------

def _functor_space(C: FinCategory, D: FinCategory) -> int:
    nonid = [(m, s, t) for m, s, t in C.morphisms if not C.is_identity(m)]
    total = 0
    for combo in itertools.product(D.objects, repeat=len(C.objects)):
        omap = dict(zip(C.objects, combo))
        total += math.prod(len(D.hom(omap[s], omap[t])) for _m, s, t in nonid)
    return total


def enumerate_functors(C: FinCategory, D: FinCategory, guard: int | None = None) -> list[FinFunctor]:
    """Every functor ``C -> D``.

    Order: lexicographic in the object map (target objects in declared
    order), then in the images of the non-identity morphisms.
    """
    bound = _guard.get_guard(guard)
    n_maps = len(D.objects) ** len(C.objects)
    what = f"functors {C.name or '?'} -> {D.name or '?'}"
    _guard.check(what + " (object maps)", n_maps, bound)
    _guard.check(what, _functor_space(C, D), bound)
    nonid = [(m, s, t) for m, s, t in C.morphisms if not C.is_identity(m)]
    pairs_by_last: dict[str, list[tuple[str, str, str]]] = {m: [] for m, _s, _t in nonid}
    pos = {m: i for i, (m, _s, _t) in enumerate(nonid)}
    for (g, f), h in C.comp.items():
        relevant = [x for x in (g, f, h) if x in pos]
        last = max(relevant, key=pos.__getitem__) if relevant else None
        if last is not None:
            pairs_by_last[last].append((g, f, h))
    out = []
    prefix = f"{C.name}->{D.name}" if C.name and D.name else "F"
    for combo in itertools.product(D.objects, repeat=len(C.objects)):
        omap = dict(zip(C.objects, combo))
        mmap = {C.id(x): D.id(omap[x]) for x in C.objects}

        def ok(m: str) -> bool:
            for g, f, h in pairs_by_last[m]:
                if D.compose(mmap[g], mmap[f]) != mmap[h]:
                    return False
            return True

        def rec(i: int):
            if i == len(nonid):
                out.append(FinFunctor(C, D, omap, dict(mmap), f"{prefix}#{len(out)}"))
                return
            m, s, t = nonid[i]
            for n in D.hom(omap[s], omap[t]):
                mmap[m] = n
                if ok(m):
                    rec(i + 1)
            mmap.pop(m, None)

        rec(0)
    return out


def functor_from_maps(C: FinCategory, D: FinCategory, object_map: Mapping[str, str],
                      name: str = "") -> FinFunctor:
    """The unique functor with the given object map, when ``D`` is thin on the relevant homs."""
    mmap = {}
    for m, s, t in C.morphisms:
        homs = D.hom(object_map[s], object_map[t])
        if len(homs) != 1:
            raise StructuralError(f"object map does not determine the image of {m}")
        mmap[m] = homs[0]
    return FinFunctor(C, D, object_map, mmap, name)


# -- comma categories and components -----------------------------------------------

@dataclass(frozen=True)
class Comma:
    category: FinCategory
    left: FinFunctor
    right: FinFunctor


def comma(f: FinFunctor, g: FinFunctor, name: str = "") -> Comma:
    """The comma category ``f/g`` of ``f: I -> X`` and ``g: J -> X``.

    Objects ``(i, j, a)`` with ``a: f(i) -> g(j)``; morphisms pairs
    ``(p, q)`` with ``g(q) ∘ a = a' ∘ f(p)``.
    """
    if f.target != g.target:
        raise BoundaryError("comma: functors do not share a target")
    I, J, X = f.source, g.source, f.target
    objects = []
    for i in I.objects:
        for j in J.objects:
            for a in X.hom(f.obj(i), g.obj(j)):
                objects.append((i, j, a))
    oid = {o: fmt(*o) for o in objects}
    morphisms = []
    mdata = {}
    for (i, j, a) in objects:
        for (i2, j2, a2) in objects:
            for p in I.hom(i, i2):
                for q in J.hom(j, j2):
                    if X.compose(g.mor(q), a) == X.compose(a2, f.mor(p)):
                        s, t = oid[(i, j, a)], oid[(i2, j2, a2)]
                        mid = f"{fmt(p, q)}:{s}->{t}"
                        morphisms.append((mid, s, t))
                        mdata[mid] = (p, q, (i, j, a), (i2, j2, a2))
    ids = {oid[(i, j, a)]: f"{fmt(I.id(i), J.id(j))}:{oid[(i, j, a)]}->{oid[(i, j, a)]}"
           for (i, j, a) in objects}
    lookup = {(p, q, src, tgt): mid for mid, (p, q, src, tgt) in mdata.items()}
    comp = {}
    for m2, (p2, q2, s2, t2) in mdata.items():
        for m1, (p1, q1, s1, t1) in mdata.items():
            if t1 == s2:
                comp[(m2, m1)] = lookup[(I.compose(p2, p1), J.compose(q2, q1), s1, t2)]
    C = FinCategory([oid[o] for o in objects], morphisms, ids, comp,
                    name or (f"{f.name}/{g.name}" if f.name and g.name else ""))
    left = FinFunctor(C, I, {oid[o]: o[0] for o in objects}, {m: d[0] for m, d in mdata.items()})
    right = FinFunctor(C, J, {oid[o]: o[1] for o in objects}, {m: d[1] for m, d in mdata.items()})
    return Comma(C, left, right)


def connected_components(C: FinCategory) -> list[list[str]]:
    """Objects partitioned by zig-zag connectivity, in object order."""
    ds = DisjointSet(C.objects)
    for _m, s, t in C.morphisms:
        ds.merge(s, t)
    order = {x: k for k, x in enumerate(C.objects)}
    classes = [sorted(cls, key=order.__getitem__) for cls in ds.subsets()]
    return sorted(classes, key=lambda cls: order[cls[0]])


# -- (co)limits in a finite category -----------------------------------------------

@dataclass(frozen=True)
class Cone:
    """A (co)cone: ``components[i]`` is a morphism between ``d(i)`` and ``apex``."""

    apex: str
    components: Mapping[str, str]


def cocones(X: FinCategory, d: FinFunctor, apex: str) -> list[dict[str, str]]:
    I = d.source
    choices = [X.hom(d.obj(i), apex) for i in I.objects]
    out = []
    for combo in itertools.product(*choices):
        c = dict(zip(I.objects, combo))
        if all(X.compose(c[t], d.mor(m)) == c[s] for m, s, t in I.morphisms):
            out.append(c)
    return out


def colimit_in_cat(X: FinCategory, d: FinFunctor, guard: int | None = None) -> Cone | None:
    """A colimiting cocone of ``d: I -> X`` or ``None``.

    Tie-break: first apex in object order, then the first universal
    component assignment in hom order.
    """
    if d.target != X:
        raise BoundaryError("diagram does not land in the given category")
    I = d.source
    size = sum(math.prod(len(X.hom(d.obj(i), x)) for i in I.objects) for x in X.objects)
    _guard.check("cocone enumeration", size, guard)
    all_cocones = {x: cocones(X, d, x) for x in X.objects}
    for x in X.objects:
        for c in all_cocones[x]:
            universal = True
            for y in X.objects:
                for c2 in all_cocones[y]:
                    n = sum(1 for m in X.hom(x, y)
                            if all(X.compose(m, c[i]) == c2[i] for i in I.objects))
                    if n != 1:
                        universal = False
                        break
                if not universal:
                    break
            if universal:
                return Cone(x, c)
    return None


def limit_in_cat(X: FinCategory, d: FinFunctor, guard: int | None = None) -> Cone | None:
    """Dual of :func:`colimit_in_cat`, computed in the opposite category."""
    res = colimit_in_cat(opposite(X), opposite_functor(d), guard)
    return res


# -- diagrams of finite sets ---------------------------------------------------------

@dataclass
class SetDiagram:
    """A functor from ``shape`` to finite sets."""

    shape: FinCategory
    sets: dict[str, tuple[str, ...]]
    actions: dict[str, dict[str, str]]

    def __post_init__(self):
        self.sets = {i: tuple(v) for i, v in self.sets.items()}
        if set(self.sets) != set(self.shape.objects):
            raise StructuralError("set diagram: sets not given for every object")
        for m, s, t in self.shape.morphisms:
            fn = self.actions.get(m)
            if fn is None:
                if self.shape.is_identity(m):
                    self.actions[m] = {x: x for x in self.sets[s]}
                    continue
                raise StructuralError(f"set diagram: no action for {m}")
            if set(fn) != set(self.sets[s]):
                raise StructuralError(f"set diagram: action of {m} is not total")
            if not set(fn.values()) <= set(self.sets[t]):
                raise StructuralError(f"set diagram: action of {m} leaves its target")

    def as_system(self) -> ActionSystem:
        return ActionSystem(dict(self.sets),
                            {m: (s, t, self.actions[m]) for m, s, t in self.shape.morphisms})


def validate_set_diagram(d: SetDiagram) -> list[Violation]:
    C = d.shape
    out = []
    for x in C.objects:
        if any(d.actions[C.id(x)][e] != e for e in d.sets[x]):
            out.append(Violation("action-identity", (x,)))
    for (g, f), h in C.comp.items():
        for e in d.sets[C.src(f)]:
            if d.actions[g][d.actions[f][e]] != d.actions[h][e]:
                out.append(Violation("action-composition", (g, f, e)))
                break
    return out


@dataclass(frozen=True)
class Quotient:
    """Canonical quotient of a disjoint union ``⨆ sets[i]``.

    Members are ``(index, element)`` pairs; each class is represented by its
    lexicographically least member.
    """

    elements: tuple[tuple[str, str], ...]
    classes: Mapping[tuple[str, str], tuple[tuple[str, str], ...]]
    cls: Mapping[tuple[str, str], tuple[str, str]]

    def __len__(self) -> int:
        return len(self.elements)


def quotient(members: Iterable[tuple[str, str]], relations: Iterable[tuple]) -> Quotient:
    members = list(members)
    ds = DisjointSet(members)
    for a, b in relations:
        ds.merge(a, b)
    classes = {}
    cls = {}
    for subset in ds.subsets():
        group = tuple(sorted(subset))
        rep = group[0]
        classes[rep] = group
        for m in group:
            cls[m] = rep
    return Quotient(tuple(sorted(classes)), classes, cls)


def set_colimit(d: SetDiagram) -> Quotient:
    members = [(i, x) for i in d.shape.objects for x in d.sets[i]]
    relations = [((s, x), (t, d.actions[m][x]))
                 for m, s, t in d.shape.morphisms for x in d.sets[s]]
    return quotient(members, relations)


def set_limit(d: SetDiagram, guard: int | None = None) -> list[tuple[str, ...]]:
    """Compatible families, as tuples in object order."""
    objs = d.shape.objects
    unit = ActionSystem({i: ("*",) for i in objs},
                        {m: (s, t, {"*": "*"}) for m, s, t in d.shape.morphisms})
    maps = natural_maps(unit, d.as_system(), what="set limit", guard=guard)
    return [tuple(phi[(i, "*")] for i in objs) for phi in maps]


# -- truncated simplicial sets ---------------------------------------------------------

@dataclass
class TruncSimpSet:
    """Levels ``X0..X3`` with faces ``faces[(n, i)]: X_n -> X_{n-1}`` and
    degeneracies ``degeneracies[(n, i)]: X_n -> X_{n+1}``."""

    levels: list[tuple[str, ...]]
    faces: dict[tuple[int, int], dict[str, str]]
    degeneracies: dict[tuple[int, int], dict[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        self.levels = [tuple(x) for x in self.levels]
        if len(self.levels) != 4:
            raise StructuralError("a 3-truncated simplicial set needs exactly four levels")
        for n in (1, 2, 3):
            for i in range(n + 1):
                if (n, i) not in self.faces:
                    raise StructuralError(f"missing face map d{i} on level {n}")

    def face(self, n: int, i: int, x: str) -> str:
        return self.faces[(n, i)][x]


def nerve(C: FinCategory) -> TruncSimpSet:
    """The nerve of ``C`` truncated at level 3.

    An n-simplex is a chain ``x0 -f1-> x1 -> ... -fn-> xn``; identifiers are
    ``fmt(f1, ..., fn)`` and objects for level 0.
    """
    chains: list[list[tuple[str, ...]]] = [[(x,) for x in C.objects], [(m,) for m in C.morphism_ids]]
    for _n in (2, 3):
        nxt = []
        for ch in chains[-1]:
            for m in C.morphism_ids:
                if C.src(m) == C.tgt(ch[-1]):
                    nxt.append(ch + (m,))
        chains.append(nxt)

    def name(n: int, ch: tuple[str, ...]) -> str:
        return ch[0] if n == 0 else fmt(*ch)

    def verts(ch: tuple[str, ...]) -> list[str]:
        return [C.src(ch[0])] + [C.tgt(f) for f in ch]

    def d(n: int, i: int, ch: tuple[str, ...]) -> tuple[str, ...]:
        if n == 1:
            return (C.tgt(ch[0]),) if i == 0 else (C.src(ch[0]),)
        if i == 0:
            return ch[1:]
        if i == n:
            return ch[:-1]
        return ch[:i - 1] + (C.compose(ch[i], ch[i - 1]),) + ch[i + 1:]

    def s(n: int, i: int, ch: tuple[str, ...]) -> tuple[str, ...]:
        if n == 0:
            return (C.id(ch[0]),)
        v = verts(ch)
        return ch[:i] + (C.id(v[i]),) + ch[i:]

    levels = [tuple(name(n, ch) for ch in chains[n]) for n in range(4)]
    faces = {(n, i): {name(n, ch): name(n - 1, d(n, i, ch)) for ch in chains[n]}
             for n in (1, 2, 3) for i in range(n + 1)}
    degens = {(n, i): {name(n, ch): name(n + 1, s(n, i, ch)) for ch in chains[n]}
              for n in (0, 1, 2) for i in range(n + 1)}
    return TruncSimpSet(levels, faces, degens)


def validate_simplicial(S: TruncSimpSet) -> list[Violation]:
    """Simplicial identities among all represented composites."""
    out = []
    F, Dg = S.faces, S.degeneracies
    for n in (2, 3):
        for j in range(n + 1):
            for i in range(j):
                for x in S.levels[n]:
                    if F[(n - 1, i)][F[(n, j)][x]] != F[(n - 1, j - 1)][F[(n, i)][x]]:
                        out.append(Violation("face-face", (n, i, j, x)))
    for n in (0, 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if (n, j) in Dg and (n + 1, i) in Dg and (n, i) in Dg and (n + 1, j + 1) in Dg:
                    for x in S.levels[n]:
                        if Dg[(n + 1, i)].get(Dg[(n, j)].get(x)) != Dg[(n + 1, j + 1)].get(Dg[(n, i)].get(x)):
                            out.append(Violation("degeneracy-degeneracy", (n, i, j, x)))
    for n in (0, 1, 2):
        for j in range(n + 1):
            if (n, j) not in Dg:
                continue
            for i in range(n + 2):
                for x in S.levels[n]:
                    y = Dg[(n, j)].get(x)
                    if y is None:
                        out.append(Violation("degeneracy-partial", (n, j, x)))
                        continue
                    lhs = F[(n + 1, i)][y]
                    if i < j:
                        rhs = Dg.get((n - 1, j - 1), {}).get(F[(n, i)][x]) if n > 0 else None
                    elif i in (j, j + 1):
                        rhs = x
                    else:
                        rhs = Dg.get((n - 1, j), {}).get(F[(n, i - 1)][x]) if n > 0 else None
                    if rhs is not None and lhs != rhs:
                        out.append(Violation("face-degeneracy", (n, i, j, x)))
    return out


@dataclass(frozen=True)
class SegalResult:
    ok: bool
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def segal_check(S: TruncSimpSet) -> SegalResult:
    """Are the Segal maps ``X2 -> X1 ×_X0 X1`` and ``X3 -> X1 ×_X0 X1 ×_X0 X1`` bijective?

    The witness names the level, the failure kind and the offending element
    (a tuple of edges for non-surjectivity, the colliding simplices for
    non-injectivity).
    """
    X0, X1, X2, X3 = S.levels
    d = S.face
    src = {e: d(1, 1, e) for e in X1}
    tgt = {e: d(1, 0, e) for e in X1}

    pairs = [(a, b) for a in X1 for b in X1 if tgt[a] == src[b]]
    seen: dict[tuple, str] = {}
    for s in X2:
        key = (d(2, 2, s), d(2, 0, s))
        if key in seen:
            return SegalResult(False, (2, "not-injective", seen[key], s))
        seen[key] = s
    for p in pairs:
        if p not in seen:
            return SegalResult(False, (2, "not-surjective", p))

    triples = [(a, b, c) for a, b in pairs for c in X1 if tgt[b] == src[c]]
    seen3: dict[tuple, str] = {}
    for t in X3:
        key = (d(1 + 1, 2, d(3, 3, t)), d(2, 0, d(3, 3, t)), d(2, 0, d(3, 0, t)))
        if key in seen3:
            return SegalResult(False, (3, "not-injective", seen3[key], t))
        seen3[key] = t
    for tr in triples:
        if tr not in seen3:
            return SegalResult(False, (3, "not-surjective", tr))
    return SegalResult(True)


def gaunt_check(C: FinCategory) -> bool:
    """Every invertible morphism is an identity."""
    return all(C.is_identity(m) or invertible(C, m) is None for m in C.morphism_ids)
