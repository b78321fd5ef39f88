"""Equipments: a common interface and two finite instances.

``CatEquipment`` has finite categories as objects, functors as arrows,
profunctors as proarrows and natural transformations of profunctors as
cells.  ``SpanEquipment`` has finite sets, functions, spans and maps of
spans.

Both are weak in the horizontal direction: composing with an identity
proarrow or reassociating changes the proarrow only up to a canonical
isomorphism.  Each instance therefore provides ``coherent_equal``, which
compares two cells after transporting their boundaries to a normal form
(flatten nested composites, absorb identity factors).
"""

from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import guard as _guard
from . import profunctor as pf
from .dblcat import Boundary, DoubleCategory, from_squares
from .errors import BoundaryError, StructuralError, UnsupportedError
from .fincat import (
    FinCategory,
    FinFunctor,
    compose_functors,
    enumerate_functors,
    fmt,
    identity_functor,
    terminal,
    to_terminal,
)
from .profunctor import ProfCell, Profunctor


class EquipmentInstance(ABC):
    """Uniform access to the arrows, proarrows and cells of an equipment.

    Cells are squares with a top and bottom proarrow and left and right
    arrows.  ``hcomp(s, t)`` places ``t`` to the right of ``s``;
    ``vcomp(s, t)`` places ``t`` below ``s``.
    """

    name = "?"
    pointed = True
    strongly_pointed = False

    # objects and arrows
    @abstractmethod
    def object_name(self, x) -> str: ...

    @abstractmethod
    def identity_arrow(self, x): ...

    @abstractmethod
    def compose_arrows(self, f, g):
        """``f`` then ``g``."""

    @abstractmethod
    def arrow_ends(self, f) -> tuple: ...

    @abstractmethod
    def arrows(self, x, y, guard: int | None = None) -> list: ...

    @abstractmethod
    def arrow_key(self, f): ...

    # proarrows
    @abstractmethod
    def identity_proarrow(self, x): ...

    @abstractmethod
    def proarrow_ends(self, P) -> tuple: ...

    @abstractmethod
    def companion(self, f): ...

    @abstractmethod
    def conjoint(self, f): ...

    @abstractmethod
    def compose(self, G, F):
        """``G`` after ``F``."""

    @abstractmethod
    def proarrow_key(self, P): ...

    # cells
    @abstractmethod
    def boundary(self, cell) -> tuple:
        """``(top, bottom, left, right)``."""

    @abstractmethod
    def identity_cell(self, P): ...

    @abstractmethod
    def hid(self, f):
        """Horizontal identity cell of an arrow: identity proarrows top and bottom."""

    @abstractmethod
    def hcomp(self, s, t): ...

    @abstractmethod
    def vcomp(self, s, t): ...

    @abstractmethod
    def cell_key(self, cell): ...

    @abstractmethod
    def enumerate_cells(self, F, G, f, g, guard: int | None = None) -> list: ...

    @abstractmethod
    def is_invertible(self, cell) -> bool: ...

    @abstractmethod
    def invert(self, cell): ...

    @abstractmethod
    def iso_proarrows(self, P, Q):
        """An invertible globular cell ``P => Q`` or ``None``."""

    # fillers
    @abstractmethod
    def restrict(self, G, f, g):
        """Cartesian cell ``<g|G|f> => G``."""

    @abstractmethod
    def canonical_restriction(self, G, f, g):
        """The reference restriction, never overridden by test doubles."""

    @abstractmethod
    def cocartesian_filler(self, F, f, g):
        """Cocartesian cell ``F => <g|F|f>_!``."""

    @abstractmethod
    def is_cartesian(self, cell) -> bool: ...

    @abstractmethod
    def interchange_forward(self, filler, psi): ...

    @abstractmethod
    def interchange_backward(self, filler, phi, G): ...

    @abstractmethod
    def yoneda_comparison(self, T, f, G, g):
        """Canonical globular cell ``conj(g) ∘ G ∘ comp(f) => <g|G|f>``."""

    @abstractmethod
    def coherent_equal(self, s, t) -> bool: ...

    # companion and conjoint squares
    @abstractmethod
    def companion_entry(self, f): ...

    @abstractmethod
    def companion_exit(self, f): ...

    @abstractmethod
    def conjoint_entry(self, f): ...

    @abstractmethod
    def conjoint_exit(self, f): ...

    # pointing
    def terminal(self):
        raise UnsupportedError(f"{self.name} is not pointed")

    def to_terminal(self, x):
        raise UnsupportedError(f"{self.name} is not pointed")

    def unit_cell(self, f):
        """``hom => conj(f) ∘ comp(f)``: companion entry beside conjoint entry."""
        return self.hcomp(self.companion_entry(f), self.conjoint_entry(f))

    def counit_cell(self, f):
        """``comp(f) ∘ conj(f) => hom``: conjoint exit beside companion exit."""
        return self.hcomp(self.conjoint_exit(f), self.companion_exit(f))

    def truncate(self, objects: Sequence, guard: int | None = None) -> DoubleCategory:
        return truncate_instance(self, objects, guard)


def paste(inst: EquipmentInstance, rows: Sequence[Sequence]):
    """Compose each row left to right, then stack the rows top to bottom."""
    acc = None
    for row in rows:
        r = row[0]
        for c in row[1:]:
            r = inst.hcomp(r, c)
        acc = r if acc is None else inst.vcomp(acc, r)
    return acc


# -- the Cat instance ----------------------------------------------------------------

def _atoms(P: Profunctor) -> list[Profunctor]:
    if P.coend is None:
        return [P]
    return _atoms(P.coend.inner) + _atoms(P.coend.outer)


def _flat(P: Profunctor, key, x) -> list[tuple]:
    if P.coend is None:
        return [(key, x)]
    e, c = key
    d, y, z = P.coend.rep[key][x]
    return _flat(P.coend.inner, (d, c), z) + _flat(P.coend.outer, (e, d), y)


def _is_hom(P: Profunctor) -> bool:
    return P.tag is not None and P.tag[0] == "hom"


def _matches(P: Profunctor, factors: Sequence[Profunctor]) -> int | None:
    """Split point such that ``P`` is the composite of ``factors`` (innermost first)."""
    if len(factors) == 1:
        return 0 if P == factors[0] else None
    if P.coend is None:
        return None
    for k in range(1, len(factors)):
        if _matches(P.coend.inner, factors[:k]) is not None and _matches(P.coend.outer, factors[k:]) is not None:
            return k
    return None


def _flat_to(P: Profunctor, factors: Sequence[Profunctor], key, x) -> list[tuple]:
    if len(factors) == 1:
        return [(key, x)]
    k = _matches(P, factors)
    if k is None:
        raise BoundaryError("proarrow is not a composite of the expected factors")
    e, c = key
    d, y, z = P.coend.rep[key][x]
    return _flat_to(P.coend.inner, factors[:k], (d, c), z) + _flat_to(P.coend.outer, factors[k:], (e, d), y)


class CatEquipment(EquipmentInstance):
    name = "Cat"
    pointed = True
    strongly_pointed = True

    def __init__(self):
        self._normal_cache: dict[tuple, Profunctor] = {}

    # objects and arrows
    def object_name(self, x: FinCategory) -> str:
        return x.name

    def identity_arrow(self, x: FinCategory) -> FinFunctor:
        return identity_functor(x)

    def compose_arrows(self, f: FinFunctor, g: FinFunctor) -> FinFunctor:
        return compose_functors(f, g)

    def arrow_ends(self, f: FinFunctor) -> tuple:
        return f.source, f.target

    def arrows(self, x, y, guard=None) -> list[FinFunctor]:
        return enumerate_functors(x, y, guard)

    def arrow_key(self, f: FinFunctor):
        return f.key

    # proarrows
    def identity_proarrow(self, x: FinCategory) -> Profunctor:
        return pf.hom_profunctor(x)

    def proarrow_ends(self, P: Profunctor) -> tuple:
        return P.source, P.target

    def companion(self, f):
        return pf.companion_of(f)

    def conjoint(self, f):
        return pf.conjoint_of(f)

    def compose(self, G, F):
        return pf.compose_prof(G, F)

    def proarrow_key(self, P):
        return P.key

    # cells
    def boundary(self, cell: ProfCell) -> tuple:
        return cell.top, cell.bottom, cell.left, cell.right

    def identity_cell(self, P):
        return pf.identity_cell(P)

    def hid(self, f: FinFunctor) -> ProfCell:
        A, B = f.source, f.target
        top, bottom = pf.hom_profunctor(A), pf.hom_profunctor(B)
        comps = {k: {h: f.mor(h) for h in xs} for k, xs in top.elements.items()}
        return ProfCell(top, bottom, f, f, comps)

    def hcomp(self, s, t):
        return pf.hcompose_cells(t, s)

    def vcomp(self, s, t):
        return pf.vcompose_cells(s, t)

    def cell_key(self, cell):
        return cell.key

    def enumerate_cells(self, F, G, f, g, guard=None):
        return pf.enumerate_cells(F, G, f, g, guard)

    def is_invertible(self, cell) -> bool:
        return (cell.left == identity_functor(cell.left.source)
                and cell.right == identity_functor(cell.right.source) and pf.is_iso_cell(cell))

    def invert(self, cell):
        return pf.invert_cell(cell)

    def iso_proarrows(self, P, Q):
        if P.source != Q.source or P.target != Q.target:
            return None
        return pf.iso_prof(P, Q)

    # fillers
    def restrict(self, G, f, g):
        return self.canonical_restriction(G, f, g)

    def canonical_restriction(self, G, f, g):
        return pf.restrict(G, f, g)

    def cocartesian_filler(self, F, f, g):
        return pf.cocartesian_filler(F, f, g)

    def is_cartesian(self, cell) -> bool:
        return pf.is_cartesian_cell(cell)

    def interchange_forward(self, filler, psi):
        return pf.interchange_forward(filler, psi)

    def interchange_backward(self, filler, phi, G):
        return pf.interchange_backward(filler, phi, G)

    def yoneda_comparison(self, T, f, G, g):
        factors = [self.companion(f), G, self.conjoint(g)]
        R = self.canonical_restriction(G, f, g).top
        comps = {}
        for (b, a), xs in T.elements.items():
            fn = {}
            for x in xs:
                (_k1, h), (_k2, y), (_k3, k) = _flat_to(T, factors, (b, a), x)
                d = G.target.tgt(k)
                y1 = G.left(h, d, y)
                fn[x] = G.right(k, f.obj(a), y1)
            comps[(b, a)] = fn
        return pf.morphism(T, R, comps)

    # normal forms
    def _normal(self, atoms: tuple[Profunctor, ...]) -> Profunctor:
        P = self._normal_cache.get(atoms)
        if P is None:
            P = atoms[0] if len(atoms) == 1 else pf.compose_prof(atoms[-1], self._normal(atoms[:-1]))
            self._normal_cache[atoms] = P
        return P

    def normalize(self, P: Profunctor):
        """Normal form of ``P`` and the canonical map into it.

        Returns ``(atoms, map)`` with ``map[(key, x)] = (key', cls)``.
        """
        atoms = _atoms(P)
        kept = tuple(a for a in atoms if not _is_hom(a)) or (atoms[0],)
        N = self._normal(kept)
        out = {}
        for key, xs in P.elements.items():
            for x in xs:
                flat = _flat(P, key, x)
                items: list[list] = []
                pending = None
                for atom, ((d, c), el) in zip(atoms, flat):
                    if _is_hom(atom):
                        if items:
                            a2, (_d2, c2), y = items[-1]
                            items[-1] = [a2, (d, c2), a2.right(el, c2, y)]
                        elif pending is None:
                            pending = (el, c)
                        else:
                            pending = (atom.source.compose(pending[0], el), pending[1])
                        continue
                    if pending is not None:
                        el, c = atom.left(pending[0], d, el), pending[1]
                        pending = None
                    items.append([atom, (d, c), el])
                if not items:
                    out[(key, x)] = ((flat[-1][0][0], pending[1]), pending[0])
                    continue
                cls = items[0][2]
                c_first = items[0][1][1]
                for j in range(1, len(items)):
                    Nj = self._normal(kept[:j + 1])
                    dj = items[j][1][0]
                    cls = Nj.coend.cls(dj, c_first, items[j - 1][1][0], items[j][2], cls)
                out[(key, x)] = ((items[-1][1][0], c_first), cls)
        return kept, N, out

    def coherent_equal(self, s: ProfCell, t: ProfCell) -> bool:
        if s.left != t.left or s.right != t.right:
            return False
        ka, _Na, na = self.normalize(s.top)
        kb, _Nb, nb = self.normalize(t.top)
        la, _Ma, ma = self.normalize(s.bottom)
        lb, _Mb, mb = self.normalize(t.bottom)
        if ka != kb or la != lb:
            return False

        def table(cell, n, m):
            f, g = cell.left, cell.right
            out = {}
            for (b, a), fn in cell.comps.items():
                for x, y in fn.items():
                    src = n[((b, a), x)]
                    tgt = m[((g.obj(b), f.obj(a)), y)]
                    if out.setdefault(src, tgt) != tgt:
                        return None
            return out

        ta, tb = table(s, na, ma), table(t, nb, mb)
        return ta is not None and ta == tb

    # companion and conjoint squares
    def companion_entry(self, f):
        A = f.source
        top = pf.hom_profunctor(A)
        F = pf.companion_of(f)
        comps = {k: {h: f.mor(h) for h in xs} for k, xs in top.elements.items()}
        return ProfCell(top, F, identity_functor(A), f, comps)

    def companion_exit(self, f):
        B = f.target
        F = pf.companion_of(f)
        bottom = pf.hom_profunctor(B)
        comps = {k: {h: h for h in xs} for k, xs in F.elements.items()}
        return ProfCell(F, bottom, f, identity_functor(B), comps)

    def conjoint_entry(self, f):
        A = f.source
        top = pf.hom_profunctor(A)
        G = pf.conjoint_of(f)
        comps = {k: {h: f.mor(h) for h in xs} for k, xs in top.elements.items()}
        return ProfCell(top, G, f, identity_functor(A), comps)

    def conjoint_exit(self, f):
        B = f.target
        G = pf.conjoint_of(f)
        bottom = pf.hom_profunctor(B)
        comps = {k: {h: h for h in xs} for k, xs in G.elements.items()}
        return ProfCell(G, bottom, identity_functor(B), f, comps)

    def terminal(self):
        return terminal()

    def to_terminal(self, x):
        return to_terminal(x)


class BrokenRestrictionCat(CatEquipment):
    """Test double: restriction returns the unquotiented sum of triples."""

    name = "Cat(broken)"

    def restrict(self, G, f, g):
        A, B = f.source, g.source
        C, D = G.source, G.target
        decode: dict[str, tuple] = {}
        els: dict[tuple[str, str], list[str]] = {}
        for b in B.objects:
            for a in A.objects:
                xs = []
                for c in C.objects:
                    for d in D.objects:
                        for h in C.hom(c, f.obj(a)):
                            for y in G(d, c):
                                for k in D.hom(g.obj(b), d):
                                    x = fmt(k, d, y, c, h)
                                    xs.append(x)
                                    decode[x] = (h, c, y, d, k)
                els[(b, a)] = xs
        comps = {}
        for (b, a), xs in els.items():
            fn = {}
            for x in xs:
                h, _c, y, d, k = decode[x]
                fn[x] = G.right(k, f.obj(a), G.left(h, d, y))
            comps[(b, a)] = fn

        def left(m, b, a, x):
            h, c, y, d, k = decode[x]
            return fmt(k, d, y, c, C.compose(f.mor(m), h))

        def right(m, b, a, x):
            h, c, y, d, k = decode[x]
            return fmt(D.compose(k, g.mor(m)), d, y, c, h)

        R = Profunctor.build(A, B, lambda b, a: els[(b, a)], left, right, "unquotiented")
        return ProfCell(R, G, f, g, comps)


# -- the Span instance ----------------------------------------------------------------

@dataclass(frozen=True)
class FinSet:
    name: str
    elements: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise StructuralError(f"set {self.name!r} has repeated elements")

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Function:
    source: FinSet
    target: FinSet
    mapping: Mapping[str, str]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))
        if set(self.mapping) != set(self.source.elements):
            raise StructuralError(f"function {self.name!r} is not total")
        if not set(self.mapping.values()) <= set(self.target.elements):
            raise StructuralError(f"function {self.name!r} leaves its target")

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    @property
    def key(self) -> tuple:
        return (self.source, self.target, tuple(self.mapping[x] for x in self.source.elements))

    def __eq__(self, other) -> bool:
        return isinstance(other, Function) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def identity_function(A: FinSet) -> Function:
    return Function(A, A, {x: x for x in A.elements}, f"id_{A.name}")


def compose_functions(f: Function, g: Function) -> Function:
    """``f`` then ``g``."""
    if f.target != g.source:
        raise BoundaryError("functions are not composable")
    return Function(f.source, g.target, {x: g(f(x)) for x in f.source.elements},
                    f"{g.name}.{f.name}" if f.name and g.name else "")


def enumerate_functions(A: FinSet, B: FinSet, guard: int | None = None) -> list[Function]:
    _guard.check(f"functions {A.name} -> {B.name}", len(B) ** len(A), guard)
    return [Function(A, B, dict(zip(A.elements, img)), f"{A.name}->{B.name}#{i}")
            for i, img in enumerate(itertools.product(B.elements, repeat=len(A)))]


class Span:
    """A proarrow ``A -> B`` drawn ``A <- X -> B``.

    Composites remember their factors in ``parts = (outer, inner, pairs)``
    where ``pairs[z] = (x_inner, y_outer)``.
    """

    __slots__ = ("source", "target", "apex", "left", "right", "name", "parts", "tag")

    def __init__(self, source: FinSet, target: FinSet, apex: Iterable[str],
                 left: Mapping[str, str], right: Mapping[str, str], name: str = "",
                 parts=None, tag=None):
        self.source = source
        self.target = target
        self.apex = tuple(apex)
        self.left = dict(left)
        self.right = dict(right)
        self.name = name
        self.parts = parts
        self.tag = tag
        if len(set(self.apex)) != len(self.apex):
            raise StructuralError(f"span {name!r} has repeated apex elements")
        if set(self.left) != set(self.apex) or set(self.right) != set(self.apex):
            raise StructuralError(f"span {name!r}: legs are not total")
        if not set(self.left.values()) <= set(source.elements):
            raise StructuralError(f"span {name!r}: left leg leaves the source")
        if not set(self.right.values()) <= set(target.elements):
            raise StructuralError(f"span {name!r}: right leg leaves the target")

    @property
    def key(self) -> tuple:
        return (self.source, self.target, self.apex,
                tuple(self.left[x] for x in self.apex), tuple(self.right[x] for x in self.apex))

    def __eq__(self, other) -> bool:
        return isinstance(other, Span) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"<Span {self.name or '?'}: {self.source.name} <- {len(self.apex)} -> {self.target.name}>"

    def fiber(self, a: str, b: str) -> list[str]:
        return [x for x in self.apex if self.left[x] == a and self.right[x] == b]


@dataclass(frozen=True)
class SpanCell:
    top: Span
    bottom: Span
    left: Function
    right: Function
    apex_map: Mapping[str, str]

    def __post_init__(self):
        F, G, f, g = self.top, self.bottom, self.left, self.right
        if f.source != F.source or g.source != F.target or f.target != G.source or g.target != G.target:
            raise BoundaryError("span cell: verticals do not match the spans")
        if set(self.apex_map) != set(F.apex) or not set(self.apex_map.values()) <= set(G.apex):
            raise StructuralError("span cell: apex map is not a total map between apexes")
        for x in F.apex:
            y = self.apex_map[x]
            if G.left[y] != f(F.left[x]) or G.right[y] != g(F.right[x]):
                raise BoundaryError(f"span cell: leg square fails at {x}")

    @property
    def key(self) -> tuple:
        return (self.top.key, self.bottom.key, self.left.key, self.right.key,
                tuple(self.apex_map[x] for x in self.top.apex))

    def __eq__(self, other) -> bool:
        return isinstance(other, SpanCell) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def compose_spans(G: Span, F: Span, name: str = "") -> Span:
    """``G ∘ F``: apex the pullback ``{(x, y) : right(x) = left(y)}``."""
    if F.target != G.source:
        raise BoundaryError("spans are not composable")
    pairs = {}
    for x in F.apex:
        for y in G.apex:
            if F.right[x] == G.left[y]:
                pairs[fmt(x, y)] = (x, y)
    return Span(F.source, G.target, pairs,
                {z: F.left[x] for z, (x, _y) in pairs.items()},
                {z: G.right[y] for z, (_x, y) in pairs.items()},
                name or (f"{G.name}.{F.name}" if F.name and G.name else ""), (G, F, pairs))


def _span_atoms(S: Span) -> list[Span]:
    if S.parts is None:
        return [S]
    G, F, _ = S.parts
    return _span_atoms(F) + _span_atoms(G)


def _span_flat(S: Span, z: str) -> list[str]:
    if S.parts is None:
        return [z]
    G, F, pairs = S.parts
    x, y = pairs[z]
    return _span_flat(F, x) + _span_flat(G, y)


def _span_flat_to(S: Span, factors: Sequence[Span], z: str) -> list[str]:
    if len(factors) == 1:
        if S != factors[0]:
            raise BoundaryError("span is not a composite of the expected factors")
        return [z]
    G, F, pairs = S.parts
    for k in range(1, len(factors)):
        try:
            x, y = pairs[z]
            return _span_flat_to(F, factors[:k], x) + _span_flat_to(G, factors[k:], y)
        except (BoundaryError, TypeError):
            continue
    raise BoundaryError("span is not a composite of the expected factors")


class SpanEquipment(EquipmentInstance):
    name = "Span"
    pointed = True
    strongly_pointed = False

    def object_name(self, x: FinSet) -> str:
        return x.name

    def identity_arrow(self, x):
        return identity_function(x)

    def compose_arrows(self, f, g):
        return compose_functions(f, g)

    def arrow_ends(self, f):
        return f.source, f.target

    def arrows(self, x, y, guard=None):
        return enumerate_functions(x, y, guard)

    def arrow_key(self, f):
        return f.key

    def identity_proarrow(self, x: FinSet) -> Span:
        ids = {a: a for a in x.elements}
        return Span(x, x, x.elements, ids, ids, f"1_{x.name}", tag=("hom",))

    def proarrow_ends(self, P):
        return P.source, P.target

    def companion(self, f: Function) -> Span:
        A = f.source
        return Span(A, f.target, A.elements, {a: a for a in A.elements}, f.mapping,
                    f"comp({f.name})", tag=("comp", f))

    def conjoint(self, f: Function) -> Span:
        A = f.source
        return Span(f.target, A, A.elements, f.mapping, {a: a for a in A.elements},
                    f"conj({f.name})", tag=("conj", f))

    def compose(self, G, F):
        return compose_spans(G, F)

    def proarrow_key(self, P):
        return P.key

    def boundary(self, cell):
        return cell.top, cell.bottom, cell.left, cell.right

    def identity_cell(self, P):
        return SpanCell(P, P, identity_function(P.source), identity_function(P.target),
                        {x: x for x in P.apex})

    def hid(self, f):
        top, bottom = self.identity_proarrow(f.source), self.identity_proarrow(f.target)
        return SpanCell(top, bottom, f, f, dict(f.mapping))

    def hcomp(self, s: SpanCell, t: SpanCell) -> SpanCell:
        if s.right != t.left:
            raise BoundaryError("span cells do not share a vertical")
        top = compose_spans(t.top, s.top)
        bottom = compose_spans(t.bottom, s.bottom)
        _, _, tp = top.parts
        amap = {z: fmt(s.apex_map[x], t.apex_map[y]) for z, (x, y) in tp.items()}
        return SpanCell(top, bottom, s.left, t.right, amap)

    def vcomp(self, s: SpanCell, t: SpanCell) -> SpanCell:
        if s.bottom != t.top:
            raise BoundaryError("span cells do not share a horizontal edge")
        return SpanCell(s.top, t.bottom, compose_functions(s.left, t.left),
                        compose_functions(s.right, t.right),
                        {x: t.apex_map[y] for x, y in s.apex_map.items()})

    def cell_key(self, cell):
        return cell.key

    def enumerate_cells(self, F, G, f, g, guard=None):
        cands = []
        for x in F.apex:
            cands.append(G.fiber(f(F.left[x]), g(F.right[x])))
        _guard.check("span cells", math.prod(len(c) for c in cands), guard)
        return [SpanCell(F, G, f, g, dict(zip(F.apex, combo))) for combo in itertools.product(*cands)]

    def is_invertible(self, cell) -> bool:
        return (cell.left == identity_function(cell.left.source)
                and cell.right == identity_function(cell.right.source)
                and len(set(cell.apex_map.values())) == len(cell.top.apex) == len(cell.bottom.apex))

    def invert(self, cell):
        return SpanCell(cell.bottom, cell.top, identity_function(cell.left.source),
                        identity_function(cell.right.source),
                        {y: x for x, y in cell.apex_map.items()})

    def iso_proarrows(self, P, Q):
        if P.source != Q.source or P.target != Q.target:
            return None
        amap = {}
        for a in P.source.elements:
            for b in P.target.elements:
                xs, ys = P.fiber(a, b), Q.fiber(a, b)
                if len(xs) != len(ys):
                    return None
                amap.update(zip(xs, ys))
        return SpanCell(P, Q, identity_function(P.source), identity_function(P.target), amap)

    def restrict(self, G: Span, f: Function, g: Function) -> SpanCell:
        return self.canonical_restriction(G, f, g)

    def canonical_restriction(self, G: Span, f: Function, g: Function) -> SpanCell:
        A, B = f.source, g.source
        apex = {}
        for a in A.elements:
            for y in G.apex:
                for b in B.elements:
                    if f(a) == G.left[y] and g(b) == G.right[y]:
                        apex[fmt(a, y, b)] = (a, y, b)
        R = Span(A, B, apex, {z: t[0] for z, t in apex.items()}, {z: t[2] for z, t in apex.items()},
                 f"<{g.name}|{G.name}|{f.name}>")
        return SpanCell(R, G, f, g, {z: t[1] for z, t in apex.items()})

    def cocartesian_filler(self, F: Span, f: Function, g: Function) -> SpanCell:
        inner = compose_spans(F, self.conjoint(f))
        outer = compose_spans(self.companion(g), inner)
        amap = {x: fmt(fmt(F.left[x], x), F.right[x]) for x in F.apex}
        return SpanCell(F, outer, f, g, amap)

    def is_cartesian(self, cell: SpanCell) -> bool:
        R = self.canonical_restriction(cell.bottom, cell.left, cell.right).top
        images = [fmt(cell.top.left[x], cell.apex_map[x], cell.top.right[x]) for x in cell.top.apex]
        return len(set(images)) == len(images) == len(R.apex)

    def interchange_forward(self, filler, psi):
        F = filler.top
        R = self.canonical_restriction(psi.bottom, filler.left, filler.right).top
        amap = {x: fmt(F.left[x], psi.apex_map[filler.apex_map[x]], F.right[x]) for x in F.apex}
        return SpanCell(F, R, identity_function(F.source), identity_function(F.target), amap)

    def interchange_backward(self, filler, phi, G):
        outer = filler.bottom
        back = {z: x for x, z in filler.apex_map.items()}
        R = phi.bottom
        if R == G:
            # phi is already a cell F => G over (f, g)
            middle = {y: y for y in G.apex}
        else:
            middle = {r: y for r in R.apex for y in G.apex if fmt(R.left[r], y, R.right[r]) == r}
        amap = {z: middle[phi.apex_map[back[z]]] for z in outer.apex}
        return SpanCell(outer, G, identity_function(outer.source), identity_function(outer.target), amap)

    def yoneda_comparison(self, T, f, G, g):
        factors = [self.companion(f), G, self.conjoint(g)]
        R = self.canonical_restriction(G, f, g).top
        amap = {}
        for z in T.apex:
            a, y, b = _span_flat_to(T, factors, z)
            amap[z] = fmt(a, y, b)
        return SpanCell(T, R, identity_function(T.source), identity_function(T.target), amap)

    def normalize(self, S: Span):
        atoms = _span_atoms(S)
        keep = [i for i, a in enumerate(atoms) if not (a.tag and a.tag[0] == "hom")] or [0]
        out = {z: tuple(_span_flat(S, z)[i] for i in keep) for z in S.apex}
        return tuple(atoms[i] for i in keep), out

    def coherent_equal(self, s: SpanCell, t: SpanCell) -> bool:
        if s.left != t.left or s.right != t.right:
            return False
        ka, na = self.normalize(s.top)
        kb, nb = self.normalize(t.top)
        la, ma = self.normalize(s.bottom)
        lb, mb = self.normalize(t.bottom)
        if ka != kb or la != lb:
            return False
        ta = {na[x]: ma[y] for x, y in s.apex_map.items()}
        tb = {nb[x]: mb[y] for x, y in t.apex_map.items()}
        return ta == tb

    def companion_entry(self, f):
        top, F = self.identity_proarrow(f.source), self.companion(f)
        return SpanCell(top, F, identity_function(f.source), f, {a: a for a in top.apex})

    def companion_exit(self, f):
        F, bottom = self.companion(f), self.identity_proarrow(f.target)
        return SpanCell(F, bottom, f, identity_function(f.target), dict(f.mapping))

    def conjoint_entry(self, f):
        top, G = self.identity_proarrow(f.source), self.conjoint(f)
        return SpanCell(top, G, f, identity_function(f.source), {a: a for a in top.apex})

    def conjoint_exit(self, f):
        G, bottom = self.conjoint(f), self.identity_proarrow(f.target)
        return SpanCell(G, bottom, identity_function(f.target), f, dict(f.mapping))

    def terminal(self):
        return FinSet("1", ("*",))

    def to_terminal(self, x):
        return Function(x, self.terminal(), {a: "*" for a in x.elements}, f"!_{x.name}")


def finite_set(n: int, name: str | None = None) -> FinSet:
    return FinSet(name if name is not None else str(n), tuple(str(i) for i in range(n)))


# -- equipment laws ------------------------------------------------------------------

@dataclass
class EquipmentReport:
    instance: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(what)


def companion_identities(inst: EquipmentInstance, f) -> tuple[bool, bool]:
    """(entry over exit is the identity cell of f, entry beside exit is the identity of comp(f))."""
    e, x = inst.companion_entry(f), inst.companion_exit(f)
    return (inst.coherent_equal(inst.vcomp(e, x), inst.hid(f)),
            inst.coherent_equal(inst.hcomp(e, x), inst.identity_cell(inst.companion(f))))


def conjoint_identities(inst: EquipmentInstance, f) -> tuple[bool, bool]:
    e, x = inst.conjoint_entry(f), inst.conjoint_exit(f)
    return (inst.coherent_equal(inst.vcomp(e, x), inst.hid(f)),
            inst.coherent_equal(inst.hcomp(x, e), inst.identity_cell(inst.conjoint(f))))


def triangle_identities(inst: EquipmentInstance, f) -> tuple[bool, bool]:
    """Both zig-zag pastings of the unit and counit of companion ⊣ conjoint.

    The unit is companion entry beside conjoint entry and the counit is
    conjoint exit beside companion exit; they are pasted in the bracketing
    that makes the middle proarrows agree on the nose.
    """
    ce, cx = inst.companion_entry(f), inst.companion_exit(f)
    ge, gx = inst.conjoint_entry(f), inst.conjoint_exit(f)
    one_f = inst.identity_cell(inst.companion(f))
    one_g = inst.identity_cell(inst.conjoint(f))
    first = inst.vcomp(inst.hcomp(inst.hcomp(ce, ge), one_f), inst.hcomp(inst.hcomp(one_f, gx), cx))
    second = inst.vcomp(inst.hcomp(inst.hcomp(one_g, ce), ge), inst.hcomp(inst.hcomp(gx, cx), one_g))
    return inst.coherent_equal(first, one_f), inst.coherent_equal(second, one_g)


def cartesian_filler_check(inst: EquipmentInstance, f, G, g) -> tuple[bool, bool, bool]:
    """Restriction cell of the niche ``(f, G, g)`` against the pasting formula.

    Returns (the instance's restriction cell is cartesian, the canonical
    comparison out of the pasted proarrow is invertible, the pasting equals
    that comparison followed by the reference restriction cell).
    """
    rho = inst.restrict(G, f, g)
    pasted = paste(inst, [[inst.companion_exit(f), inst.identity_cell(G), inst.conjoint_exit(g)]])
    kappa = inst.yoneda_comparison(inst.boundary(pasted)[0], f, G, g)
    ref = inst.canonical_restriction(G, f, g)
    return (inst.is_cartesian(rho), inst.is_invertible(kappa),
            inst.coherent_equal(inst.vcomp(kappa, ref), pasted))


def cocartesian_filler_check(inst: EquipmentInstance, F, f, g) -> bool:
    """The roof pasting equals the cocartesian filler cell up to coherence."""
    pasted = paste(inst, [[inst.conjoint_entry(f), inst.identity_cell(F), inst.companion_entry(g)]])
    return inst.coherent_equal(pasted, inst.cocartesian_filler(F, f, g))


def interchange_check(inst: EquipmentInstance, F, f, g, G, guard: int | None = None) -> bool:
    """Explicit bijection ``Map(<g|F|f>_!, G) = Map(F, <g|G|f>)`` (cells over f, g on the right)."""
    filler = inst.cocartesian_filler(F, f, g)
    top = inst.boundary(filler)[1]
    A, B = inst.proarrow_ends(G)
    lhs = inst.enumerate_cells(top, G, inst.identity_arrow(A), inst.identity_arrow(B), guard)
    rhs = inst.enumerate_cells(F, G, f, g, guard)
    R = inst.boundary(inst.canonical_restriction(G, f, g))[0]
    rhs_keys = {}
    for phi in rhs:
        # a cell F => G over (f, g) is the same data as a globular cell F => <g|G|f>
        rhs_keys[inst.cell_key(_as_globular(inst, phi, R))] = phi
    images = set()
    for psi in lhs:
        fwd = inst.interchange_forward(filler, psi)
        k = inst.cell_key(fwd)
        if k not in rhs_keys:
            return False
        images.add(k)
        back = inst.interchange_backward(filler, rhs_keys[k], G)
        if inst.cell_key(back) != inst.cell_key(psi):
            return False
    return len(images) == len(lhs) == len(rhs)


def _as_globular(inst: EquipmentInstance, phi, R):
    if isinstance(phi, ProfCell):
        return pf.morphism(phi.top, R, phi.comps)
    amap = {x: fmt(phi.top.left[x], phi.apex_map[x], phi.top.right[x]) for x in phi.top.apex}
    return SpanCell(phi.top, R, identity_function(phi.top.source), identity_function(phi.top.target), amap)


def arrow_law_checks(inst: EquipmentInstance, f) -> list[tuple[bool, str]]:
    """Companion, conjoint and triangle identities of one arrow."""
    tag = _arrow_label(inst, f)
    a, b = companion_identities(inst, f)
    c, d = conjoint_identities(inst, f)
    e, g = triangle_identities(inst, f)
    return [(a, f"companion vertical identity: {tag}"), (b, f"companion horizontal identity: {tag}"),
            (c, f"conjoint vertical identity: {tag}"), (d, f"conjoint horizontal identity: {tag}"),
            (e, f"triangle identity (companion side): {tag}"),
            (g, f"triangle identity (conjoint side): {tag}")]


def filler_checks(inst: EquipmentInstance, P, arrows: Sequence) -> list[tuple[bool, str]]:
    """Every niche with bottom ``P`` and every roof with top ``P`` over ``arrows``."""
    out = []
    C, D = inst.proarrow_ends(P)
    into = lambda X: [h for h in arrows if inst.arrow_ends(h)[1] == X]  # noqa: E731
    out_of = lambda X: [h for h in arrows if inst.arrow_ends(h)[0] == X]  # noqa: E731
    for f in into(C):
        for g in into(D):
            cart, inv, eq = cartesian_filler_check(inst, f, P, g)
            tag = f"{_arrow_label(inst, f)}, {getattr(P, 'name', '?')}, {_arrow_label(inst, g)}"
            out += [(cart, f"restriction not cartesian: {tag}"),
                    (inv, f"pasting comparison not invertible: {tag}"),
                    (eq, f"pasting differs from restriction: {tag}")]
    for f in out_of(C):
        for g in out_of(D):
            tag = f"{_arrow_label(inst, f)}, {getattr(P, 'name', '?')}, {_arrow_label(inst, g)}"
            out.append((cocartesian_filler_check(inst, P, f, g), f"roof pasting differs: {tag}"))
    return out


def _arrow_task(args):
    cls, f = args
    return arrow_law_checks(cls(), f)


def _filler_task(args):
    cls, P, arrows = args
    return filler_checks(cls(), P, arrows)


def verify_equipment(inst: EquipmentInstance, objects: Sequence, proarrows: Sequence = (),
                     guard: int | None = None, niche_objects: Sequence | None = None,
                     jobs: int = 1) -> EquipmentReport:
    """Exhaustive equipment laws over the given objects.

    For every arrow between ``objects``: companion and conjoint identities and
    both triangle identities.  For every niche and roof built from the arrows
    between ``niche_objects`` (default: ``objects``) and the generating
    proarrows (identities, companions, conjoints and the extra ``proarrows``):
    the cartesian filler agrees with its pasting formula and the cocartesian
    filler with its roof pasting.  ``jobs > 1`` shards the checks over worker
    processes; the report is the same.
    """
    rep = EquipmentReport(inst.name)
    arrows = [f for x in objects for y in objects for f in inst.arrows(x, y, guard)]
    if niche_objects is not None:
        nobjs = list(niche_objects)
        narrows = [f for x in nobjs for y in nobjs for f in inst.arrows(x, y, guard)]
    else:
        nobjs, narrows = list(objects), arrows
    pros = [inst.identity_proarrow(x) for x in nobjs]
    pros += [inst.companion(f) for f in narrows] + [inst.conjoint(f) for f in narrows]
    pros += list(proarrows)
    seen = set()
    unique = []
    for P in pros:
        k = inst.proarrow_key(P)
        if k not in seen:
            seen.add(k)
            unique.append(P)
    if jobs > 1:
        cls = type(inst)
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_arrow_task, [(cls, f) for f in arrows], chunksize=16))
            results += list(pool.map(_filler_task, [(cls, P, narrows) for P in unique]))
    else:
        results = [arrow_law_checks(inst, f) for f in arrows]
        results += [filler_checks(inst, P, narrows) for P in unique]
    for chunk in results:
        for ok, what in chunk:
            rep.record(ok, what)
    return rep


def _obj_key(x):
    return x.key if hasattr(x, "key") else x


def _arrow_label(inst: EquipmentInstance, f) -> str:
    s, t = inst.arrow_ends(f)
    return f"{getattr(f, 'name', '') or '?'}:{inst.object_name(s)}->{inst.object_name(t)}"


# -- truncation -----------------------------------------------------------------------

@dataclass
class TruncationData:
    objects: dict[str, object]
    varrows: dict[str, object]
    harrows: dict[str, object]
    squares: dict[str, object]


def truncate_instance(inst: EquipmentInstance, objects: Sequence, guard: int | None = None,
                      max_proarrows: int = 64) -> DoubleCategory:
    """Finite sub-double-category on ``objects`` (see :func:`dblcat.truncate_equipment`).

    The result carries its realization in ``D.meta`` as a
    :class:`TruncationData`.
    """
    names = [inst.object_name(x) for x in objects]
    if len(set(names)) != len(names):
        raise StructuralError("objects to truncate must have distinct names")
    okey = {_obj_key(x): n for x, n in zip(objects, names)}
    vlist = []
    for x in objects:
        for y in objects:
            for f in inst.arrows(x, y, guard):
                vlist.append(f)
    # identities first, so that the identity v-arrow ids are predictable
    vid_of = {}
    vnames = {}
    ordered = []
    for x in objects:
        i = inst.identity_arrow(x)
        vnames[inst.arrow_key(i)] = f"1_{okey[_obj_key(x)]}"
        vid_of[okey[_obj_key(x)]] = f"1_{okey[_obj_key(x)]}"
        ordered.append(i)
    n = 0
    for f in vlist:
        k = inst.arrow_key(f)
        if k not in vnames:
            vnames[k] = f"v{n}"
            n += 1
            ordered.append(f)
    vlist = ordered

    def ends_names(P):
        s, t = inst.proarrow_ends(P)
        return okey[_obj_key(s)], okey[_obj_key(t)]

    reps: list = []

    def find_rep(P):
        e = ends_names(P)
        for i, R in enumerate(reps):
            if ends_names(R) == e and inst.iso_proarrows(P, R) is not None:
                return i
        return None

    queue = [inst.identity_proarrow(x) for x in objects]
    queue += [inst.companion(f) for f in vlist] + [inst.conjoint(f) for f in vlist]
    while queue:
        P = queue.pop(0)
        if find_rep(P) is not None:
            continue
        reps.append(P)
        if len(reps) > max_proarrows:
            raise _guard.GuardExceeded("truncation proarrow closure", len(reps), max_proarrows)
        for R in list(reps):
            if ends_names(R)[1] == ends_names(P)[0]:
                queue.append(inst.compose(P, R))
            if ends_names(P)[1] == ends_names(R)[0] and R is not P:
                queue.append(inst.compose(R, P))
    hname = {}
    for i, R in enumerate(reps):
        hname[i] = f"h{i}"
    hid_of = {}
    for x in objects:
        hid_of[okey[_obj_key(x)]] = hname[find_rep(inst.identity_proarrow(x))]
    # horizontal composition table with transport isos
    hcomp_rep: dict[tuple[int, int], int] = {}
    transport: dict[tuple[int, int], object] = {}
    for i, Ri in enumerate(reps):
        for j, Rj in enumerate(reps):
            if ends_names(Ri)[1] != ends_names(Rj)[0]:
                continue
            P = inst.compose(Rj, Ri)
            k = find_rep(P)
            iso = _canonical_iso(inst, P, reps[k])
            hcomp_rep[(i, j)] = k
            transport[(i, j)] = iso
    horizontal = FinCategory(names, [(hname[i], *ends_names(R)) for i, R in enumerate(reps)],
                     hid_of, {(hname[j], hname[i]): hname[k] for (i, j), k in hcomp_rep.items()})
    vertical = FinCategory(names, [(vnames[inst.arrow_key(f)], okey[_obj_key(inst.arrow_ends(f)[0])],
                            okey[_obj_key(inst.arrow_ends(f)[1])]) for f in vlist],
                   vid_of,
                   {(vnames[inst.arrow_key(g)], vnames[inst.arrow_key(f)]):
                    vnames[inst.arrow_key(inst.compose_arrows(f, g))]
                    for f in vlist for g in vlist
                    if _obj_key(inst.arrow_ends(f)[1]) == _obj_key(inst.arrow_ends(g)[0])})
    # squares
    cells: dict[str, object] = {}
    bnd: dict[str, Boundary] = {}
    index: dict = {}
    rep_index = {inst.proarrow_key(R): i for i, R in enumerate(reps)}
    total = 0
    for i, Ri in enumerate(reps):
        A, B = inst.proarrow_ends(Ri)
        for j, Rj in enumerate(reps):
            C, D = inst.proarrow_ends(Rj)
            for f in (h for h in vlist if _obj_key(inst.arrow_ends(h)[0]) == _obj_key(A)
                      and _obj_key(inst.arrow_ends(h)[1]) == _obj_key(C)):
                for g in (h for h in vlist if _obj_key(inst.arrow_ends(h)[0]) == _obj_key(B)
                          and _obj_key(inst.arrow_ends(h)[1]) == _obj_key(D)):
                    for c in inst.enumerate_cells(Ri, Rj, f, g, guard):
                        sid = f"s{len(cells)}"
                        cells[sid] = c
                        index[inst.cell_key(c)] = sid
                        bnd[sid] = Boundary(hname[i], hname[j], vnames[inst.arrow_key(f)],
                                            vnames[inst.arrow_key(g)])
                        total += 1
                        _guard.check("truncation squares", total, guard)
    vcomp = {}
    hcomp = {}
    for s, cs in cells.items():
        for t, ct in cells.items():
            if bnd[s].bottom == bnd[t].top:
                vcomp[(s, t)] = index[inst.cell_key(inst.vcomp(cs, ct))]
            if bnd[s].right == bnd[t].left:
                i = rep_index[inst.proarrow_key(inst.boundary(cs)[0])]
                j = rep_index[inst.proarrow_key(inst.boundary(ct)[0])]
                k = rep_index[inst.proarrow_key(inst.boundary(cs)[1])]
                m = rep_index[inst.proarrow_key(inst.boundary(ct)[1])]
                raw = inst.hcomp(cs, ct)
                moved = inst.vcomp(inst.vcomp(inst.invert(transport[(i, j)]), raw), transport[(k, m)])
                hcomp[(s, t)] = index[inst.cell_key(moved)]
    hid = {vnames[inst.arrow_key(f)]: index[inst.cell_key(_hid_on_rep(inst, f, reps, find_rep))]
           for f in vlist}
    vid = {hname[i]: index[inst.cell_key(inst.identity_cell(R))] for i, R in enumerate(reps)}
    D = from_squares(horizontal, vertical, bnd, hcomp, vcomp, hid, vid, f"{inst.name}|{','.join(names)}")
    D.meta = TruncationData(dict(zip(names, objects)),
                            {vnames[inst.arrow_key(f)]: f for f in vlist},
                            {hname[i]: R for i, R in enumerate(reps)}, cells)
    return D


def _hid_on_rep(inst, f, reps, find_rep):
    return inst.hid(f)


def _canonical_iso(inst: EquipmentInstance, P, R):
    """Iso ``P => R``: the normal-form map when it is available, else the first found."""
    if isinstance(P, Profunctor):
        kept, N, table = inst.normalize(P)
        if N == R:
            comps = {k: {} for k in P.elements}
            for (k, x), (_k2, y) in table.items():
                comps[k][x] = y
            return pf.morphism(P, R, comps)
    else:
        kept, table = inst.normalize(P)
        if len(kept) == 1 and kept[0] == R:
            return SpanCell(P, R, identity_function(P.source), identity_function(P.target),
                            {z: t[0] for z, t in table.items()})
    iso = inst.iso_proarrows(P, R)
    if iso is None:
        raise StructuralError("no isomorphism to the chosen representative")
    return iso
