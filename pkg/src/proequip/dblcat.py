"""Finite strict double categories.

A double category is stored as four finite categories sharing identifiers:

* ``horizontal``: objects and h-arrows,
* ``vertical``: objects and v-arrows,
* ``sq_h``: v-arrows as objects, squares as morphisms ``left -> right``,
  composed by placing squares side by side,
* ``sq_v``: h-arrows as objects, squares as morphisms ``top -> bottom``,
  composed by stacking squares.

A square ``s`` has boundary ``top: a -> b``, ``bottom: c -> d``,
``left: a -> c`` and ``right: b -> d``.  Helper functions use diagrammatic
order: ``hcomp(s, t)`` puts ``t`` to the right of ``s`` and ``vcomp(s, t)``
puts ``t`` below ``s``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from . import guard as _guard
from .errors import BoundaryError, InterchangeError, StructuralError
from .catalog import arrow, one
from .fincat import (
    FinCategory,
    Violation,
    discrete,
    enumerate_functors,
    opposite,
    validate_category,
)


@dataclass(frozen=True)
class Boundary:
    top: str
    bottom: str
    left: str
    right: str


class DoubleCategory:
    __slots__ = ("horizontal", "vertical", "sq_h", "sq_v", "boundary", "name", "meta")

    def __init__(self, horizontal: FinCategory, vertical: FinCategory,
                 sq_h: FinCategory, sq_v: FinCategory,
                 boundary: Mapping[str, Boundary], name: str = ""):
        self.horizontal = horizontal
        self.vertical = vertical
        self.sq_h = sq_h
        self.sq_v = sq_v
        self.boundary = dict(boundary)
        self.name = name
        self.meta = None
        if horizontal.objects != vertical.objects and set(horizontal.objects) != set(vertical.objects):
            raise StructuralError("horizontal and vertical categories have different objects")
        if set(sq_h.objects) != set(vertical.morphism_ids):
            raise StructuralError("sq_h must have the v-arrows as objects")
        if set(sq_v.objects) != set(horizontal.morphism_ids):
            raise StructuralError("sq_v must have the h-arrows as objects")
        sqs = set(sq_h.morphism_ids)
        if sqs != set(sq_v.morphism_ids) or sqs != set(self.boundary):
            raise StructuralError("square sets of sq_h, sq_v and the boundary map differ")
        for s, bd in self.boundary.items():
            if (sq_h.src(s), sq_h.tgt(s)) != (bd.left, bd.right):
                raise StructuralError(f"square {s}: sq_h endpoints disagree with the boundary")
            if (sq_v.src(s), sq_v.tgt(s)) != (bd.top, bd.bottom):
                raise StructuralError(f"square {s}: sq_v endpoints disagree with the boundary")

    @property
    def objects(self) -> tuple[str, ...]:
        return self.horizontal.objects

    @property
    def squares(self) -> tuple[str, ...]:
        return self.sq_h.morphism_ids

    def hcomp_arrows(self, f: str, g: str) -> str:
        """``f`` then ``g`` horizontally."""
        return self.horizontal.compose(g, f)

    def vcomp_arrows(self, f: str, g: str) -> str:
        return self.vertical.compose(g, f)

    def hcomp(self, s: str, t: str) -> str:
        """``t`` to the right of ``s``."""
        if self.boundary[s].right != self.boundary[t].left:
            raise BoundaryError(f"squares {s} and {t} do not share a vertical edge")
        return self.sq_h.compose(t, s)

    def vcomp(self, s: str, t: str) -> str:
        """``t`` below ``s``."""
        if self.boundary[s].bottom != self.boundary[t].top:
            raise BoundaryError(f"squares {s} and {t} do not share a horizontal edge")
        return self.sq_v.compose(t, s)

    def hid(self, v: str) -> str:
        """Horizontal identity square of a v-arrow."""
        return self.sq_h.id(v)

    def vid(self, h: str) -> str:
        """Vertical identity square of an h-arrow."""
        return self.sq_v.id(h)

    def squares_with(self, top: str | None = None, bottom: str | None = None,
                     left: str | None = None, right: str | None = None) -> list[str]:
        out = []
        for s in self.squares:
            bd = self.boundary[s]
            if ((top is None or bd.top == top) and (bottom is None or bd.bottom == bottom)
                    and (left is None or bd.left == left) and (right is None or bd.right == right)):
                out.append(s)
        return out

    def __repr__(self) -> str:
        return (f"<DoubleCategory {self.name or '?'}: {len(self.objects)} objects, "
                f"{len(self.horizontal.morphisms)} h, {len(self.vertical.morphisms)} v, "
                f"{len(self.squares)} squares>")

    @property
    def key(self) -> tuple:
        return (self.horizontal.key, self.vertical.key, self.sq_h.key, self.sq_v.key,
                tuple(sorted((s, (b.top, b.bottom, b.left, b.right)) for s, b in self.boundary.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, DoubleCategory) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def validate_double(D: DoubleCategory) -> list[Violation]:
    """All violated double-category laws, interchange checked on every 2x2 grid."""
    out: list[Violation] = []
    for label, C in (("horizontal", D.horizontal), ("vertical", D.vertical),
                     ("sq_h", D.sq_h), ("sq_v", D.sq_v)):
        out += [Violation(f"{label}:{v.law}", v.witness) for v in validate_category(C)]
    if out:
        return out
    H, V = D.horizontal, D.vertical
    for s, bd in D.boundary.items():
        if (H.src(bd.top) != V.src(bd.left) or H.tgt(bd.top) != V.src(bd.right)
                or H.src(bd.bottom) != V.tgt(bd.left) or H.tgt(bd.bottom) != V.tgt(bd.right)):
            out.append(Violation("square-corners", (s,)))
    for (t, s), u in D.sq_h.comp.items():
        bs, bt, bu = D.boundary[s], D.boundary[t], D.boundary[u]
        if bu.top != H.compose(bt.top, bs.top) or bu.bottom != H.compose(bt.bottom, bs.bottom):
            out.append(Violation("hcomp-boundary", (s, t)))
    for (t, s), u in D.sq_v.comp.items():
        bs, bt, bu = D.boundary[s], D.boundary[t], D.boundary[u]
        if bu.left != V.compose(bt.left, bs.left) or bu.right != V.compose(bt.right, bs.right):
            out.append(Violation("vcomp-boundary", (s, t)))
    for v in V.morphism_ids:
        bd = D.boundary[D.hid(v)]
        if bd.top != H.id(V.src(v)) or bd.bottom != H.id(V.tgt(v)):
            out.append(Violation("hid-boundary", (v,)))
    for h in H.morphism_ids:
        bd = D.boundary[D.vid(h)]
        if bd.left != V.id(H.src(h)) or bd.right != V.id(H.tgt(h)):
            out.append(Violation("vid-boundary", (h,)))
    if out:
        return out
    for x in D.objects:
        if D.hid(V.id(x)) != D.vid(H.id(x)):
            out.append(Violation("identity-square", (x,)))
    for (g, f), h in V.comp.items():
        if D.vcomp(D.hid(f), D.hid(g)) != D.hid(h):
            out.append(Violation("hid-functorial", (f, g)))
    for (g, f), h in H.comp.items():
        if D.hcomp(D.vid(f), D.vid(g)) != D.vid(h):
            out.append(Violation("vid-functorial", (f, g)))
    out += interchange_violations(D)
    return out


def interchange_violations(D: DoubleCategory) -> list[Violation]:
    out = []
    hc, vc = D.sq_h.comp, D.sq_v.comp
    by_left: dict[str, list[str]] = {}
    by_top: dict[str, list[str]] = {}
    for s, bd in D.boundary.items():
        by_left.setdefault(bd.left, []).append(s)
        by_top.setdefault(bd.top, []).append(s)
    for s1 in D.squares:
        b1 = D.boundary[s1]
        for s2 in by_left.get(b1.right, []):
            b2 = D.boundary[s2]
            top_row = hc[(s2, s1)]
            below_left = by_top.get(b1.bottom, [])
            below_right = by_top.get(b2.bottom, [])
            for s3 in below_left:
                r3 = D.boundary[s3].right
                col1 = vc[(s3, s1)]
                for s4 in below_right:
                    if D.boundary[s4].left != r3:
                        continue
                    rows = vc[(hc[(s4, s3)], top_row)]
                    cols = hc[(vc[(s4, s2)], col1)]
                    if rows != cols:
                        out.append(Violation("interchange", (s1, s2, s3, s4)))
    return out


# -- pasting ---------------------------------------------------------------------

@dataclass(frozen=True)
class PastingGrid:
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        widths = {len(r) for r in self.rows}
        if len(widths) > 1 or not self.rows or 0 in widths:
            raise StructuralError("pasting grid must be a nonempty rectangle")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])


def check_grid(D: DoubleCategory, grid: PastingGrid) -> None:
    m, n = grid.shape
    for i in range(m):
        for j in range(n):
            s = grid.rows[i][j]
            if s not in D.boundary:
                raise StructuralError(f"unknown square {s!r}")
            if j + 1 < n and D.boundary[s].right != D.boundary[grid.rows[i][j + 1]].left:
                raise BoundaryError(f"grid ({i},{j})|({i},{j + 1}): vertical edges differ")
            if i + 1 < m and D.boundary[s].bottom != D.boundary[grid.rows[i + 1][j]].top:
                raise BoundaryError(f"grid ({i},{j})/({i + 1},{j}): horizontal edges differ")


def _row(D: DoubleCategory, squares: Sequence[str]) -> str:
    acc = squares[0]
    for s in squares[1:]:
        acc = D.hcomp(acc, s)
    return acc


def _column(D: DoubleCategory, squares: Sequence[str]) -> str:
    acc = squares[0]
    for s in squares[1:]:
        acc = D.vcomp(acc, s)
    return acc


def paste_grid(D: DoubleCategory, grid: PastingGrid | Sequence[Sequence[str]]) -> str:
    """Composite of a rectangular grid; row-first and column-first must agree."""
    if not isinstance(grid, PastingGrid):
        grid = PastingGrid(tuple(tuple(r) for r in grid))
    check_grid(D, grid)
    m, n = grid.shape
    by_rows = _column(D, [_row(D, grid.rows[i]) for i in range(m)])
    by_cols = _row(D, [_column(D, [grid.rows[i][j] for i in range(m)]) for j in range(n)])
    if by_rows != by_cols:
        raise InterchangeError(f"row-first {by_rows} differs from column-first {by_cols}")
    return by_rows


def paste_rows(D: DoubleCategory, rows: Sequence[Sequence[str]]) -> str:
    """Stack rows of possibly different widths; each row is composed first."""
    return _column(D, [_row(D, r) for r in rows])


# -- opposites and constructions -----------------------------------------------------

def hop(D: DoubleCategory) -> DoubleCategory:
    """Horizontal opposite: h-arrows reversed, left and right edges swapped."""
    boundary = {s: Boundary(b.top, b.bottom, b.right, b.left) for s, b in D.boundary.items()}
    name = D.name[:-4] if D.name.endswith("^hop") else (D.name + "^hop" if D.name else "")
    return DoubleCategory(opposite(D.horizontal), D.vertical, opposite(D.sq_h),
                          D.sq_v, boundary, name)


def transpose(D: DoubleCategory) -> DoubleCategory:
    """Swap the roles of horizontal and vertical."""
    boundary = {s: Boundary(b.left, b.right, b.top, b.bottom) for s, b in D.boundary.items()}
    return DoubleCategory(D.vertical, D.horizontal, D.sq_v, D.sq_h, boundary,
                          D.name + "^t" if D.name else "")


def from_squares(horizontal: FinCategory, vertical: FinCategory,
                 squares: Mapping[str, Boundary],
                 hcomp: Mapping[tuple[str, str], str], vcomp: Mapping[tuple[str, str], str],
                 hid: Mapping[str, str], vid: Mapping[str, str], name: str = "") -> DoubleCategory:
    """Assemble from square data; ``hcomp[(s, t)]`` is ``t`` right of ``s``,
    ``vcomp[(s, t)]`` is ``t`` below ``s``."""
    sq_h = FinCategory(vertical.morphism_ids,
                       [(s, b.left, b.right) for s, b in squares.items()],
                       hid, {(t, s): u for (s, t), u in hcomp.items()})
    sq_v = FinCategory(horizontal.morphism_ids,
                       [(s, b.top, b.bottom) for s, b in squares.items()],
                       vid, {(t, s): u for (s, t), u in vcomp.items()})
    return DoubleCategory(horizontal, vertical, sq_h, sq_v, squares, name)


def commutative_squares(C: FinCategory, name: str = "") -> DoubleCategory:
    """h- and v-arrows both the morphisms of ``C``; squares the commuting ones."""
    squares: dict[str, Boundary] = {}
    for top, a, b in C.morphisms:
        for left in (m for m, s, _t in C.morphisms if s == a):
            c = C.tgt(left)
            for right in (m for m, s, _t in C.morphisms if s == b):
                d = C.tgt(right)
                for bottom in C.hom(c, d):
                    if C.compose(right, top) == C.compose(bottom, left):
                        squares[f"[{top}|{left}|{right}|{bottom}]"] = Boundary(top, bottom, left, right)
    index = {(b.top, b.bottom, b.left, b.right): s for s, b in squares.items()}
    hcomp, vcomp = {}, {}
    for s, bs in squares.items():
        for t, bt in squares.items():
            if bs.right == bt.left:
                hcomp[(s, t)] = index[(C.compose(bt.top, bs.top), C.compose(bt.bottom, bs.bottom),
                                       bs.left, bt.right)]
            if bs.bottom == bt.top:
                vcomp[(s, t)] = index[(bs.top, bt.bottom, C.compose(bt.left, bs.left),
                                       C.compose(bt.right, bs.right))]
    hid = {v: index[(C.id(C.src(v)), C.id(C.tgt(v)), v, v)] for v in C.morphism_ids}
    vid = {h: index[(h, h, C.id(C.src(h)), C.id(C.tgt(h)))] for h in C.morphism_ids}
    return from_squares(C, C, squares, hcomp, vcomp, hid, vid, name or (f"Sq({C.name})" if C.name else ""))


def free_companion() -> DoubleCategory:
    """The double category of commutative squares in the walking arrow."""
    return commutative_squares(arrow(), "comp")


def free_conjoint() -> DoubleCategory:
    D = hop(free_companion())
    D.name = "conj"
    return D


def trivial_double() -> DoubleCategory:
    return commutative_squares(one(), "pt")


def vertical_only(C: FinCategory, name: str = "") -> DoubleCategory:
    """Only identity h-arrows; squares are the horizontal identities of v-arrows."""
    H = discrete(C.objects)
    squares = {f"1[{v}]": Boundary(H.id(C.src(v)), H.id(C.tgt(v)), v, v) for v in C.morphism_ids}
    hcomp = {(f"1[{v}]", f"1[{v}]"): f"1[{v}]" for v in C.morphism_ids}
    vcomp = {(f"1[{f}]", f"1[{g}]"): f"1[{h}]" for (g, f), h in C.comp.items()}
    hid = {v: f"1[{v}]" for v in C.morphism_ids}
    vid = {H.id(x): f"1[{C.id(x)}]" for x in C.objects}
    return from_squares(H, C, squares, hcomp, vcomp, hid, vid, name or "vert")


# -- companions and conjoints -----------------------------------------------------------

@dataclass(frozen=True)
class CompanionDatum:
    """``harrow`` with an entry square (top and left identities, right ``v``,
    bottom ``harrow``) and an exit square (top ``harrow``, left ``v``, right
    and bottom identities)."""

    varrow: str
    harrow: str
    entry: str
    exit: str


@dataclass(frozen=True)
class ConjointDatum:
    """``harrow`` with an entry square (top and right identities, left ``v``,
    bottom ``harrow``) and an exit square (top ``harrow``, right ``v``, left
    and bottom identities)."""

    varrow: str
    harrow: str
    entry: str
    exit: str


def _companion_candidates(D: DoubleCategory, v: str) -> Iterable[CompanionDatum]:
    H, V = D.horizontal, D.vertical
    x, y = V.src(v), V.tgt(v)
    target_vertical = D.hid(v)
    for F in H.hom(x, y):
        for e in D.squares_with(top=H.id(x), left=V.id(x), right=v, bottom=F):
            for q in D.squares_with(top=F, left=v, right=V.id(y), bottom=H.id(y)):
                if D.vcomp(e, q) == target_vertical and D.hcomp(e, q) == D.vid(F):
                    yield CompanionDatum(v, F, e, q)


def find_companion(D: DoubleCategory, v: str) -> CompanionDatum | None:
    return next(iter(_companion_candidates(D, v)), None)


def companion_data(D: DoubleCategory, v: str) -> list[CompanionDatum]:
    return list(_companion_candidates(D, v))


def find_conjoint(D: DoubleCategory, v: str) -> ConjointDatum | None:
    c = find_companion(hop(D), v)
    return None if c is None else ConjointDatum(v, c.harrow, c.entry, c.exit)


def conjoint_data(D: DoubleCategory, v: str) -> list[ConjointDatum]:
    return [ConjointDatum(v, c.harrow, c.entry, c.exit) for c in companion_data(hop(D), v)]


def is_equipment_double(D: DoubleCategory) -> bool:
    return all(find_companion(D, v) is not None and find_conjoint(D, v) is not None
               for v in D.vertical.morphism_ids)


def globular_isos(D: DoubleCategory, F: str, G: str) -> list[tuple[str, str]]:
    """Pairs of mutually inverse squares ``F => G``, ``G => F`` with identity sides."""
    H, V = D.horizontal, D.vertical
    x, y = H.src(F), H.tgt(F)
    out = []
    for s in D.squares_with(top=F, bottom=G, left=V.id(x), right=V.id(y)):
        for t in D.squares_with(top=G, bottom=F, left=V.id(x), right=V.id(y)):
            if D.vcomp(s, t) == D.vid(F) and D.vcomp(t, s) == D.vid(G):
                out.append((s, t))
    return out


def companion_comparison(D: DoubleCategory, a: CompanionDatum, b: CompanionDatum) -> str | None:
    """An invertible square ``a.harrow => b.harrow`` carrying ``a``'s structure squares to ``b``'s."""
    for s, _t in globular_isos(D, a.harrow, b.harrow):
        if D.vcomp(a.entry, s) == b.entry and D.vcomp(s, b.exit) == a.exit:
            return s
    return None


# -- cartesian squares -----------------------------------------------------------------

def is_cartesian_square(D: DoubleCategory, s: str) -> bool:
    """Universal property by enumeration: every square into the bottom edge
    whose sides factor through ``s``'s sides factors uniquely through ``s``."""
    V = D.vertical
    bd = D.boundary[s]
    for h in (m for m, _a, t in V.morphisms if t == V.src(bd.left)):
        for k in (m for m, _a, t in V.morphisms if t == V.src(bd.right)):
            left, right = V.compose(bd.left, h), V.compose(bd.right, k)
            for t in D.squares_with(bottom=bd.bottom, left=left, right=right):
                top = D.boundary[t].top
                n = sum(1 for u in D.squares_with(top=top, bottom=bd.top, left=h, right=k)
                        if D.vcomp(u, s) == t)
                if n != 1:
                    return False
    return True


def has_all_cartesian_fillers(D: DoubleCategory) -> bool:
    """Every niche ``(f, G, g)`` has a cartesian square above it."""
    V, H = D.vertical, D.horizontal
    for G, c, d in H.morphisms:
        for f in (m for m, _a, t in V.morphisms if t == c):
            for g in (m for m, _a, t in V.morphisms if t == d):
                if not any(is_cartesian_square(D, s) for s in D.squares_with(bottom=G, left=f, right=g)):
                    return False
    return True


# -- adjunctions in the horizontal direction ---------------------------------------------

def horizontal_adjunction_check(D: DoubleCategory, F: str, G: str, unit: str, counit: str) -> bool:
    """Triangle identities for ``F: x -> y`` left adjoint to ``G: y -> x``.

    ``unit`` runs ``id_x => F;G`` and ``counit`` runs ``G;F => id_y``, both
    with identity vertical sides.
    """
    H, V = D.horizontal, D.vertical
    x, y = H.src(F), H.tgt(F)
    if H.src(G) != y or H.tgt(G) != x:
        raise BoundaryError("adjunction: F and G are not opposite h-arrows")
    bu, bc = D.boundary[unit], D.boundary[counit]
    if (bu.top, bu.bottom, bu.left, bu.right) != (H.id(x), H.compose(G, F), V.id(x), V.id(x)):
        return False
    if (bc.top, bc.bottom, bc.left, bc.right) != (H.compose(F, G), H.id(y), V.id(y), V.id(y)):
        return False
    first = paste_rows(D, [[unit, D.vid(F)], [D.vid(F), counit]])
    second = paste_rows(D, [[D.vid(G), unit], [counit, D.vid(G)]])
    return first == D.vid(F) and second == D.vid(G)


# -- double functors and the free companion ------------------------------------------

@dataclass(frozen=True)
class DoubleFunctor:
    source: DoubleCategory
    target: DoubleCategory
    objects: Mapping[str, str]
    harrows: Mapping[str, str]
    varrows: Mapping[str, str]
    squares: Mapping[str, str]


def _respects(C: FinCategory, omap: Mapping[str, str], mmap: Mapping[str, str], T: FinCategory) -> bool:
    return all(T.compose(mmap[g], mmap[f]) == mmap[h] for (g, f), h in C.comp.items()) and \
        all(mmap[C.id(x)] == T.id(omap[x]) for x in C.objects)


def enumerate_double_functors(S: DoubleCategory, T: DoubleCategory,
                              guard: int | None = None) -> list[DoubleFunctor]:
    out = []
    budget_size = 0
    hfs = enumerate_functors(S.horizontal, T.horizontal, guard)
    vfs = enumerate_functors(S.vertical, T.vertical, guard)
    vby = {}
    for g in vfs:
        vby.setdefault(tuple(g.object_map[x] for x in S.objects), []).append(g)
    for hf in hfs:
        for vf in vby.get(tuple(hf.object_map[x] for x in S.objects), []):
            cands = []
            for s in S.squares:
                b = S.boundary[s]
                cands.append(T.squares_with(top=hf.mor(b.top), bottom=hf.mor(b.bottom),
                                            left=vf.mor(b.left), right=vf.mor(b.right)))
            size = 1
            for c in cands:
                size *= len(c)
            budget_size += size
            _guard.check("double functor enumeration", budget_size, guard)
            for combo in itertools.product(*cands):
                smap = dict(zip(S.squares, combo))
                if (_respects(S.sq_h, vf.morphism_map, smap, T.sq_h)
                        and _respects(S.sq_v, hf.morphism_map, smap, T.sq_v)):
                    out.append(DoubleFunctor(S, T, dict(hf.object_map), dict(hf.morphism_map),
                                             dict(vf.morphism_map), smap))
    return out


def tautological_varrow(P: DoubleCategory) -> str:
    V = P.vertical
    nonid = [m for m in V.morphism_ids if not V.is_identity(m)]
    if len(nonid) != 1:
        raise StructuralError("expected exactly one non-identity v-arrow")
    return nonid[0]


def free_companion_property(D: DoubleCategory, guard: int | None = None) -> bool:
    """Double functors out of the free companion correspond bijectively, via the
    image of the tautological v-arrow, to the v-arrows of ``D`` admitting a companion."""
    P = free_companion()
    u = tautological_varrow(P)
    images = [F.varrows[u] for F in enumerate_double_functors(P, D, guard)]
    companionable = {v for v in D.vertical.morphism_ids if find_companion(D, v) is not None}
    return len(images) == len(set(images)) and set(images) == companionable


# -- truncation of an equipment ------------------------------------------------------

def truncate_equipment(instance, objects: Sequence, guard: int | None = None) -> DoubleCategory:
    """The finite sub-double-category of ``instance`` on the given objects.

    v-arrows: all arrows between the chosen objects.  h-arrows: one
    representative per isomorphism class of the proarrows generated from
    identities, companions and conjoints under composition.  Squares: all
    cells between h-arrow representatives.  Horizontal composition of
    representatives is transported along the constructed isomorphisms, so it
    is strict only when those isomorphisms are unique; :func:`validate_double`
    detects the cases where it is not.
    """
    return instance.truncate(list(objects), guard)
