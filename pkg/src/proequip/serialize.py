"""JSON documents for every loadable object, and stable report encoding.

All identifiers are strings, element sets are sorted arrays and every table
is an array of fixed-length rows.  The accepted shapes are described by the
schema shipped as ``schema.json`` next to this module.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Mapping
from functools import lru_cache
from importlib import resources

import jsonschema

from .dblcat import Boundary, DoubleCategory, from_squares
from .equip import FinSet, Function, Span
from .errors import StructuralError
from .fincat import FinCategory, FinFunctor
from .profunctor import Profunctor


@lru_cache(maxsize=None)
def schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("schema.json").read_text())


def validate_document(doc, what: str = "file") -> None:
    """Raise :class:`StructuralError` with the offending path when ``doc`` does not fit the schema."""
    validator = jsonschema.Draft202012Validator(schema())
    e = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if e is not None:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise StructuralError(f"{what}: schema violation at {where}: {e.message}")


def validate_report(doc) -> None:
    validator = jsonschema.Draft202012Validator({**schema(), "$ref": "#/$defs/report"})
    validator.validate(doc)


def dumps(doc) -> str:
    """The one canonical text encoding: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_text(text: str, what: str = "file"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise StructuralError(f"{what}: JSON parse error at line {e.lineno}, column {e.colno}: {e.msg}") from None


# -- to documents -------------------------------------------------------------------

def category_doc(C: FinCategory, name: str | None = None) -> dict:
    return {
        "kind": "category",
        "name": C.name if name is None else name,
        "objects": list(C.objects),
        "morphisms": [list(m) for m in C.morphisms],
        "identities": [[x, C.id(x)] for x in C.objects],
        "composition": sorted([g, f, h] for (g, f), h in C.comp.items()),
    }


def functor_doc(F: FinFunctor, name: str | None = None) -> dict:
    return {
        "kind": "functor",
        "name": F.name if name is None else name,
        "source": F.source.name,
        "target": F.target.name,
        "objects": [[x, F.obj(x)] for x in F.source.objects],
        "morphisms": [[m, F.mor(m)] for m in F.source.morphism_ids],
    }


def profunctor_doc(P: Profunctor, name: str | None = None) -> dict:
    C, D = P.source, P.target
    left = []
    for a, _s, _t in C.morphisms:
        if C.is_identity(a):
            continue
        for d in D.objects:
            left += [[a, d, x, y] for x, y in P.lact[(a, d)].items()]
    right = []
    for b, _s, _t in D.morphisms:
        if D.is_identity(b):
            continue
        for c in C.objects:
            right += [[b, c, x, y] for x, y in P.ract[(b, c)].items()]
    return {
        "kind": "profunctor",
        "name": P.name if name is None else name,
        "source": C.name,
        "target": D.name,
        "elements": [[d, c, sorted(P(d, c))] for d in D.objects for c in C.objects],
        "left": sorted(left),
        "right": sorted(right),
    }


def set_doc(A: FinSet) -> dict:
    return {"kind": "set", "name": A.name, "elements": list(A.elements)}


def function_doc(f: Function) -> dict:
    return {"kind": "function", "name": f.name, "source": f.source.name, "target": f.target.name,
            "mapping": [[x, f(x)] for x in f.source.elements]}


def span_doc(S: Span) -> dict:
    return {"kind": "span", "name": S.name, "source": S.source.name, "target": S.target.name,
            "apex": list(S.apex), "left": [[x, S.left[x]] for x in S.apex],
            "right": [[x, S.right[x]] for x in S.apex]}


def double_doc(D: DoubleCategory) -> dict:
    return {
        "kind": "double_category",
        "name": D.name,
        "horizontal": category_doc(D.horizontal),
        "vertical": category_doc(D.vertical),
        "squares": [[s, b.top, b.bottom, b.left, b.right] for s, b in D.boundary.items()],
        "hcomp": sorted([s, t, u] for (t, s), u in D.sq_h.comp.items()),
        "vcomp": sorted([s, t, u] for (t, s), u in D.sq_v.comp.items()),
        "hid": [[v, D.hid(v)] for v in D.vertical.morphism_ids],
        "vid": [[h, D.vid(h)] for h in D.horizontal.morphism_ids],
    }


# -- from documents -----------------------------------------------------------------

def category_from_doc(doc: Mapping) -> FinCategory:
    ids = dict(map(tuple, doc["identities"]))
    comp = {(g, f): h for g, f, h in doc["composition"]}
    # identity laws may be left implicit
    for m, s, t in doc["morphisms"]:
        if t in ids:
            comp.setdefault((ids[t], m), m)
        if s in ids:
            comp.setdefault((m, ids[s]), m)
    return FinCategory(doc["objects"], doc["morphisms"], ids, comp, doc["name"])


def functor_from_doc(doc: Mapping, lookup: Callable[[str], FinCategory]) -> FinFunctor:
    C, D = lookup(doc["source"]), lookup(doc["target"])
    omap = dict(map(tuple, doc["objects"]))
    mmap = dict(map(tuple, doc["morphisms"]))
    # identities may be left implicit
    for x in C.objects:
        if x in omap and omap[x] in D.identities:
            mmap.setdefault(C.id(x), D.id(omap[x]))
    return FinFunctor(C, D, omap, mmap, doc["name"])


def profunctor_from_doc(doc: Mapping, lookup: Callable[[str], FinCategory]) -> Profunctor:
    C, D = lookup(doc["source"]), lookup(doc["target"])
    els = {}
    for d, c, xs in doc["elements"]:
        if (d, c) in els:
            raise StructuralError(f"profunctor {doc['name']!r}: element set at ({d}, {c}) given twice")
        els[(d, c)] = list(xs)
    for d in D.objects:
        for c in C.objects:
            els.setdefault((d, c), [])
    lact: dict = {}
    for a, d, x, y in doc["left"]:
        lact.setdefault((a, d), {})[x] = y
    ract: dict = {}
    for b, c, x, y in doc["right"]:
        ract.setdefault((b, c), {})[x] = y
    return Profunctor(C, D, els, lact, ract, doc["name"])


def set_from_doc(doc: Mapping) -> FinSet:
    return FinSet(doc["name"], tuple(doc["elements"]))


def function_from_doc(doc: Mapping, lookup: Callable[[str], FinSet]) -> Function:
    return Function(lookup(doc["source"]), lookup(doc["target"]), dict(map(tuple, doc["mapping"])),
                    doc["name"])


def span_from_doc(doc: Mapping, lookup: Callable[[str], FinSet]) -> Span:
    return Span(lookup(doc["source"]), lookup(doc["target"]), doc["apex"],
                dict(map(tuple, doc["left"])), dict(map(tuple, doc["right"])), doc["name"])


def double_from_doc(doc: Mapping) -> DoubleCategory:
    H = category_from_doc(doc["horizontal"])
    V = category_from_doc(doc["vertical"])
    squares = {s: Boundary(top, bottom, left, right) for s, top, bottom, left, right in doc["squares"]}
    hcomp = {(s, t): u for s, t, u in doc["hcomp"]}
    vcomp = {(s, t): u for s, t, u in doc["vcomp"]}
    return from_squares(H, V, squares, hcomp, vcomp, dict(map(tuple, doc["hid"])),
                        dict(map(tuple, doc["vid"])), doc["name"])
