"""Command line interface.

Objects are referred to by name: anything loaded with ``--load``, any
corpus category (``1``, ``2``, ``Z2``, ...), or one of these expressions:

* functors: ``id:C``, ``pick:C:x``, ``collapse:C``, ``bang:C``, ``fun:C:D:i``
  (the i-th functor ``C -> D`` in enumeration order)
* profunctors: ``hom:C``, ``comp:<functor>``, ``conj:<functor>``,
  ``coconical:C``, ``conical:C``
* sets: ``set:n``
* double categories: ``comp``, ``conj``, ``sq:C``, ``trunc-cat:C1,C2,...``,
  ``trunc-span:n1,n2,...``

Exit status: 0 success, 1 a check failed, 2 bad input, 3 size guard hit.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from . import catalog
from . import dblcat as dc
from . import formal as fm
from . import guard as _guard
from . import profunctor as pf
from . import serialize as ser
from .equip import (
    CatEquipment,
    FinSet,
    SpanEquipment,
    finite_set,
    verify_equipment,
)
from .errors import GuardExceeded, ProequipError
from .fincat import (
    FinCategory,
    FinFunctor,
    comma,
    connected_components,
    enumerate_functors,
    gaunt_check,
    identity_functor,
    invertible,
    nerve,
    point,
    segal_check,
    to_terminal,
    validate_category,
    validate_functor,
)
from .profunctor import Profunctor

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class LoadError(ProequipError):
    """A document was rejected while loading."""


@dataclass
class Workspace:
    """Named objects loaded from files, on top of the built-in corpus."""

    objects: dict[str, tuple[str, object]] = field(default_factory=dict)

    def register(self, kind: str, name: str, obj) -> None:
        if name in self.objects:
            raise LoadError(f"duplicate name {name!r}")
        self.objects[name] = (kind, obj)

    def load(self, path: str | Path) -> list[str]:
        text = Path(path).read_text()
        doc = ser.parse_text(text, str(path))
        ser.validate_document(doc, str(path))
        docs = doc["documents"] if "documents" in doc else [doc]
        if "command" in doc:
            raise LoadError(f"{path}: a report is not loadable")
        names = []
        for d in docs:
            self._load_one(d)
            names.append(d["name"])
        return names

    def _load_one(self, d) -> None:
        kind, name = d["kind"], d["name"]
        if name in self.objects:
            raise LoadError(f"duplicate name {name!r}")
        if kind == "category":
            obj = ser.category_from_doc(d)
            bad = validate_category(obj)
        elif kind == "functor":
            obj = ser.functor_from_doc(d, self.category)
            bad = validate_functor(obj)
        elif kind == "profunctor":
            obj = ser.profunctor_from_doc(d, self.category)
            bad = pf.validate_profunctor(obj)
        elif kind == "set":
            obj, bad = ser.set_from_doc(d), []
        elif kind == "function":
            obj, bad = ser.function_from_doc(d, self.finset), []
        elif kind == "span":
            obj, bad = ser.span_from_doc(d, self.finset), []
        else:
            obj = ser.double_from_doc(d)
            bad = dc.validate_double(obj)
        if bad:
            v = bad[0]
            raise LoadError(f"{kind} {name!r} is invalid: {v.law} at {v.witness}")
        self.register(kind, name, obj)

    # -- lookups --------------------------------------------------------------

    def _get(self, name: str, kind: str):
        if name in self.objects:
            k, obj = self.objects[name]
            if k != kind:
                raise LoadError(f"{name!r} is a {k}, not a {kind}")
            return obj
        return None

    def category(self, name: str) -> FinCategory:
        obj = self._get(name, "category")
        if obj is not None:
            return obj
        try:
            return catalog.category(name)
        except KeyError:
            raise LoadError(f"unknown category {name!r}") from None

    def functor(self, expr: str) -> FinFunctor:
        obj = self._get(expr, "functor")
        if obj is not None:
            return obj
        head, _, rest = expr.partition(":")
        args = rest.split(":") if rest else []
        try:
            if head == "id" and len(args) == 1:
                return identity_functor(self.category(args[0]))
            if head == "pick" and len(args) == 2:
                C = self.category(args[0])
                return FinFunctor(catalog.one(), C, {"*": args[1]}, {"id*": C.id(args[1])}, f"pick{args[1]}")
            if head == "collapse" and len(args) == 1:
                return to_terminal(self.category(args[0])).renamed("collapse")
            if head == "bang" and len(args) == 1:
                return to_terminal(self.category(args[0]))
            if head == "fun" and len(args) == 3:
                return enumerate_functors(self.category(args[0]), self.category(args[1]))[int(args[2])]
        except (KeyError, IndexError, ValueError):
            raise LoadError(f"bad functor expression {expr!r}") from None
        raise LoadError(f"unknown functor {expr!r}")

    def profunctor(self, expr: str) -> Profunctor:
        obj = self._get(expr, "profunctor")
        if obj is not None:
            return obj
        head, _, rest = expr.partition(":")
        if head == "hom":
            return pf.hom_profunctor(self.category(rest))
        if head == "comp":
            return pf.companion_of(self.functor(rest))
        if head == "conj":
            return pf.conjoint_of(self.functor(rest))
        if head == "coconical":
            return fm.coconical_weight(self.category(rest))
        if head == "conical":
            return fm.conical_weight(self.category(rest))
        raise LoadError(f"unknown profunctor {expr!r}")

    def finset(self, expr: str) -> FinSet:
        obj = self._get(expr, "set")
        if obj is not None:
            return obj
        head, _, rest = expr.partition(":")
        if head == "set" and rest.isdigit():
            return finite_set(int(rest))
        if expr.isdigit():
            return finite_set(int(expr))
        raise LoadError(f"unknown set {expr!r}")

    def double(self, expr: str, guard: int | None = None) -> dc.DoubleCategory:
        obj = self._get(expr, "double_category")
        if obj is not None:
            return obj
        head, _, rest = expr.partition(":")
        if expr == "comp":
            return dc.free_companion()
        if expr == "conj":
            return dc.free_conjoint()
        if head == "sq":
            return dc.commutative_squares(self.category(rest))
        if head == "trunc-cat":
            return CatEquipment().truncate([self.category(n) for n in rest.split(",")], guard)
        if head == "trunc-span":
            return SpanEquipment().truncate([self.finset(n) for n in rest.split(",")], guard)
        raise LoadError(f"unknown double category {expr!r}")

    def any(self, name: str):
        if name in self.objects:
            return self.objects[name]
        for kind, fn in (("category", self.category), ("functor", self.functor),
                         ("profunctor", self.profunctor), ("double_category", self.double)):
            try:
                return kind, fn(name)
            except LoadError:
                continue
        raise LoadError(f"unknown name {name!r}")


# -- commands ------------------------------------------------------------------------

def _table(P: Profunctor) -> list[list]:
    return [[d, c, len(xs)] for (d, c), xs in P.elements.items()]


def _functor_summary(F: FinFunctor) -> dict:
    return {"name": F.name, "source": F.source.name, "target": F.target.name,
            "objects": [[x, F.obj(x)] for x in F.source.objects],
            "morphisms": [[m, F.mor(m)] for m in F.source.morphism_ids]}


def cmd_validate(ws: Workspace, a) -> tuple[bool, dict]:
    out = {}
    for name in a.names:
        kind, obj = ws.any(name)
        if kind == "category":
            bad = validate_category(obj)
        elif kind == "functor":
            bad = validate_functor(obj)
        elif kind == "profunctor":
            bad = pf.validate_profunctor(obj)
        elif kind == "double_category":
            bad = dc.validate_double(obj)
        else:
            bad = []
        out[name] = {"kind": kind, "violations": [[v.law, [str(w) for w in v.witness]] for v in bad]}
    return all(not v["violations"] for v in out.values()), {"objects": out}


def cmd_compose(ws, a):
    G, F = ws.profunctor(a.outer), ws.profunctor(a.inner)
    H = pf.compose_prof(G, F)
    return True, {"proarrow": ser.profunctor_doc(H), "sizes": _table(H)}


def cmd_companion(ws, a):
    P = pf.companion_of(ws.functor(a.functor))
    return True, {"proarrow": ser.profunctor_doc(P), "sizes": _table(P)}


def cmd_conjoint(ws, a):
    P = pf.conjoint_of(ws.functor(a.functor))
    return True, {"proarrow": ser.profunctor_doc(P), "sizes": _table(P)}


def cmd_restrict(ws, a):
    G, f, g = ws.profunctor(a.proarrow), ws.functor(a.f), ws.functor(a.g)
    cell = pf.restrict(G, f, g)
    return True, {"proarrow": ser.profunctor_doc(cell.top), "sizes": _table(cell.top),
                  "cartesian": pf.is_cartesian_cell(cell)}


def cmd_cocart(ws, a):
    F, f, g = ws.profunctor(a.proarrow), ws.functor(a.f), ws.functor(a.g)
    cell = pf.cocartesian_filler(F, f, g)
    return True, {"proarrow": ser.profunctor_doc(cell.bottom), "sizes": _table(cell.bottom)}


def cmd_adjoint(ws, a):
    f = ws.functor(a.f)
    if a.g is not None:
        g = ws.functor(a.g)
        cert = fm.check_adjunction(f, g)
        res = {"left": f.name, "right": g.name, "adjunction": cert is not None}
        if cert is not None:
            unit_iso, counit_iso = fm.ff_unit_test(cert)
            res.update(unit=sorted(cert.unit().items()), counit=sorted(cert.counit().items()),
                       unit_invertible=unit_iso, counit_invertible=counit_iso)
        return cert is not None, res
    g = fm.find_right_adjoint(f)
    return g is not None, {"left": f.name, "right_adjoint": None if g is None else _functor_summary(g)}


def cmd_ff(ws, a):
    f = ws.functor(a.f)
    ok = fm.is_fully_faithful(f)
    return ok, {"functor": f.name, "fully_faithful": ok}


def cmd_wcolim(ws, a):
    f, W = ws.functor(a.f), ws.profunctor(a.weight)
    g = fm.weighted_colimit(f, W)
    return g is not None, {"colimit": None if g is None else _functor_summary(g)}


def cmd_wlim(ws, a):
    f, W = ws.functor(a.f), ws.profunctor(a.weight)
    g = fm.weighted_limit(f, W)
    return g is not None, {"limit": None if g is None else _functor_summary(g)}


def cmd_kan(ws, a):
    f, w = ws.functor(a.f), ws.functor(a.w)
    ext = fm.left_kan(f, w) if a.side == "left" else fm.right_kan(f, w)
    if ext is None:
        return False, {"side": a.side, "extension": None}
    inv = all(invertible(f.target, m) is not None for m in ext.cell.components.values())
    label = "unit" if a.side == "left" else "counit"
    return True, {"side": a.side, "extension": _functor_summary(ext.functor),
                  label: sorted(ext.cell.components.items()), f"{label}_invertible": inv,
                  "oracle_agrees": fm.kan_agrees_with_oracle(f, w, a.side)}


def cmd_exact(ws, a):
    p, w, v, q = (ws.functor(x) for x in (a.p, a.w, a.v, a.q))
    cell = fm.exact_square_comparison(p, w, v, q)
    ok = cell.is_bijective()
    sizes = [[k[0], k[1], len(cell.top(*k)), len(cell.bottom(*k))] for k in cell.top.elements]
    return ok, {"exact": ok, "sizes": sizes}


def _point_counts(f: FinFunctor, initial: bool) -> list[list]:
    J = f.target
    out = []
    for j in J.objects:
        K = comma(f, point(J, j)) if initial else comma(point(J, j), f)
        out.append([j, len(connected_components(K.category))])
    return out


def cmd_final(ws, a):
    f = ws.functor(a.f)
    ok = fm.is_final(f)
    return ok, {"functor": f.name, "final": ok, "components": _point_counts(f, False)}


def cmd_initial(ws, a):
    f = ws.functor(a.f)
    ok = fm.is_initial(f)
    return ok, {"functor": f.name, "initial": ok, "components": _point_counts(f, True)}


def cmd_quillen(ws, a):
    f = ws.functor(a.f)
    ok = fm.quillen_a_pointwise(f)
    P = fm.finality_proarrow(f)
    return ok, {"functor": f.name, "pointwise": ok,
                "values": [[j, len(P(j, "*"))] for j in f.target.objects]}


def cmd_conduche(ws, a):
    F, G = ws.profunctor(a.inner), ws.profunctor(a.outer)
    res = pf.conduche_check(pf.composite_trimodule(F, G))
    return res.ok, {"holds": res.ok, "witness": [str(w) for w in (res.witness or ())]}


def cmd_segal(ws, a):
    res = segal_check(nerve(ws.category(a.category)))
    return res.ok, {"segal": res.ok, "witness": [str(w) for w in res.witness]}


def cmd_gaunt(ws, a):
    ok = gaunt_check(ws.category(a.category))
    return ok, {"gaunt": ok}


def cmd_equip_verify(ws, a):
    names = [n for n in a.objects.split(",") if n] if a.objects else None
    if a.instance == "cat":
        inst = CatEquipment()
        objs = [ws.category(n) for n in (names or ["1", "2"])]
    else:
        inst = SpanEquipment()
        objs = [ws.finset(n) for n in (names or ["0", "1", "2"])]
    rep = verify_equipment(inst, objs, guard=a.guard, jobs=a.jobs)
    return rep.ok, {"instance": rep.instance, "checks": rep.checks, "failures": rep.failures}


def cmd_free_comp(ws, a):
    D = ws.double(a.double, a.guard)
    ok = dc.free_companion_property(D, a.guard)
    companions = [v for v in D.vertical.morphism_ids if dc.find_companion(D, v) is not None]
    return ok, {"double_category": D.name, "property": ok, "companionable": companions}


COMMANDS = {
    "validate": cmd_validate, "compose-prof": cmd_compose, "companion": cmd_companion,
    "conjoint": cmd_conjoint, "restrict": cmd_restrict, "cocart": cmd_cocart, "adjoint": cmd_adjoint,
    "ff": cmd_ff, "wcolim": cmd_wcolim, "wlim": cmd_wlim, "kan": cmd_kan, "exact-square": cmd_exact,
    "final": cmd_final, "initial": cmd_initial, "quillen-a": cmd_quillen, "conduche": cmd_conduche,
    "segal": cmd_segal, "gaunt": cmd_gaunt, "equip-verify": cmd_equip_verify, "free-comp": cmd_free_comp,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--load", action="append", default=[], metavar="FILE",
                        help="JSON document or bundle to load (repeatable)")
    common.add_argument("--guard", type=int, default=None,
                        help=f"size guard for exhaustive searches (default ${_guard.ENV_VAR} or {_guard.DEFAULT_GUARD})")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for corpus checks")

    p = argparse.ArgumentParser(prog="proequip", description="Finite proarrow equipments.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, *args):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for arg in args:
            if isinstance(arg, tuple):
                sp.add_argument(arg[0], **arg[1])
            else:
                sp.add_argument(arg)
        return sp

    add("validate", "validate named objects", ("names", {"nargs": "+"}))
    add("compose-prof", "compose two profunctors (outer after inner)", "outer", "inner")
    add("companion", "companion proarrow of a functor", "functor")
    add("conjoint", "conjoint proarrow of a functor", "functor")
    add("restrict", "restriction <g|G|f>", "proarrow", "f", "g")
    add("cocart", "cocartesian filler <g|F|f>_!", "proarrow", "f", "g")
    add("adjoint", "check f -| g, or search for a right adjoint of f", "f", ("g", {"nargs": "?"}))
    add("ff", "is the functor fully faithful", "f")
    add("wcolim", "weighted colimit of f by a weight j -> i", "f", "weight")
    add("wlim", "weighted limit of f by a weight i -> j", "f", "weight")
    add("kan", "pointwise Kan extension of f along w", "f", "w",
        ("--side", {"choices": ["left", "right"], "default": "left"}))
    add("exact-square", "exactness of a commuting square p, w, v, q", "p", "w", "v", "q")
    add("final", "is the functor final", "f")
    add("initial", "is the functor initial", "f")
    add("quillen-a", "pointwise finality test", "f")
    add("conduche", "bar condition for the composite of two profunctors", "outer", "inner")
    add("segal", "Segal condition for the nerve of a category", "category")
    add("gaunt", "are all isomorphisms identities", "category")
    add("equip-verify", "exhaustive equipment laws", ("instance", {"choices": ["cat", "span"]}),
        ("--objects", {"default": None, "help": "comma-separated categories or set sizes"}))
    add("free-comp", "free companion property of a double category", "double")
    return p


def _args_of(a) -> list[str]:
    skip = {"command", "load", "guard", "json", "jobs"}
    out = []
    for k, v in sorted(vars(a).items()):
        if k in skip or v is None:
            continue
        out += [f"{k}={x}" for x in v] if isinstance(v, list) else [f"{k}={v}"]
    return out


def _human(report: dict) -> str:
    lines = [f"{report['command']}: {'ok' if report['ok'] else 'FAILED'}"]
    for k, v in sorted(report["result"].items()):
        if k in ("proarrow",):
            continue
        if isinstance(v, list) and len(v) > 12:
            v = f"{len(v)} entries"
        lines.append(f"  {k}: {v}")
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    a = parser.parse_args(argv)
    ws = Workspace()
    try:
        for path in a.load:
            ws.load(path)
        with _guard.size_guard(a.guard) if a.guard is not None else contextlib.nullcontext():
            ok, result = COMMANDS[a.command](ws, a)
    except GuardExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (ProequipError, OSError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    report = {"command": a.command, "args": _args_of(a), "ok": bool(ok), "result": result}
    out.write(ser.dumps(report) if a.json else _human(report))
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
