"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly with ``python3 -m tests.test_acceptance`` to print the lines
without pytest; ``--report`` prints the machine report of criteria 1-11 instead.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import pytest

from proequip import catalog
from proequip import dblcat as db
from proequip import formal as fm
from proequip import profunctor as pf
from proequip import serialize as ser
from proequip.equip import (
    CatEquipment,
    Span,
    SpanEquipment,
    enumerate_functions,
    finite_set,
    interchange_check,
    triangle_identities,
    truncate_instance,
    verify_equipment,
)
from proequip.fincat import identity_functor

CAT = CatEquipment()
SPAN = SpanEquipment()
SETS = [finite_set(n) for n in range(5)]
NONEMPTY = catalog.corpus_names(include_empty=False)
# niche/roof checks run on this sub-corpus, see the ledger note on scale
NICHE_CATS = ["0", "1", "2", "Z2", "D2"]
NICHE_SETS = SETS[:4]


@dataclass
class Outcome:
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    def record(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(what)

    @property
    def ok(self) -> bool:
        return self.checks > 0 and not self.failures

    def doc(self) -> dict:
        return {"checks": self.checks, "failures": self.failures[:20],
                "failure_count": len(self.failures), "detail": self.detail}


CRITERIA: dict[int, tuple[str, Callable[[], Outcome]]] = {}


def criterion(n: int, title: str):
    def register(fn):
        CRITERIA[n] = (title, fn)
        return fn
    return register


def _nonempty_profunctor(rng, C, D, max_size):
    """A random profunctor with at least one element (resampled)."""
    for _ in range(100):
        P = pf.random_profunctor(rng, C, D, max_size=max_size)
        if P.size():
            return P
    raise AssertionError(f"no nonempty random profunctor {C.name} -> {D.name}")


def _all_functors(names=NONEMPTY):
    return [f for a in names for b in names for f in catalog.functors(a, b)]


def _all_functions():
    return [f for A in SETS for B in SETS for f in enumerate_functions(A, B)]


# -- 1 -----------------------------------------------------------------------------

@criterion(1, "equipment laws in Cat and Span")
def equipment_laws() -> Outcome:
    out = Outcome()
    cat = verify_equipment(CAT, catalog.corpus(), niche_objects=[catalog.category(n) for n in NICHE_CATS])
    span = verify_equipment(SPAN, SETS, niche_objects=NICHE_SETS)
    for rep in (cat, span):
        out.checks += rep.checks
        out.failures += [f"{rep.instance}: {w}" for w in rep.failures]
    out.detail = {"cat_checks": cat.checks, "span_checks": span.checks}
    return out


# -- 2 -----------------------------------------------------------------------------

@criterion(2, "companion -| conjoint triangle identities")
def triangles() -> Outcome:
    out = Outcome()
    for f in catalog.corpus_functors(include_empty=True):
        a, b = triangle_identities(CAT, f)
        out.record(a and b, f"Cat {f.name}")
    for f in _all_functions():
        a, b = triangle_identities(SPAN, f)
        out.record(a and b, f"Span {f.name}")
    # the same adjunction pasted with paste_grid inside truncated double categories
    for inst, objs in ((CAT, [catalog.category("1"), catalog.category("2")]), (SPAN, SETS[:2])):
        D = truncate_instance(inst, objs)
        for v in D.vertical.morphism_ids:
            comp, conj = db.find_companion(D, v), db.find_conjoint(D, v)
            if comp is None or conj is None:
                out.record(False, f"{D.name}: {v} lacks companion or conjoint")
                continue
            unit = D.hcomp(comp.entry, conj.entry)
            counit = D.hcomp(conj.exit, comp.exit)
            out.record(db.horizontal_adjunction_check(D, comp.harrow, conj.harrow, unit, counit),
                       f"{D.name}: {v}")
    return out


# -- 3 -----------------------------------------------------------------------------

@criterion(3, "coend unit and associativity isos on 200 random triples")
def coend_algebra() -> Outcome:
    out = Outcome()
    rng = random.Random(20240601)
    cats = catalog.corpus(include_empty=False)
    inhabited = 0
    for k in range(200):
        A, B, C, D = (rng.choice(cats) for _ in range(4))
        F = _nonempty_profunctor(rng, A, B, 4)
        G = _nonempty_profunctor(rng, B, C, 4)
        H = _nonempty_profunctor(rng, C, D, 4)
        assoc = pf.associator(H, G, F)
        inhabited += assoc.top.size() > 0
        for name, cell in (("left unitor", pf.left_unitor(F)), ("right unitor", pf.right_unitor(F)),
                           ("associator", assoc)):
            out.record(pf.validate_cell(cell) == [] and cell.is_bijective(), f"triple {k}: {name}")
    out.detail = {"triples": 200, "nonempty_triple_composites": inhabited}
    return out


# -- 4 -----------------------------------------------------------------------------

def _random_span(rng, A, B):
    n = rng.randint(1, 3)
    apex = [f"x{i}" for i in range(n)]
    return Span(A, B, apex, {x: rng.choice(A.elements) for x in apex},
                {x: rng.choice(B.elements) for x in apex}, "S")


@criterion(4, "interchange bijection on random boundary quadruples")
def interchange() -> Outcome:
    out = Outcome()
    rng = random.Random(7)
    small = ["1", "D2", "2", "Z2", "PP"]
    inhabited = 0
    for k in range(80):
        A, B, C, D = (catalog.category(rng.choice(small)) for _ in range(4))
        f = rng.choice(catalog.functors(A.name, C.name))
        g = rng.choice(catalog.functors(B.name, D.name))
        F = _nonempty_profunctor(rng, A, B, 3)
        G = _nonempty_profunctor(rng, C, D, 3)
        inhabited += len(CAT.enumerate_cells(F, G, f, g)) > 0
        out.record(interchange_check(CAT, F, f, g, G), f"Cat quadruple {k}")
    for k in range(80):
        A, B, C, D = (rng.choice(SETS[1:4]) for _ in range(4))
        f = rng.choice(enumerate_functions(A, C))
        g = rng.choice(enumerate_functions(B, D))
        F, G = _random_span(rng, A, B), _random_span(rng, C, D)
        inhabited += len(SPAN.enumerate_cells(F, G, f, g)) > 0
        out.record(interchange_check(SPAN, F, f, g, G), f"Span quadruple {k}")
    out.detail = {"quadruples": 160, "with_cells": inhabited}
    return out


# -- 5 -----------------------------------------------------------------------------

@criterion(5, "Kan extensions agree with the comma-colimit oracle")
def kan_oracle() -> Outcome:
    out = Outcome()
    for w in _all_functors():
        for x in NONEMPTY:
            for f in catalog.functors(w.source.name, x):
                for side in ("left", "right"):
                    out.record(fm.kan_agrees_with_oracle(f, w, side), f"{side} {f.name} along {w.name}")
    return out


# -- 6 -----------------------------------------------------------------------------

@criterion(6, "adjunctions agree with the hom-bijection oracle")
def adjunctions() -> Outcome:
    out = Outcome()
    positive = 0
    for f in _all_functors():
        certified = []
        for g in catalog.functors(f.target.name, f.source.name):
            cert = fm.check_adjunction(f, g)
            oracle = fm.adjunction_by_homs(f, g)
            out.record((cert is not None) == oracle, f"{f.name} -| {g.name}")
            if cert is not None:
                certified.append(g)
                positive += 1
        g = fm.find_right_adjoint(f)
        out.record((g is None) == (not certified), f"right adjoint search for {f.name}")
        if g is not None:
            out.record(fm.adjunction_by_homs(f, g), f"found right adjoint of {f.name}")
    out.detail = {"adjunctions": positive}
    return out


# -- 7 -----------------------------------------------------------------------------

@criterion(7, "exact identity squares detect full faithfulness")
def exact_ff() -> Outcome:
    out = Outcome()
    for f in catalog.corpus_functors(include_empty=True):
        i = identity_functor(f.source)
        out.record(fm.exact_square(i, i, f, f) == fm.is_fully_faithful(f), f.name)
    return out


# -- 8 -----------------------------------------------------------------------------

@criterion(8, "finality: proarrow, comma and pointwise routes; colimit invariance")
def finality() -> Outcome:
    out = Outcome()
    finals = []
    for f in catalog.corpus_functors(include_empty=True):
        a, b, c = fm.is_final(f), fm.final_by_comma(f), fm.quillen_a_pointwise(f)
        out.record(a == b == c, f"final {f.name}")
        out.record(fm.is_initial(f) == fm.initial_by_comma(f), f"initial {f.name}")
        if a:
            finals.append(f)
    invariance = 0
    for f in finals:
        for x in NONEMPTY:
            for g in catalog.functors(f.target.name, x):
                res = fm.colimit_invariant(f, g)
                if res is not None:
                    invariance += 1
                    out.record(res, f"colim along {f.name} of {g.name}")
    out.detail = {"final": len(finals), "invariance_cases": invariance}
    return out


# -- 9 -----------------------------------------------------------------------------

@criterion(9, "Conduche bar condition: composites pass, mutations fail")
def conduche() -> Outcome:
    out = Outcome()
    rng = random.Random(99)
    cats = catalog.corpus(include_empty=False)
    composites = grow = merge = 0
    while composites < 100 or grow < 25 or merge < 25:
        A, B, C = (rng.choice(cats) for _ in range(3))
        F = _nonempty_profunctor(rng, A, B, 3)
        G = _nonempty_profunctor(rng, B, C, 3)
        M = pf.composite_trimodule(F, G)
        k = composites
        out.record(bool(pf.conduche_check(M)), f"composite {k}")
        composites += 1
        keys = sorted(M.H.elements)
        if grow < 25:
            e, c = rng.choice(keys)
            res = pf.conduche_check(pf.add_free_element(M, e, c))
            out.record(not res and res.witness is not None and res.witness[0] == "not-surjective",
                       f"added element {k}")
            grow += 1
        mergeable = [key for key in keys if len(M.H(*key)) >= 2]
        if merge < 25 and mergeable:
            key = rng.choice(mergeable)
            x, y = M.H(*key)[:2]
            res = pf.conduche_check(pf.merge_elements(M, key, x, y))
            out.record(not res and res.witness is not None and res.witness[0] == "not-injective",
                       f"merged classes {k}")
            merge += 1
    out.record(grow + merge == 50, f"mutation suite size {grow + merge}")
    out.detail = {"composites": composites, "added": grow, "merged": merge}
    return out


# -- 10 ----------------------------------------------------------------------------

def _corpus_profunctors():
    seen, out = set(), []
    for C in catalog.corpus():
        out.append(pf.hom_profunctor(C))
    for f in catalog.corpus_functors(include_empty=True):
        out += [pf.companion_of(f), pf.conjoint_of(f)]
    rng = random.Random(5)
    cats = catalog.corpus(include_empty=False)
    for _ in range(100):
        out.append(pf.random_profunctor(rng, rng.choice(cats), rng.choice(cats), max_size=3))
    unique = []
    for P in out:
        key = ser.dumps(ser.profunctor_doc(P, name=""))
        if key not in seen:
            seen.add(key)
            unique.append(P)
    return unique


@criterion(10, "collage and elements round-trips")
def collage() -> Outcome:
    out = Outcome()
    ps = _corpus_profunctors()
    for k, P in enumerate(ps):
        cell = pf.collage_round_trip(P)
        out.record(pf.validate_cell(cell) == [] and cell.is_bijective(), f"collage {k} {P.name}")
        S = pf.elements_span(P)
        out.record(pf.discreteness_violations(P, S) == [], f"elements {k} {P.name}")
    out.detail = {"profunctors": len(ps)}
    return out


# -- 11 ----------------------------------------------------------------------------

@criterion(11, "free companion property")
def free_companion() -> Outcome:
    out = Outcome()
    doubles = [db.free_companion()] + [db.commutative_squares(C) for C in catalog.poset_corpus()]
    doubles.append(truncate_instance(CAT, [catalog.category("1"), catalog.category("2")]))
    for D in doubles:
        out.record(db.free_companion_property(D), D.name)
    return out


# -- reports -----------------------------------------------------------------------

ROOT = Path(__file__).resolve().parent.parent
RESULTS: dict[int, Outcome] = {}
LINES: list[str] = []
_second_run: subprocess.Popen | None = None


def machine_report(outcomes: dict[int, Outcome]) -> str:
    """Stable JSON of criteria 1-11: counts, failures and details, no timings."""
    return ser.dumps({"criteria": {str(n): outcomes[n].doc() for n in sorted(outcomes)}})


def _start_second_run() -> subprocess.Popen:
    """A second full run in a fresh interpreter with a different hash seed."""
    global _second_run
    if _second_run is None:
        env = {**os.environ, "PYTHONHASHSEED": "12345"}
        _second_run = subprocess.Popen([sys.executable, "-m", "tests.test_acceptance", "--report"],
                                       cwd=ROOT, env=env, stdout=subprocess.PIPE,
                                       stderr=subprocess.PIPE, text=True)
    return _second_run


@criterion(12, "determinism of the machine report across two runs")
def determinism() -> Outcome:
    out = Outcome()
    proc = _start_second_run()
    for n in range(1, 12):
        if n not in RESULTS:
            RESULTS[n] = CRITERIA[n][1]()
    first = machine_report({n: RESULTS[n] for n in range(1, 12)})
    second, err = proc.communicate()
    out.record(proc.returncode == 0, f"second run exited with {proc.returncode}: {err[-300:]}")
    out.record(first == second, "the two machine reports differ")
    out.detail = {"bytes": len(first)}
    return out


def _line(n: int, title: str, oc: Outcome, secs: float) -> str:
    tag = "PASS" if oc.ok else "FAIL"
    extra = f"; first failure: {oc.failures[0]}" if oc.failures else ""
    return f"[{tag}] criterion {n:2d}: {title} ({oc.checks} checks, {len(oc.failures)} failures, {secs:.1f}s){extra}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    _start_second_run()
    title, fn = CRITERIA[n]
    t = time.perf_counter()
    oc = fn()
    RESULTS[n] = oc
    line = _line(n, title, oc, time.perf_counter() - t)
    LINES.append(line)
    print(line)
    assert oc.ok, line


def main(argv: list[str]) -> int:
    if argv == ["--report"]:
        sys.stdout.write(machine_report({n: CRITERIA[n][1]() for n in range(1, 12)}))
        return 0
    _start_second_run()
    ok = True
    for n in sorted(CRITERIA):
        title, fn = CRITERIA[n]
        t = time.perf_counter()
        oc = fn()
        RESULTS[n] = oc
        print(_line(n, title, oc, time.perf_counter() - t), flush=True)
        ok &= oc.ok
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
