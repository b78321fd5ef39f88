"""Backtracking search for natural maps between finite action systems.

An action system is a family of finite sets indexed by some keys together
with labelled functions between them.  A natural map between two systems
with the same indices and labels is a family of functions commuting with
every label.  Profunctor morphisms, ends and set-valued limits are all
instances, so they share this one kernel.

Choosing the image of one element forces the images of its whole forward
orbit, so the search branches only on orbit generators.
"""

from __future__ import annotations

from collections.abc import Hashable, Mapping
from dataclasses import dataclass, field

from .guard import Budget


@dataclass
class ActionSystem:
    sets: dict[Hashable, tuple[str, ...]]
    # label -> (source index, target index, function)
    arrows: dict[Hashable, tuple[Hashable, Hashable, Mapping[str, str]]] = field(default_factory=dict)

    def out_arrows(self) -> dict[Hashable, list[Hashable]]:
        out: dict[Hashable, list[Hashable]] = {k: [] for k in self.sets}
        for label, (s, _t, _fn) in self.arrows.items():
            out[s].append(label)
        return out


def natural_maps(
    dom: ActionSystem,
    cod: ActionSystem,
    *,
    bijective: bool = False,
    first: bool = False,
    what: str = "natural map search",
    guard: int | None = None,
) -> list[dict[tuple[Hashable, str], str]]:
    """All natural maps ``dom -> cod`` (or only the first if ``first``)."""
    if bijective and any(len(dom.sets[k]) != len(cod.sets.get(k, ())) for k in dom.sets):
        return []
    for k in dom.sets:
        if dom.sets[k] and not cod.sets.get(k):
            return []
    out = dom.out_arrows()
    order = [(k, x) for k in dom.sets for x in dom.sets[k]]
    budget = Budget(what, guard)
    results: list[dict[tuple[Hashable, str], str]] = []

    def propagate(assign: dict, used: dict, k: Hashable, x: str, y: str) -> bool:
        stack = [(k, x, y)]
        while stack:
            k, x, y = stack.pop()
            prev = assign.get((k, x))
            if prev is not None:
                if prev != y:
                    return False
                continue
            if bijective:
                taken = used.setdefault(k, set())
                if y in taken:
                    return False
                taken.add(y)
            assign[(k, x)] = y
            for label in out[k]:
                _s, t, fn = dom.arrows[label]
                _s2, t2, gn = cod.arrows[label]
                stack.append((t, fn[x], gn[y]))
        return True

    def search(pos: int, assign: dict, used: dict) -> bool:
        while pos < len(order) and order[pos] in assign:
            pos += 1
        if pos == len(order):
            results.append(dict(assign))
            return first
        k, x = order[pos]
        for y in cod.sets[k]:
            budget.tick()
            new_assign = dict(assign)
            new_used = {kk: set(v) for kk, v in used.items()} if bijective else used
            if propagate(new_assign, new_used, k, x, y):
                if search(pos + 1, new_assign, new_used):
                    return True
        return False

    search(0, {}, {})
    return results


def is_natural(dom: ActionSystem, cod: ActionSystem, phi: Mapping[tuple[Hashable, str], str]) -> bool:
    for label, (s, t, fn) in dom.arrows.items():
        gn = cod.arrows[label][2]
        for x in dom.sets[s]:
            if phi[(t, fn[x])] != gn[phi[(s, x)]]:
                return False
    return True
