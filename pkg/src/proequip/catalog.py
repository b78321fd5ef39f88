"""Named small categories, functors and the fixed test corpus."""

from __future__ import annotations

from functools import lru_cache

from .fincat import (
    FinCategory,
    FinFunctor,
    discrete,
    empty_category,
    enumerate_functors,
    monoid,
    poset,
    terminal,
)


def one() -> FinCategory:
    return terminal()


def arrow() -> FinCategory:
    """The walking arrow ``0 -u-> 1``."""
    return poset(["0", "1"], [("0", "1")], "2", {("0", "1"): "u"})


def chain3() -> FinCategory:
    return poset(["0", "1", "2"], [("0", "1"), ("1", "2")], "[2]")


def cospan() -> FinCategory:
    """``a -> c <- b``."""
    return poset(["a", "b", "c"], [("a", "c"), ("b", "c")], "V")


def span_shape() -> FinCategory:
    """``a <- c -> b``."""
    return poset(["a", "b", "c"], [("c", "a"), ("c", "b")], "L")


def arrow_plus_point() -> FinCategory:
    return poset(["0", "1", "p"], [("0", "1")], "2+1")


def discrete2() -> FinCategory:
    return discrete(["0", "1"], "D2")


def discrete3() -> FinCategory:
    return discrete(["0", "1", "2"], "D3")


def z2() -> FinCategory:
    """The group with two elements as a one-object category."""
    table = {("e", "e"): "e", ("e", "t"): "t", ("t", "e"): "t", ("t", "t"): "e"}
    return monoid(["e", "t"], "e", table, "Z2")


def parallel_pair() -> FinCategory:
    morphisms = [("id0", "0", "0"), ("id1", "1", "1"), ("a", "0", "1"), ("b", "0", "1")]
    comp = {("id0", "id0"): "id0", ("id1", "id1"): "id1",
            ("a", "id0"): "a", ("b", "id0"): "b", ("id1", "a"): "a", ("id1", "b"): "b"}
    return FinCategory(["0", "1"], morphisms, {"0": "id0", "1": "id1"}, comp, "PP")


def split_idempotent() -> FinCategory:
    """``r: a -> b``, ``s: b -> a`` with ``r s = 1_b``; ``e = s r``."""
    morphisms = [("ida", "a", "a"), ("idb", "b", "b"), ("r", "a", "b"), ("s", "b", "a"), ("e", "a", "a")]
    comp = {
        ("ida", "ida"): "ida", ("idb", "idb"): "idb",
        ("r", "ida"): "r", ("idb", "r"): "r", ("s", "idb"): "s", ("ida", "s"): "s",
        ("e", "ida"): "e", ("ida", "e"): "e",
        ("s", "r"): "e", ("r", "s"): "idb",
        ("e", "e"): "e", ("r", "e"): "r", ("e", "s"): "s",
    }
    return FinCategory(["a", "b"], morphisms, {"a": "ida", "b": "idb"}, comp, "Split")


def empty() -> FinCategory:
    return empty_category()


POSETS = ("0", "1", "D2", "2", "D3", "2+1", "V", "L", "[2]")

_BUILDERS = {
    "0": empty,
    "1": one,
    "D2": discrete2,
    "2": arrow,
    "Z2": z2,
    "PP": parallel_pair,
    "Split": split_idempotent,
    "D3": discrete3,
    "2+1": arrow_plus_point,
    "V": cospan,
    "L": span_shape,
    "[2]": chain3,
}


@lru_cache(maxsize=None)
def category(name: str) -> FinCategory:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"no corpus category named {name!r}") from None


def corpus_names(include_empty: bool = True) -> list[str]:
    return [n for n in _BUILDERS if include_empty or n != "0"]


def corpus(include_empty: bool = True) -> list[FinCategory]:
    return [category(n) for n in corpus_names(include_empty)]


def poset_corpus() -> list[FinCategory]:
    return [category(n) for n in POSETS]


@lru_cache(maxsize=None)
def functors(source: str, target: str) -> tuple[FinFunctor, ...]:
    return tuple(enumerate_functors(category(source), category(target)))


def corpus_functors(include_empty: bool = False) -> list[FinFunctor]:
    names = corpus_names(include_empty)
    return [F for a in names for b in names for F in functors(a, b)]


def pick(name: str, obj: str) -> FinFunctor:
    """The functor ``1 -> C`` picking ``obj``."""
    C = category(name)
    return FinFunctor(one(), C, {"*": obj}, {"id*": C.id(obj)}, f"pick{obj}")


def collapse(name: str) -> FinFunctor:
    C = category(name)
    return FinFunctor(C, one(), {x: "*" for x in C.objects}, {m: "id*" for m in C.morphism_ids},
                      "collapse")
