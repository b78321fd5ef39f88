from __future__ import annotations

import io
import json

import pytest
from hypothesis import given, settings

from proequip import catalog, cli
from proequip import dblcat as db
from proequip import profunctor as pf
from proequip import serialize as ser
from proequip.equip import Span, enumerate_functions, finite_set
from proequip.errors import StructuralError

from .strategies import corpus_categories, corpus_functors, profunctors


def _run(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), out=buf)
    return code, buf.getvalue()


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(ser.dumps(doc))
    return str(p)


# -- documents ---------------------------------------------------------------------

@pytest.mark.parametrize("C", catalog.corpus(), ids=lambda C: C.name)
def test_category_round_trip(C):
    doc = ser.category_doc(C)
    ser.validate_document(doc)
    back = ser.category_from_doc(json.loads(ser.dumps(doc)))
    assert back == C
    assert ser.dumps(ser.category_doc(back)) == ser.dumps(doc)


@settings(max_examples=40, deadline=None)
@given(corpus_functors())
def test_functor_round_trip(F):
    doc = ser.functor_doc(F)
    ser.validate_document(doc)
    back = ser.functor_from_doc(json.loads(ser.dumps(doc)), catalog.category)
    assert back == F


@settings(max_examples=40, deadline=None)
@given(profunctors(max_size=3))
def test_profunctor_round_trip(P):
    doc = ser.profunctor_doc(P)
    ser.validate_document(doc)
    back = ser.profunctor_from_doc(json.loads(ser.dumps(doc)), catalog.category)
    assert pf.validate_profunctor(back) == []
    assert ser.dumps(ser.profunctor_doc(back)) == ser.dumps(doc)


def test_span_documents_round_trip():
    A, B = finite_set(2), finite_set(3)
    sets = {A.name: A, B.name: B}
    for f in enumerate_functions(A, B)[:5]:
        doc = ser.function_doc(f)
        ser.validate_document(doc)
        assert ser.function_from_doc(doc, sets.__getitem__) == f
    S = Span(A, B, ["x", "y"], {"x": "0", "y": "1"}, {"x": "2", "y": "2"}, "S")
    doc = ser.span_doc(S)
    ser.validate_document(doc)
    assert ser.span_from_doc(doc, sets.__getitem__) == S
    assert ser.set_from_doc(ser.set_doc(A)) == A


@pytest.mark.parametrize("D", [db.free_companion(), db.free_conjoint(),
                               db.commutative_squares(catalog.category("V"))], ids=lambda D: D.name)
def test_double_round_trip(D):
    doc = ser.double_doc(D)
    ser.validate_document(doc)
    back = ser.double_from_doc(json.loads(ser.dumps(doc)))
    assert db.validate_double(back) == []
    assert ser.dumps(ser.double_doc(back)) == ser.dumps(doc)


@settings(max_examples=20, deadline=None)
@given(corpus_categories)
def test_encoding_is_canonical(C):
    doc = ser.category_doc(C)
    text = ser.dumps(doc)
    assert ser.dumps(json.loads(text)) == text
    assert text.endswith("\n")


def test_parse_error_has_position():
    with pytest.raises(StructuralError, match="line 2, column"):
        ser.parse_text('{\n  "kind": }')


def test_schema_violation_names_the_path():
    doc = ser.category_doc(catalog.category("2"))
    doc["morphisms"][0] = ["u", "0"]
    with pytest.raises(StructuralError, match="morphisms/0"):
        ser.validate_document(doc)


# -- loading -----------------------------------------------------------------------

def test_load_category_and_use_it(tmp_path):
    doc = ser.category_doc(catalog.category("2"), name="Arrow")
    path = _write(tmp_path, "arrow.json", doc)
    code, out = _run("gaunt", "Arrow", "--load", path, "--json")
    assert code == cli.EXIT_OK
    assert json.loads(out)["result"] == {"gaunt": True}


def test_load_rejects_non_natural_profunctor(tmp_path):
    # Z2 acts on both sides by involutions that do not commute
    doc = {"kind": "profunctor", "name": "H", "source": "Z2", "target": "Z2",
           "elements": [["*", "*", ["p", "q", "r"]]],
           "left": [["t", "*", "p", "q"], ["t", "*", "q", "p"], ["t", "*", "r", "r"]],
           "right": [["t", "*", "p", "p"], ["t", "*", "q", "r"], ["t", "*", "r", "q"]]}
    ser.validate_document(doc)
    path = _write(tmp_path, "bad.json", doc)
    with pytest.raises(cli.LoadError, match="invalid"):
        cli.Workspace().load(path)
    assert _run("validate", "H", "--load", path)[0] == cli.EXIT_INPUT


def test_load_rejects_duplicates(tmp_path):
    C = catalog.category("2")
    bundle = {"documents": [ser.category_doc(C, "A"), ser.category_doc(C, "A")]}
    path = _write(tmp_path, "dup.json", bundle)
    ws = cli.Workspace()
    with pytest.raises(cli.LoadError, match="duplicate"):
        ws.load(path)


def test_load_rejects_broken_category(tmp_path):
    doc = ser.category_doc(catalog.category("2"), name="B")
    doc["composition"] = [[g, f, "id0" if (g, f) == ("id1", "u") else h]
                          for g, f, h in doc["composition"]]
    path = _write(tmp_path, "broken.json", doc)
    with pytest.raises(cli.LoadError, match="composition-boundary"):
        cli.Workspace().load(path)


def test_load_bundle_of_functor_and_profunctor(tmp_path):
    C = catalog.category("2")
    F = catalog.pick("2", "1")
    P = pf.hom_profunctor(C)
    bundle = {"documents": [ser.category_doc(C, "A"), ser.category_doc(catalog.category("1"), "P"),
                            {**ser.functor_doc(F, "f"), "source": "P", "target": "A"},
                            {**ser.profunctor_doc(P, "H"), "source": "A", "target": "A"}]}
    path = _write(tmp_path, "bundle.json", bundle)
    code, out = _run("ff", "f", "--load", path, "--json")
    assert code == cli.EXIT_OK and json.loads(out)["result"]["fully_faithful"] is True
    code, out = _run("compose-prof", "H", "H", "--load", path, "--json")
    assert code == cli.EXIT_OK
    assert json.loads(out)["result"]["sizes"] == [["0", "0", 1], ["0", "1", 1], ["1", "0", 0], ["1", "1", 1]]


def test_unreadable_file_is_input_error(tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    assert _run("gaunt", "2", "--load", str(bad))[0] == cli.EXIT_INPUT
    assert _run("gaunt", "2", "--load", str(tmp_path / "missing.json"))[0] == cli.EXIT_INPUT


# -- commands ----------------------------------------------------------------------

COMMAND_LINES = [
    ["validate", "2", "Z2", "hom:2", "comp"],
    ["compose-prof", "hom:2", "comp:pick:2:1"],
    ["companion", "pick:2:1"],
    ["conjoint", "pick:2:1"],
    ["restrict", "hom:2", "pick:2:0", "pick:2:1"],
    ["cocart", "hom:1", "pick:2:0", "pick:2:1"],
    ["adjoint", "collapse:2", "pick:2:1"],
    ["adjoint", "pick:2:0"],
    ["ff", "pick:2:1"],
    ["wcolim", "id:2", "coconical:2"],
    ["wlim", "id:2", "conical:2"],
    ["kan", "pick:2:1", "pick:2:1"],
    ["kan", "pick:2:0", "pick:2:0", "--side", "right"],
    ["exact-square", "id:1", "id:1", "pick:2:1", "pick:2:1"],
    ["final", "pick:2:1"],
    ["initial", "pick:2:0"],
    ["quillen-a", "pick:2:1"],
    ["conduche", "hom:2", "hom:2"],
    ["segal", "[2]"],
    ["gaunt", "V"],
    ["equip-verify", "cat", "--objects", "1,2"],
    ["equip-verify", "span", "--objects", "0,1,2"],
    ["free-comp", "comp"],
]


@pytest.mark.parametrize("argv", COMMAND_LINES, ids=lambda a: " ".join(a))
def test_command_reports_validate_and_are_stable(argv):
    code, out = _run(*argv, "--json")
    assert code == cli.EXIT_OK, out
    doc = json.loads(out)
    ser.validate_report(doc)
    assert doc["ok"] is True and doc["command"] == argv[0]
    assert ser.dumps(doc) == out
    assert _run(*argv, "--json") == (code, out)
    human_code, human = _run(*argv)
    assert human_code == code and human.startswith(f"{argv[0]}: ok")


def test_final_report_has_point_counts():
    code, out = _run("final", "pick:2:1", "--json")
    assert code == cli.EXIT_OK
    assert json.loads(out)["result"]["components"] == [["0", 1], ["1", 1]]
    code, out = _run("final", "pick:2:0", "--json")
    assert code == cli.EXIT_FAIL
    assert json.loads(out)["result"]["components"] == [["0", 1], ["1", 0]]


def test_kan_along_identity_report():
    code, out = _run("kan", "pick:2:1", "id:1", "--json")
    res = json.loads(out)["result"]
    assert code == cli.EXIT_OK
    assert res["unit_invertible"] is True and res["oracle_agrees"] is True
    assert res["extension"]["objects"] == [["*", "1"]]


def test_equip_verify_report():
    code, out = _run("equip-verify", "cat", "--objects", "1,2", "--json")
    res = json.loads(out)["result"]
    assert code == cli.EXIT_OK
    assert res == {"instance": "Cat", "checks": 770, "failures": []}


def test_failing_checks_exit_one():
    assert _run("ff", "collapse:2")[0] == cli.EXIT_FAIL
    assert _run("gaunt", "Z2")[0] == cli.EXIT_FAIL
    assert _run("adjoint", "pick:2:1")[0] == cli.EXIT_FAIL
    assert _run("free-comp", "sq:2")[0] == cli.EXIT_OK


def test_input_errors_exit_two():
    assert _run("ff", "nope:2")[0] == cli.EXIT_INPUT
    assert _run("gaunt", "NotACategory")[0] == cli.EXIT_INPUT
    assert _run("kan", "pick:2:1", "id:2")[0] == cli.EXIT_INPUT
    with pytest.raises(SystemExit) as e:
        _run("no-such-command")
    assert e.value.code == 2


def test_guard_exceeded_exits_three():
    assert _run("equip-verify", "cat", "--objects", "[2],Split", "--guard", "2")[0] == cli.EXIT_GUARD


def test_guard_from_environment(monkeypatch):
    from proequip import guard
    monkeypatch.setenv(guard.ENV_VAR, "2")
    assert _run("equip-verify", "cat", "--objects", "[2],Split")[0] == cli.EXIT_GUARD
