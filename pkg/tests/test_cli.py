from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest
from hypothesis import given

from conftest import semigroups
from malcev import corpus
from malcev.cli import main
from malcev.formats import ParseError, format_text, from_document, parse, parse_text, to_document
from malcev.graphs import decompose, parse_dot_edges, upper_graph


def run(capsys, *argv, stdin: str | None = None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@given(semigroups())
def test_text_round_trip(s):
    assert parse(format_text(s)) == s
    assert parse_text(format_text(s, checksums=True), verify_checksums=True) == s


@given(semigroups())
def test_json_round_trip(s):
    assert parse(json.dumps(to_document(s))) == s
    assert from_document(json.loads(json.dumps(to_document(s, {"pseudo": True})))) == s


def test_t6_text_and_document_agree():
    s = corpus.get_fixture("T6").semigroup
    assert parse(format_text(s)) == parse(json.dumps(to_document(s)))


@pytest.mark.parametrize("text, line, column", [
    ("2\na b\na b\nb c\n", 4, 3),
    ("x\n", 1, 1),
    ("2\na a\na a\na a\n", 2, 3),
    ("2 3\na b\n", 1, 3),
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as e:
        parse_text(text)
    assert (e.value.line, e.value.column) == (line, column)


def test_validate_ok_and_non_associative(capsys, tmp_path):
    good = tmp_path / "s5.txt"
    good.write_text(corpus.fixture_text("S5"))
    code, out, _ = run(capsys, "validate", str(good))
    assert code == 0 and json.loads(out)["order"] == 5
    bad = tmp_path / "bad.txt"
    bad.write_text("2\nu v\nv u\nu u\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "(" in err
    code, _, _ = run(capsys, "validate", "--skip-validate", str(bad))
    assert code == 0


def test_pseudo_on_s5_reports_witness(capsys):
    code, out, _ = run(capsys, "pseudo", "--fixture", "S5")
    doc = json.loads(out)
    assert code == 1
    w = doc["witness"]
    assert (w["x"], w["y"], w["word"]) == ("b", "e", ["a", "a"])
    assert doc["non_edge"] == ["b", "e"]
    assert len(w["trace"]) == w["m"] + 1


def test_strong_exit_codes(capsys):
    assert run(capsys, "strong", "--fixture", "R8")[0] == 0
    code, out, _ = run(capsys, "strong", "--fixture", "T11")
    assert code == 1 and json.loads(out)["violations"]


def test_graph_dot_on_family_matches_decomposition(capsys, tmp_path):
    s = corpus.chained_band_family(1)
    path = tmp_path / "fam.txt"
    path.write_text(format_text(s))
    code, out, _ = run(capsys, "graph", str(path), "--kind", "upper", "--format", "dot")
    assert code == 0
    g = upper_graph(s)
    assert parse_dot_edges(out) == {frozenset((s.names[x], s.names[y])) for x, y in g.edges()}
    assert out.count("component=") == s.order
    assert len(decompose(g).nontrivial()) == 1


def test_stdin_input(capsys, monkeypatch):
    code, out, _ = run(capsys, "nilpotency", "--mn", stdin=corpus.fixture_text("S4"),
                       monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["mn"]["class"] == 1


def test_input_and_capacity_errors(capsys):
    assert run(capsys, "pseudo", "--fixture", "nope")[0] == 2
    assert run(capsys, "pseudo", "--fixture", "T11", "--max-order", "5")[0] == 3
    assert run(capsys, "pseudo", "--fixture", "T11", "--max-subsemigroups", "3")[0] == 3
    assert run(capsys, "census", "--order", "4")[0] == 3
    assert run(capsys, "validate", "/no/such/file")[0] == 2


@pytest.mark.parametrize("argv", [
    ["series", "--fixture", "T11"],
    ["decompose", "--fixture", "R8"],
    ["conform", "--fixture", "T6", "--tie-break", "reverse"],
    ["nilpotency", "--fixture", "M0_22"],
    ["graph", "--fixture", "T5", "--kind", "lower"],
    ["corpus", "get", "R8", "--json"],
    ["family", "--n", "2"],
    ["census", "--order", "3", "--properties"],
])
def test_output_is_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert first[0] in (0, 1)


def test_decompose_r8(capsys):
    code, out, _ = run(capsys, "decompose", "--fixture", "R8")
    doc = json.loads(out)
    assert code == 0
    assert doc["K"] == ["theta"]
    assert [c["connection"] for c in doc["connections"]] == [["b1", "b2", "b3"]]


def test_conform_passes_on_corpus(capsys):
    for key in ("S4", "T5", "T6", "R8", "T11"):
        code, out, _ = run(capsys, "conform", "--fixture", key)
        assert code == 0 and json.loads(out)["passed"]


def test_corpus_list_and_family_json(capsys):
    code, out, _ = run(capsys, "corpus", "list")
    assert code == 0 and [line.split("\t")[0] for line in out.splitlines()] == corpus.fixture_keys()
    code, out, _ = run(capsys, "family", "--n", "1", "--json")
    assert from_document(json.loads(out)) == corpus.chained_band_family(1)


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "malcev.cli", "corpus", "get", "S5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert parse(proc.stdout) == corpus.get_fixture("S5").semigroup
