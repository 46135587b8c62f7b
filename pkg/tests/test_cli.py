import json

import pytest

from liberal_succession.cli import main
from liberal_succession.document import CommunityDocument, example_document, parse_state


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_separability_fails_on_min_example(capsys):
    code, out, _ = run(capsys, "check", "example:sec-j", "--axioms", "separability")
    assert code == 1
    assert out.startswith("separability: FAILS [exhaustive")
    assert "  agent = 1" in out


def test_check_nonmalevolence_holds_on_line(capsys):
    code, out, _ = run(capsys, "check", "example:sec-c", "--axioms", "nonmalevolence")
    assert code == 0 and "nonmalevolence: holds" in out


def test_relations_all(capsys):
    code, out, _ = run(capsys, "relations", "example:sec-c", "--all", "--show", "2")
    assert code == 1
    assert "pareto pairs: 0" in out and "divergent pairs: 20" in out
    assert out.count(" over ") == 2
    code, out, _ = run(capsys, "relations", "example:sec-f", "--all")
    assert "divergent pairs: 4" in out


def test_relations_pair(capsys):
    code, out, _ = run(capsys, "relations", "example:sec-c", "--pair", "(1)|(0)")
    assert code == 0
    assert out.splitlines()[1:] == ["pareto: no", "liberal: yes (J={1,3}, strict agent 1)",
                                    "permissive: yes (J={1,3}, strict agent 1)"]


def test_pair_off_grid_is_input_error(capsys):
    code, _, err = run(capsys, "relations", "example:sec-c", "--pair", "(2)|(0)")
    assert code == 2 and "not on the grid" in err


def test_repr_plane(capsys):
    code, out, _ = run(capsys, "repr", "example:sec-f", "--certify")
    assert code == 1
    assert "certification: refused-signs" in out and "-1/2" in out


def test_repr_identity_certified(tmp_path, capsys):
    doc = example_document("sec-f")
    doc.agents = [{"id": 1, "v": "x1", "p": "x1"}, {"id": 2, "v": "x2", "p": "x2"}]
    doc.matrix = {"A": [["1", "0"], ["0", "1"]]}
    path = tmp_path / "id.json"
    path.write_text(doc.dumps())
    code, out, _ = run(capsys, "repr", str(path), "--certify")
    assert code == 0 and "certification: certified" in out and "divergent pairs: 0" in out


def test_repr_without_matrix_is_input_error(capsys):
    code, _, err = run(capsys, "repr", "example:sec-j")
    assert code == 2 and "no matrix" in err


def test_json_format(capsys):
    code, out, _ = run(capsys, "check", "example:sec-c", "--axioms", "product-structure,unambiguous-improvement",
                       "--format", "json")
    data = json.loads(out)
    assert code == 1
    assert [r["condition"] for r in data["results"]] == ["product-structure", "unambiguous-improvement"]
    assert data["results"][1]["witness"] == {"agents": [1]}


def test_reports_are_byte_identical(capsys):
    argv = ["check", "example:sec-j", "--mode", "sampled", "--seed", "3", "--samples", "500"]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first
    argv = ["random", "--trials", "3", "--seed", "7", "--verbose"]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


def test_example_output(tmp_path, capsys):
    code, out, _ = run(capsys, "example", "sec-c")
    doc = CommunityDocument.loads(out)
    assert code == 0 and doc.axes == [["0", "1/4", "1/2", "3/4", "1"]]
    assert [a["v"] for a in doc.agents] == ["-x1", "x1", "-x1", "x1"]
    target = tmp_path / "j.json"
    run(capsys, "example", "sec-j", "-o", str(target))
    doc = CommunityDocument.loads(target.read_text())
    assert doc.axes[0] == ["0", "1", "2", "3", "7"] and doc.agents[0]["p"] == "min(x1/2, x2, x3)"


@pytest.mark.parametrize("text, fragment", [
    ("{", "invalid JSON"),
    ('{"dimension": 1, "axes": [["0", "1"]], "agents": [{"id": 2, "v": "x1", "p": "x1"}]}', "1..n"),
    ('{"dimension": 1, "axes": [["0", "1"]], "agents": [{"id": 1, "v": "x2", "p": "x1"}]}', ""),
    ('{"dimension": 1, "axes": [["0", "1"]], "agents": [{"id": 1, "v": "x1 +", "p": "x1"}]}', ""),
])
def test_bad_documents(tmp_path, capsys, text, fragment):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, _, err = run(capsys, "check", str(path))
    assert code == 2 and err.startswith("input error") and fragment in err


def test_unknown_condition(capsys):
    code, _, err = run(capsys, "check", "example:sec-c", "--axioms", "telepathy")
    assert code == 2 and "telepathy" in err


def test_budget_exceeded(capsys):
    code, _, err = run(capsys, "relations", "example:sec-j", "--all", "--budget", "100")
    assert code == 3 and "budget" in err
    code, _, _ = run(capsys, "check", "example:sec-j", "--axioms", "separability", "--budget", "10")
    assert code == 3


def test_parse_state():
    assert parse_state(" (1, 1/2,-3) ") == (1, 0.5, -3)
    assert parse_state("2") == (2,)
