import json
import subprocess
import sys

import pytest

from pretzelkit.cancellative import cyclic_group
from pretzelkit.cli import main
from pretzelkit.graphs import isomorphic, parse_graph
from known_graphs import C2_PRETZELS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def graph_part(text):
    return parse_graph(text.split("\n", 1)[1])


def test_pretzel_dot(capsys):
    code, out, err = run(capsys, "pretzel", "x(x^2)^+x", "--monoid", "c3", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    assert out.count("->") == 3 and err.strip() == "3 vertices, 3 edges"


def test_pretzel_free_identity(capsys):
    code, out, err = run(capsys, "pretzel", "1", "--free")
    assert code == 0 and "vertices: 1\n" in out and err.startswith("1 vertices, 0 edges")


def test_pretzel_x_cubed(capsys):
    code, out, _ = run(capsys, "pretzel", "x^3", "--monoid", "c2")
    assert code == 0 and isomorphic(graph_part(out), C2_PRETZELS[3])


def test_pretzel_to_file(capsys, tmp_path):
    path = tmp_path / "p.txt"
    code, out, _ = run(capsys, "pretzel", "x^2", "--monoid", "c2", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("oracle: c2\n")


@pytest.mark.parametrize("args, expected", [
    (("x^2", "(x^2)^+", "--monoid", "c2"), "equal"),
    (("x", "x^3", "--monoid", "c2"), "not-equal"),
    (("x^+x", "x", "--free"), "equal"),
])
def test_eq(capsys, args, expected):
    code, out, _ = run(capsys, "eq", *args)
    assert code == 0 and out.strip() == expected


def test_enum_counts(capsys):
    code, out, err = run(capsys, "enum", "--monoid", "c2", "--cap", "100")
    assert code == 0 and err.strip() == "5 elements" and out.startswith("elements: 5")
    code, _, err = run(capsys, "enum", "--monoid", "c3", "--cap", "100")
    assert code == 0 and err.strip() == "10 elements"


def test_enum_free_hits_cap(capsys):
    code, out, err = run(capsys, "enum", "--free", "--cap", "50")
    assert code == 1 and out == "" and "cap exceeded at 50" in err


@pytest.mark.parametrize("name", ["c2", "c3"])
def test_verify_passes(capsys, name):
    code, out, _ = run(capsys, "verify", "--monoid", name, "--trees", "10")
    assert code == 0, out
    assert "FAIL" not in out and "cayley embedding: pass" in out
    if name == "c3":
        assert "inverse: no" in out and "left ample: no" in out


def test_verify_corrupted_file(capsys, tmp_path):
    doc = json.loads(cyclic_group(2).to_json())
    doc["table"] = [["1", "x"], ["1", "x"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "verify", "--monoid", str(path))
    assert code == 1 and "error:" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["pretzel", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["pretzel", "x", "--free", "--monoid", "c2"])
    assert exc.value.code == 2


def test_bad_term_and_missing_file(capsys):
    code, _, err = run(capsys, "pretzel", "x(", "--free")
    assert code == 1 and "error:" in err
    code, _, err = run(capsys, "pretzel", "x", "--monoid", "/nonexistent.json")
    assert code == 1 and "error:" in err


def test_output_is_deterministic(capsys):
    first = run(capsys, "enum", "--monoid", "c3")
    second = run(capsys, "enum", "--monoid", "c3")
    assert first == second
    first = run(capsys, "verify", "--monoid", "c2", "--seed", "3", "--trees", "5")
    assert first == run(capsys, "verify", "--monoid", "c2", "--seed", "3", "--trees", "5")


def test_free_matches_a_large_cycle_on_short_terms(capsys, tmp_path):
    # no idempath of length <= 6 over C7, so short terms see a trivial identity language
    path = tmp_path / "c7.json"
    path.write_text(cyclic_group(7).to_json())
    for term in ["x^+x", "x(x^2)^+x", "(xx^+)^+x^3"]:
        free = run(capsys, "pretzel", term, "--free")
        c7 = run(capsys, "pretzel", term, "--monoid", str(path))
        assert free[1].split("\n", 1)[1] == c7[1].split("\n", 1)[1]
        assert free[2] == c7[2]
    for pair in [("x^+x", "x"), ("x^2", "(x^2)^+"), ("x^2x^+", "x^2")]:
        assert run(capsys, "eq", *pair, "--free") == run(capsys, "eq", *pair, "--monoid", str(path))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pretzelkit", "eq", "x", "x^3", "--monoid", "c2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "not-equal"
