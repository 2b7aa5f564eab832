import json

import pytest

from zkstokes.cli import main
from zkstokes.labelling import tautological_labelling
from zkstokes.simplicial import SimplicialComplex, pseudomanifold_analysis


def run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main(list(argv) + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_gen_join(tmp_path):
    code, doc = run(tmp_path, "gen", "join", "--k", "3", "--m", "2")
    assert code == 0
    X, action = SimplicialComplex.from_json(doc)
    assert len(X.vertices) == 6 and len(X.edges()) == 9 and action is not None


def test_gen_alt(tmp_path):
    code, doc = run(tmp_path, "gen", "alt", "--k", "2", "--m", "3", "--d", "1")
    assert code == 0 and len(doc["facets"]) == 6


def test_gen_and_verify_sphere(tmp_path):
    sphere = tmp_path / "s.json"
    assert main(["gen", "ezk-sphere", "--k", "3", "--d", "2", "--out", str(sphere)]) == 0
    code, doc = run(tmp_path, "verify", "sphere", "--in", str(sphere))
    assert code == 0 and doc["verdict"] == "pass"

    bad = json.loads(sphere.read_text())
    terms = bad["chains"][2]["terms"]
    terms[0]["coeff"] += 1
    corrupted = tmp_path / "bad.json"
    corrupted.write_text(json.dumps(bad))
    code, doc = run(tmp_path, "verify", "sphere", "--in", str(corrupted))
    assert code == 1 and doc["certificate"]["first_failure"] == 2


def test_verify_chainmap(tmp_path):
    code, doc = run(tmp_path, "verify", "chainmap", "--k", "4", "--max-degree", "4")
    assert code == 0 and doc["values"]["checked"] == 4 + 16 + 64 + 256


def test_verify_pm_octahedron(tmp_path):
    oct_ = tmp_path / "oct.json"
    main(["gen", "join", "--k", "2", "--m", "3", "--out", str(oct_)])
    code, doc = run(tmp_path, "verify", "pm", "--in", str(oct_))
    assert code == 0
    assert doc["values"]["closed"] and doc["values"]["orientable"]


def test_labelling_and_stokes(tmp_path):
    cx = tmp_path / "oct.json"
    lab = tmp_path / "l.json"
    chain = tmp_path / "c.json"
    main(["gen", "join", "--k", "2", "--m", "3", "--out", str(cx)])
    assert main(["gen", "labelling", "--in", str(cx), "--k", "2", "--seed", "3", "--colors", "4", "--out", str(lab)]) == 0
    assert run(tmp_path, "verify", "admissible", "--in", str(cx), "--labelling", str(lab))[0] == 0
    assert run(tmp_path, "verify", "equivariant", "--in", str(cx), "--labelling", str(lab))[0] == 0
    X, _ = SimplicialComplex.from_json(json.loads(cx.read_text()))
    o = pseudomanifold_analysis(X).orientation_chain
    chain.write_text(json.dumps(o.to_json()))
    code, doc = run(tmp_path, "theorem", "stokes", "--chain", str(chain), "--labelling", str(lab), "--complex", str(cx))
    assert code == 0 and doc["values"]["equal"]


def test_non_equivariant_labelling_fails(tmp_path):
    cx = tmp_path / "k33.json"
    main(["gen", "join", "--k", "3", "--m", "2", "--out", str(cx)])
    X, _ = SimplicialComplex.from_json(json.loads(cx.read_text()))
    l = tautological_labelling(3, X)
    l.labels = {v: (0, c) for v, (_, c) in l.labels.items()}
    lab = tmp_path / "l.json"
    lab.write_text(json.dumps(l.to_json()))
    code, doc = run(tmp_path, "verify", "equivariant", "--in", str(cx), "--labelling", str(lab))
    assert code == 1 and doc["values"]["violations"] == 6


def test_theorem_tucker(tmp_path):
    code, doc = run(tmp_path, "theorem", "tucker", "--k", "3", "--d", "1", "--seeds", "10")
    assert code == 0
    alphas = doc["values"]["alpha"]
    assert len(alphas) == 10 and all(a % 3 == 1 for seq in alphas for a in seq)


def test_theorem_tucker_with_subdivision(tmp_path):
    code, doc = run(tmp_path, "theorem", "tucker", "--k", "2", "--d", "0", "--rounds", "1", "--seeds", "3")
    assert code == 0 and all(c % 2 == 1 for c in doc["values"]["counts"])


def test_theorem_retract_dold_invariance(tmp_path):
    assert run(tmp_path, "theorem", "retract", "--k", "2", "--d", "1", "--m", "3")[1]["values"]["match"]
    assert run(tmp_path, "theorem", "dold", "--k", "2", "--m", "3", "--n", "2")[0] == 0
    assert run(tmp_path, "theorem", "invariance", "--k", "2", "--d", "2", "--seeds", "4")[0] == 0


def test_homology_command(tmp_path):
    cx = tmp_path / "k33.json"
    main(["gen", "join", "--k", "3", "--m", "2", "--out", str(cx)])
    code, doc = run(tmp_path, "homology", "--in", str(cx), "--ring", "Zmod:3")
    assert code == 0
    assert doc["reduced_homology"] == [{"rank": 0, "torsion": []}, {"rank": 4, "torsion": []}]


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "join", "--k", "3"],
        ["verify", "sphere"],
        ["verify", "sphere", "--in", "/nonexistent.json"],
        ["theorem", "nonsense"],
        ["homology", "--in", "x", "--ring", "Q"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_selftest_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["selftest", "--out", str(a)]) == 0
    assert main(["selftest", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["verdict"] == "pass"
