import json
import subprocess
import sys

import pytest

from simpsec import cli


def run(*args, env=None):
    p = subprocess.run([sys.executable, "-m", "simpsec", *args], capture_output=True, text=True, env=env)
    return p.returncode, p.stdout, p.stderr


def call(argv, tmp_path=None):
    out = tmp_path / "out.json"
    code = cli.main(list(argv) + ["--output", str(out)])
    return code, json.loads(out.read_text())


def test_dchar_example(tmp_path):
    code, doc = call(["dchar", "--group", "z2", "--N", "4", "--k", "2", "--lambda", "Z", "--filtration", "bete"],
                     tmp_path)
    assert code == 0 and doc["format"] == 1
    assert doc["report"]["torsion"] == [2]


def test_mh_point(tmp_path):
    _, bete = call(["mh", "--space", "point", "--r", "1", "--n", "2"], tmp_path)
    _, whole = call(["mh", "--space", "point", "--r", "1", "--n", "2", "--filtration", "whole"], tmp_path)
    assert bete["report"]["free_rank"] == 0
    assert whole["report"]["free_rank"] == 1


def test_verify_chernweil(tmp_path):
    code, doc = call(["verify", "chernweil", "--seed", "7"], tmp_path)
    assert code == 0 and doc["report"]["ok"]


@pytest.mark.parametrize("suite", ["chain", "derham", "secondary"])
def test_verify_suites(tmp_path, suite):
    code, doc = call(["verify", suite, "--seed", "1"], tmp_path)
    assert code == 0 and doc["report"]["ok"]


def test_cohomology_models(tmp_path):
    _, s = call(["cohomology", "--space", "circle"], tmp_path)
    _, w = call(["cohomology", "--space", "circle", "--model", "wmodel"], tmp_path)
    assert s["report"]["cohomology"]["1"]["group"] == "Z"
    assert w["report"]["cohomology"]["1"]["group"] == "Q"


def test_window_violation_exit_2(tmp_path):
    code, doc = call(["mh", "--space", "point", "--r", "3", "--n", "0"], tmp_path)
    assert code == 2 and doc["status"] == "invalid"


def test_bad_document_exit_2(tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text(json.dumps({"format": 1, "kind": "group", "elements": [0, 1], "table": [[0, 1]]}))
    code, doc = call(["mh", "--input", str(bad)], tmp_path)
    assert code == 2 and "table" in doc["where"]
    bad.write_text("{not json")
    code, doc = call(["mh", "--input", str(bad)], tmp_path)
    assert code == 2 and ":1:" in doc["where"]


def test_wrong_format_version(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"format": 2, "kind": "group"}))
    code, _ = call(["nerve", "--input", str(p)], tmp_path)
    assert code == 2


def test_group_document(tmp_path):
    p = tmp_path / "z3.json"
    p.write_text(json.dumps({"format": 1, "kind": "group", "elements": [0, 1, 2],
                             "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}))
    _, a = call(["cohomology", "--input", str(p), "--N", "4"], tmp_path)
    _, b = call(["cohomology", "--group", "z3", "--N", "4"], tmp_path)
    assert a["report"]["cohomology"] == b["report"]["cohomology"]


def test_complex_and_groupoid_documents(tmp_path):
    p = tmp_path / "k.json"
    p.write_text(json.dumps({"format": 1, "kind": "complex", "facets": [[0, 1], [1, 2], [0, 2]]}))
    _, doc = call(["cohomology", "--input", str(p)], tmp_path)
    assert doc["report"]["cohomology"]["1"]["group"] == "Z"
    q = tmp_path / "gd.json"
    q.write_text(json.dumps({
        "format": 1, "kind": "groupoid", "objects": ["a", "b"], "morphisms": ["1a", "1b", "f", "g"],
        "source": [["1a", "a"], ["1b", "b"], ["f", "a"], ["g", "b"]],
        "target": [["1a", "a"], ["1b", "b"], ["f", "b"], ["g", "a"]],
        "compose": [["1a", "1a", "1a"], ["1b", "1b", "1b"], ["f", "1a", "f"], ["1b", "f", "f"],
                    ["g", "1b", "g"], ["1a", "g", "g"], ["g", "f", "1a"], ["f", "g", "1b"]],
        "identities": [["a", "1a"], ["b", "1b"]]}))
    _, doc = call(["cohomology", "--input", str(q), "--N", "4"], tmp_path)
    assert [doc["report"]["cohomology"][str(n)]["group"] for n in range(4)] == ["Z", "0", "0", "0"]


def test_nerve_roundtrip(tmp_path):
    code, doc = call(["nerve", "--group", "z2", "--N", "4"], tmp_path)
    assert code == 0
    p = tmp_path / "n.json"
    p.write_text(json.dumps(doc))
    _, a = call(["dchar", "--input", str(p), "--k", "2"], tmp_path)
    _, b = call(["dchar", "--group", "z2", "--N", "4", "--k", "2"], tmp_path)
    assert a["report"] == b["report"]


def test_exactly_one_object(tmp_path):
    code, _ = call(["mh", "--space", "point", "--group", "z2"], tmp_path)
    assert code == 2


def test_threads_env():
    code, _, err = run("mh", "--space", "point", env={"SIMPSEC_THREADS": "0", "PATH": ""})
    assert code == 2 and "SIMPSEC_THREADS" in err


def test_subprocess_output_is_stable():
    a = run("xi", "--space", "circle", "--r", "1", "--n", "1")
    b = run("xi", "--space", "circle", "--r", "1", "--n", "1")
    assert a[0] == 0 and a[1] == b[1]


def test_failed_verification_exit_3(monkeypatch):
    monkeypatch.setitem(cli.SUITES, "chain", lambda rng: {"ok": False})
    doc, code = cli.run(cli.RunRequest(command="verify", suite="chain"))
    assert code == 3 and doc["status"] == "failed"


def _bundle_doc(G, base, **extra):
    doc = {"format": 1, "kind": "bundle", "base": base, "N": G.conn.X.N,
           "phi": [{"exponents": [1], "coeff": "1"}]}
    doc.update(extra)
    return doc


def _strs(v):
    return [str(x) for x in v]


def test_xi_builtin_bundles(tmp_path):
    code, doc = call(["xi", "--bundle", "flat:1/3"], tmp_path)
    assert code == 0 and doc["report"]["mode"] == "class"
    assert doc["report"]["cocycle"] and doc["report"]["dchar_order"] == 3
    code, doc = call(["xi", "--bundle", "torus:2"], tmp_path)
    assert code == 0 and doc["report"]["dchar_order"] is None
    assert call(["xi", "--bundle", "sphere"], tmp_path)[0] == 2
    assert call(["xi", "--bundle", "flat:1/3", "--space", "point"], tmp_path)[0] == 2


def test_xi_bundle_document_from_cochain(tmp_path):
    from simpsec import chern_weil as cw
    G = cw.torus_bundle(2)
    path = tmp_path / "b.json"
    path.write_text(json.dumps(_bundle_doc(G, {"space": "torus"}, curvature_cochain=[_strs(G.conn.c[0])])))
    code, doc = call(["xi", "--input", str(path)], tmp_path)
    assert code == 0 and doc["report"]["cocycle"]
    assert any(x != "0" for x in doc["report"]["integral_class"])


def test_xi_bundle_document_with_forms_and_lift(tmp_path):
    from simpsec import chern_weil as cw
    G = cw.torus_bundle(1)
    path = tmp_path / "b.json"
    path.write_text(json.dumps(_bundle_doc(G, {"space": "torus"}, curvature=[G.conn.F[0].to_json()],
                                           c=[_strs(G.conn.c[0])], v=[_strs(G.conn.v[0])])))
    code, doc = call(["xi", "--input", str(path)], tmp_path)
    assert code == 0 and doc["report"]["cocycle"]


def test_xi_bundle_document_flat_holonomy(tmp_path):
    from simpsec import chern_weil as cw
    G = cw.flat_circle_bundle()
    zero = ["0"] * len(G.conn.c[0])
    path = tmp_path / "b.json"
    path.write_text(json.dumps(_bundle_doc(G, {"space": "circle"}, curvature_cochain=[zero],
                                           c=[zero], v=[_strs(G.conn.v[0])])))
    code, doc = call(["xi", "--input", str(path)], tmp_path)
    assert code == 0 and doc["report"]["dchar_order"] == 3


def test_xi_bundle_document_rejects_non_integral(tmp_path):
    from simpsec import chern_weil as cw
    G = cw.torus_bundle(1)
    half = [str(x / 2) for x in G.conn.c[0]]
    path = tmp_path / "b.json"
    path.write_text(json.dumps(_bundle_doc(G, {"space": "torus"}, curvature_cochain=[half])))
    code, doc = call(["xi", "--input", str(path)], tmp_path)
    assert code == 2 and doc["status"] == "invalid"
    # presentation data that does not satisfy delta v = c - IJ(F)
    path.write_text(json.dumps(_bundle_doc(G, {"space": "torus"}, curvature_cochain=[half],
                                           c=[half], v=[["1"] + ["0"] * (len(G.conn.v[0]) - 1)])))
    assert call(["xi", "--input", str(path)], tmp_path)[0] == 2
