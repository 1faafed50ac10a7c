import json
import os
import subprocess
import sys

import pytest

from spkahler import fixtures as F
from spkahler.cli import main
from spkahler.exact_linalg import Matrix
from spkahler.serialize import algebra_from_dict, algebra_to_dict, dumps, matrix_from_rows, matrix_to_rows


def run(*args, env=None, cwd=None):
    full_env = dict(os.environ)
    full_env.pop("SK_FIXTURE_DIR", None)
    full_env.update(env or {})
    p = subprocess.run([sys.executable, "-m", "spkahler", *args], capture_output=True,
                       env=full_env, cwd=cwd)
    return p.returncode, p.stdout.decode(), p.stderr.decode()


def load(path, key=None):
    d = json.loads(open(path, encoding="utf-8").read())
    return algebra_from_dict(d[key] if key else d)


# ---------------------------------------------------------------- verify

def test_verify_pass():
    code, out, _ = run("verify", "fixture:g1_dim4")
    assert code == 0
    assert "certified" in out.splitlines() and "signature (2,2)" in out


def test_verify_semantic_fail():
    code, out, _ = run("verify", "fixture:neg_affR_1")
    assert code == 1
    fails = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert len(fails) == 1 and fails[0].startswith("FAIL one_cocycle")


def test_verify_parse_fail(tmp_path):
    d = json.loads(dumps({"dim": 2, "omega": [["0", "1/0"], ["-1", "0"]], "j": [["0", "-1"], ["1", "0"]]}))
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    code, out, err = run("verify", str(p))
    assert code == 2 and out == "" and "ParseError" in err


@pytest.mark.parametrize("content", ["{", '{"dim": 2, "omega": [[0, 1.5], [-1, 0]], "j": [[0,-1],[1,0]]}', "[]"])
def test_verify_malformed_files(tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    assert run("verify", str(p))[0] == 2


def test_verify_missing_file(tmp_path):
    assert run("verify", str(tmp_path / "nope.json"))[0] == 2
    assert run("verify", "fixture:no_such")[0] == 2
    assert run("verify", "--fixture", "no_such")[0] == 2


def test_verify_deterministic():
    for fmt in ("text", "structured"):
        first = run("verify", "fixture:g2_dim6", "--format", fmt)
        second = run("verify", "fixture:g2_dim6", "--format", fmt)
        assert first == second


def test_verify_structured(tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run("verify", "fixture:ga_dim6_1", "--format", "structured", "--out", str(out))
    assert code == 0 and stdout == ""
    rep = json.loads(out.read_text())
    assert rep["tool"] == "spkahler" and rep["certified"]
    assert len(rep["inputs_sha256"][0]) == 64
    assert rep["derived"] == {"signature": [4, 2], "flat_special": False, "unimodular": True}
    assert [it["axiom"] for it in rep["items"]][0] == "antisymmetry"


def test_verify_registry_flag():
    assert run("verify", "--fixture", "ga_dim6(7/3)")[0] == 0
    assert run("verify", "--fixture", "neg_r2_connection")[0] == 1


def test_fixture_dir_override(tmp_path):
    assert run("fixtures", "export", str(tmp_path), "g3_dim4")[0] == 0
    path = tmp_path / "g3_dim4.json"
    d = json.loads(path.read_text())
    d["product"] = []
    path.write_text(json.dumps(d))
    assert run("verify", "fixture:g3_dim4", env={"SK_FIXTURE_DIR": str(tmp_path)})[0] == 1
    assert run("verify", "fixture:g3_dim4")[0] == 0


def test_export_byte_stable(tmp_path):
    assert run("fixtures", "export", str(tmp_path))[0] == 0
    for name in F.SHIPPED:
        stem = F.file_stem(name)
        text = (tmp_path / f"{stem}.json").read_text()
        assert dumps(json.loads(text)) == text
        a = algebra_from_dict(json.loads(text))
        assert dumps(algebra_to_dict(a)) == text


def test_fixtures_list():
    code, out, _ = run("fixtures", "list")
    assert code == 0 and "g1_dim4" in out.split() and "ga_dim6(...)" in out.split()


# ---------------------------------------------------------------- construct

def test_construct_cotangent_matches_g1(tmp_path):
    out = tmp_path / "c.json"
    code, _, _ = run("construct", "cotangent", "fixture:affR_lorentz", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["certified"]
    fixture = F.get("g1_dim4")
    assert load(out).change_basis(fixture.basis_change) == fixture.data


def test_construct_cotangent_needs_metric():
    assert run("construct", "cotangent", "fixture:g1_dim4")[0] == 2


def test_construct_double_ext(tmp_path):
    dfile = tmp_path / "d.json"
    dfile.write_text(dumps({"derivation": matrix_to_rows(F.d_a(1))}))
    out = tmp_path / "g.json"
    code, _, _ = run("construct", "double-ext", "fixture:g3_dim4", "--derivation", str(dfile), "--out", str(out))
    assert code == 0
    assert load(out) == F.get("ga_dim6(1)").data


def test_construct_double_ext_inline_and_errors():
    code, out, _ = run("construct", "double-ext", "--fixture", "model(1)", "--derivation", "0,-1;1,0")
    assert code == 0 and json.loads(out)["report"]["certified"]
    code, _, err = run("construct", "double-ext", "fixture:g3_dim4", "--derivation", "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,1")
    assert code == 1 and "NotSymplecticDerivation" in err
    bad = ";".join(",".join(x for x in row) for row in matrix_to_rows(F.d_general(1, 1, 0, 0)))
    code, _, err = run("construct", "double-ext", "fixture:g3_dim4", "--derivation", bad)
    assert code == 1 and "NotDerivation" in err


def _reps_file(tmp_path, D, n=1):
    p = tmp_path / "reps.json"
    p.write_text(dumps({"rho": [matrix_to_rows(D)] + [matrix_to_rows(Matrix.zeros(4))] * (2 * n - 1)}))
    return str(p)


def test_construct_twisted(tmp_path):
    code, out, _ = run("construct", "twisted", "fixture:g3_dim4", "fixture:model_1",
                       "--reps", _reps_file(tmp_path, F.d_a(1)))
    assert code == 0
    assert algebra_from_dict(json.loads(out)) == F.get("twisted_g3_R2n(1)").data


def test_construct_twisted_inadmissible(tmp_path):
    code, out, err = run("construct", "twisted", "fixture:g3_dim4", "fixture:model_1",
                         "--reps", _reps_file(tmp_path, F.d_general(1, 1, 0, 0)))
    assert code == 1 and out == ""
    assert "TwistConditionsFailed" in err and "Twisted1 failed at (x1=e1" in err


# ---------------------------------------------------------------- solve / reduce

def test_solve_derivations_g3():
    code, out, _ = run("solve-derivations", "fixture:g3_dim4", "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert doc["dimension"] == 1 and doc["sp_commutant_dimension"] == 4
    D = matrix_from_rows(doc["basis"][0])
    ref = F.d_a(1)
    scale = next(D[r, c] / ref[r, c] for r in range(4) for c in range(4) if ref[r, c])
    assert D == ref * scale


def test_solve_derivations_model2_and_failure():
    code, out, _ = run("solve-derivations", "fixture:model_2")
    assert code == 0 and "dimension 4" in out.splitlines()
    assert run("solve-derivations", "fixture:neg_affR_1")[0] == 1


def test_reduce_line_and_compose(tmp_path):
    red = tmp_path / "red.json"
    code, _, _ = run("reduce", "fixture:ga_dim6_1", "--line", "e", "--out", str(red))
    assert code == 0
    doc = json.loads(red.read_text())
    assert algebra_from_dict(doc["base"]) == F.get("g3_dim4").data
    assert matrix_from_rows(doc["derivation"]) == F.d_a(1)
    back = tmp_path / "back.json"
    code, _, _ = run("construct", "double-ext", f"{red}#base", "--derivation", f"{red}#derivation",
                     "--out", str(back))
    assert code == 0
    ga = F.get("ga_dim6(1)").data
    assert load(back) == ga.change_basis(matrix_from_rows(doc["basis"]))


def test_reduce_line_vector_form():
    code, out, _ = run("reduce", "--fixture", "dext_model_J0(1)", "--line", "0,0,0,1")
    assert code == 0
    assert algebra_from_dict(json.loads(out)["base"]) == F.get("model(1)").data


def test_reduce_ideal_and_compose(tmp_path):
    split = tmp_path / "split.json"
    code, _, _ = run("reduce", "fixture:twisted_g3_R2n_1", "--ideal", "f1,f2", "--out", str(split))
    assert code == 0
    doc = json.loads(split.read_text())
    assert algebra_from_dict(doc["a1"]) == F.get("model(1)").data
    assert algebra_from_dict(doc["a2"]) == F.get("g3_dim4").data
    tw = tmp_path / "tw.json"
    code, _, _ = run("construct", "twisted", f"{split}#a1", f"{split}#a2", "--reps", str(split), "--out", str(tw))
    assert code == 0
    a = F.get("twisted_g3_R2n(1)").data
    assert load(tw) == a.change_basis(matrix_from_rows(doc["basis"]))


def test_reduce_non_central():
    code, _, err = run("reduce", "fixture:ga_dim6_1", "--line", "e2")
    assert code == 1 and "NotBilateralIdeal" in err


def test_reduce_bad_vector():
    assert run("reduce", "fixture:ga_dim6_1", "--line", "1,2")[0] == 2


def test_main_in_process(capsys):
    assert main(["verify", "--fixture", "model(1)", "--format", "structured"]) == 0
    assert json.loads(capsys.readouterr().out)["certified"]
    assert main(["verify"]) == 2
    assert main(["bogus"]) == 2
