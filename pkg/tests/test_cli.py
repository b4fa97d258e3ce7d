import io
import json
import os

import pytest

from zptowers.cli import load_tower, main

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
TOWERS = os.path.join(ROOT, "towers")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def tower_path(name):
    return os.path.join(TOWERS, name)


def write(tmp_path, doc, name="t.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_reduce_output_reloads_to_same_form(tmp_path):
    code, text = run("reduce", tower_path("gm_twisted_p3.json"))
    assert code == 0
    doc = json.loads(text)
    again = write(tmp_path, doc)
    code2, text2 = run("reduce", again)
    assert code2 == 0 and json.loads(text2) == doc
    red, psi = load_tower(doc)
    assert psi.order == 2


def test_reduce_applies_standard_form(tmp_path):
    path = write(tmp_path, {"schema": 1, "p": 3, "precision": 3, "curve": {"S": ["inf"]},
                            "f": {"inf": {"3": 1, "2": 1}}})
    doc = json.loads(run("reduce", path)[1])
    assert doc["reduced"]["points"]["inf"]["coefficients"] == {"1": [1], "2": [1]}


def test_ram_report():
    code, text = run("ram", tower_path("cubic_p2.json"), "--depth", "3")
    assert code == 0
    doc = json.loads(text)
    assert doc["points"]["inf"]["breaks"] == ["3", "6", "12"]
    assert doc["d"] == "3"


def test_verify_is_deterministic():
    a = run("--workers", "1", "verify", tower_path("cubic_p2.json"), "--levels", "1-2")
    b = run("--workers", "3", "verify", tower_path("cubic_p2.json"), "--levels", "1-2")
    assert a == b
    assert a[0] == 0
    verdicts = json.loads(a[1])["verdicts"]
    assert verdicts["thm-1.3-touching"]["status"] == "pass"
    assert verdicts["thm-1.4-equality"]["status"] == "pass"


def test_verify_twisted_and_equichar():
    code, text = run("verify", tower_path("gm_twisted_p3.json"), "--levels", "1")
    doc = json.loads(text)
    assert code == 0
    assert doc["verdicts"]["thm-1.6/1.7-twisted"]["status"] == "pass"
    assert doc["twisted"][0]["factorization"] is True
    code, text = run("verify", tower_path("gauss_p3.json"), "--char", "equichar:24", "--order", "6")
    doc = json.loads(text)
    assert code == 0
    assert doc["verdicts"]["thm-1.10-equichar"]["status"] == "pass"
    assert doc["verdicts"]["cor-1.11-factor-degree"]["status"] == "pass"


def test_newton_outputs(tmp_path):
    svg, csv = tmp_path / "np.svg", tmp_path / "np.csv"
    code, text = run("newton", tower_path("gauss_p3.json"), "--char", "m:2", "--svg", str(svg),
                     "--csv", str(csv))
    assert code == 0
    assert "legend" in text
    assert svg.read_text().startswith("<svg")
    rows = csv.read_text().splitlines()
    assert rows[0] == "index,np_slope,hp_slope"
    assert rows[1:] == [f"{i},{i},{i}" for i in range(1, 6)]


def test_newton_json():
    code, text = run("newton", tower_path("cubic_p2.json"), "--char", "m:2", "--json")
    doc = json.loads(text)
    assert code == 0
    assert doc["np_slopes"] == ["1/2", "1/2", "1", "3/2", "3/2"]
    assert doc["hp_slopes"] == ["1/3", "2/3", "1", "4/3", "5/3"]
    assert doc["equal"] is False
    assert doc["dominance"] is True


def test_hodge_and_lfun():
    code, text = run("hodge", tower_path("gm_twisted_p3.json"), "--twisted", "--json")
    assert code == 0 and json.loads(text)["slopes_below_e"] == ["1", "1"]
    code, text = run("lfun", tower_path("gauss_p3.json"), "--char", "m:1")
    assert code == 0 and json.loads(text)["coefficients"][1] == [3, 2]


def test_sweep_reports_trend():
    code, text = run("sweep", tower_path("cubic_p2.json"), "--max-level", "3")
    sweep = json.loads(text)["sweep"]
    assert code == 0
    assert sweep["discrepancy"] == ["1/2", "1/4", "1/8"]
    assert sweep["discrepancy_strictly_decreasing"] is True


def test_corpus_is_seeded():
    a = run("--seed", "7", "corpus", "-p", "3", "--count", "3")
    b = run("--seed", "7", "corpus", "-p", "3", "--count", "3")
    c = run("--seed", "8", "corpus", "-p", "3", "--count", "3")
    assert a == b and a != c
    assert len(json.loads(a[1])) == 3


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["lfun", "missing.json", "--char", "m:1"],
    ["lfun", "TOWER", "--char", "m:0"],
    ["lfun", "TOWER", "--char", "oops"],
    ["--budget", "10", "lfun", "TOWER", "--char", "m:3"],
    ["verify", "TOWER", "--levels", "3-1"],
])
def test_operational_errors_exit_one(argv):
    argv = [tower_path("cubic_p2.json") if a == "TOWER" else a for a in argv]
    assert main(argv, io.StringIO()) == 1


@pytest.mark.parametrize("doc", [
    {"schema": 2, "p": 3, "precision": 3, "curve": {"S": ["inf"]}, "f": {}},
    {"schema": 1, "p": 4, "precision": 3, "curve": {"S": ["inf"]}, "f": {"inf": {"1": 1}}},
    {"schema": 1, "p": 3, "precision": 3, "curve": {"S": ["inf"]}, "f": {"0": {"1": 1}}},
    {"schema": 1, "p": 3, "precision": 2, "curve": {"S": ["inf"]}, "f": {"inf": {"1": 100}}},
    {"schema": 1, "p": 3, "precision": 3, "curve": {"S": ["inf"]}, "f": {"inf": {"0": 1}}},
])
def test_schema_and_semantic_errors_exit_one(tmp_path, doc):
    assert main(["reduce", write(tmp_path, doc)], io.StringIO()) == 1


def test_nonzero_genus_refused_for_l_functions(tmp_path):
    doc = {"schema": 1, "p": 3, "precision": 3, "curve": {"S": ["inf"]}, "f": {"inf": {"2": 1}},
           "declared": {"genus": 1}}
    assert main(["lfun", write(tmp_path, doc), "--char", "m:1"], io.StringIO()) == 1


def test_falsified_dominance_exits_two(monkeypatch):
    import zptowers.cli as cli

    monkeypatch.setattr(cli, "dominates", lambda a, b: False)
    code, _ = run("newton", tower_path("gauss_p3.json"), "--char", "m:1")
    assert code == 2


def test_falsified_verdict_exits_two(monkeypatch):
    import zptowers.report as report

    monkeypatch.setattr(report, "dominates", lambda a, b: False)
    code, text = run("verify", tower_path("gauss_p3.json"), "--levels", "1")
    assert code == 2
    assert json.loads(text)["verdicts"]["thm-1.3-touching"]["status"] == "fail"
