import csv
import json
import subprocess
import sys

import pytest

from bayes_contracts.cli import main
from bayes_contracts.verify import Check, Verification


@pytest.fixture
def e1_file(tmp_path):
    path = tmp_path / "e1.json"
    path.write_text(
        json.dumps(
            {
                "schema_version": "1",
                "rewards": ["0", "1"],
                "types": [{"prob": "1", "costs": ["0", "1/2"], "dists": [["1", "0"], ["0", "1"]]}],
            }
        )
    )
    return path


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_gen_then_compare_bi_approx(tmp_path, capsys):
    inst = tmp_path / "t4.json"
    assert main(["gen", "--family", "thm4", "--rho", "1", "--out", str(inst)]) == 0
    report = tmp_path / "r.csv"
    assert main(["compare", "--instance", str(inst), "--rho", "1", "--out", str(report)]) == 0
    by_method = {r["method"]: r for r in rows(report)}
    assert by_method["types"]["utility_exact"] == "5/64"
    assert by_method["outcomes"]["utility_exact"] == "5/64"
    assert by_method["types"]["alpha_or_contract"] == "p=0;27/32;0"
    linear = by_method["linear"]["utility_exact"]
    assert linear == "1/32"
    assert by_method["ratio_opt_over_linear"]["utility_exact"] == "5/2"
    assert by_method["types"]["utility_decimal"] == "0.078125"


def test_solve_linear_e1(e1_file, tmp_path, capsys):
    out = tmp_path / "e1.csv"
    assert main(["solve", "--instance", str(e1_file), "--method", "linear", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "best_alpha: 1/2" in printed and "utility: 1/2" in printed
    (row,) = rows(out)
    assert (row["utility_exact"], row["alpha_or_contract"]) == ("1/2", "alpha=1/2")
    assert float(row["wall_time"]) >= 0
    sidecar = json.loads((tmp_path / "e1.contract.json").read_text())
    assert sidecar["payments"] == {"0": "0", "1": "1/2"}


@pytest.mark.parametrize("method", ["types", "outcomes", "brute"])
def test_solve_exact_methods(e1_file, tmp_path, method):
    out = tmp_path / "r.csv"
    assert main(["solve", "--instance", str(e1_file), "--method", method, "--out", str(out), "--no-timing"]) == 0
    (row,) = rows(out)
    assert row["utility_exact"] == "1/2" and row["wall_time"] == ""


def test_verify_linear_gap(capsys):
    assert main(["verify", "--family", "thm1", "--ell", "4"]) == 0
    out = capsys.readouterr().out
    # 4 * 2^-8 / N and 2 * 2^-8 / N with N = 85/64
    assert "1/85 >= 1/85" in out and "<= 1/170" in out and out.strip().endswith("PASS")


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--family", "thm4", "--rho", "2"],
        ["verify", "--family", "is-complete", "--vertices", "4"],
        ["verify", "--family", "lc-complete", "--rho", "1"],
        ["verify", "--family", "bi-approx", "--rho", "4", "--seed", "1"],
    ],
)
def test_verify_families_pass(argv, capsys):
    assert main(argv) == 0
    assert capsys.readouterr().out.strip().endswith("PASS")


def test_verify_label_cover_file(tmp_path, capsys):
    path = tmp_path / "lc.json"
    path.write_text(json.dumps({"edges": [[0, 0], [1, 0]], "labels": 2, "constraints": [[1, 0], [0, 1]]}))
    assert main(["verify", "--family", "lc-complete", "--rho", "1", "--labelcover", str(path)]) == 0


def test_gen_families(tmp_path):
    edges = tmp_path / "g.txt"
    edges.write_text("0 1\n1 2\n")
    cases = [
        ["--family", "thm1", "--ell", "3"],
        ["--family", "graph", "--graph", str(edges), "--contract-out", str(tmp_path / "gc.json")],
        ["--family", "labelcover", "--rho", "1", "--contract-out", str(tmp_path / "lc.json")],
        ["--family", "random", "--seed", "1", "--types", "2", "--actions", "2", "--outcomes", "2"],
    ]
    for case in cases:
        assert main(["gen", *case, "--out", str(tmp_path / "x.json")]) == 0
    assert json.loads((tmp_path / "gc.json").read_text())["payments"]


def test_exit_codes(e1_file, tmp_path, capsys):
    out = str(tmp_path / "r.csv")
    with pytest.raises(SystemExit) as info:
        main(["solve", "--bogus"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["verify", "--family", "nope"])
    assert info.value.code == 1
    assert main(["gen", "--family", "thm1", "--out", out]) == 1
    assert main(["solve", "--instance", str(e1_file), "--method", "grid", "--out", out]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(e1_file.read_text().replace('"1/2"', '"3/2"'))
    assert main(["solve", "--instance", str(bad), "--method", "types", "--out", out]) == 2
    assert "cost-range" in capsys.readouterr().err
    assert main(["solve", "--instance", str(tmp_path / "none.json"), "--method", "types", "--out", out]) == 2
    assert main(["solve", "--instance", str(e1_file), "--method", "types", "--cap", "1", "--out", out]) == 3
    assert main(["compare", "--instance", str(e1_file), "--rho", "2", "--cap", "1", "--out", out]) == 3


def test_failed_check_renders_fail():
    v = Verification("demo", [Check("x >= y", 0, ">=", 1)])
    assert not v.passed and v.render().endswith("FAIL") and "VIOLATED" in v.render()


def test_console_entry_point(e1_file, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "bayes_contracts", "solve", "--instance", str(e1_file),
         "--method", "outcomes", "--out", str(tmp_path / "r.csv")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "utility: 1/2" in proc.stdout


def test_report_file_is_optional(e1_file, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["solve", "--instance", str(e1_file), "--method", "linear"]) == 0
    assert "best_alpha: 1/2" in capsys.readouterr().out
    assert main(["compare", "--instance", str(e1_file), "--rho", "2"]) == 0
    assert "ratio_opt_over_linear: 1 (1)" in capsys.readouterr().out
    assert sorted(p.name for p in tmp_path.iterdir()) == ["e1.json"]
