from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from aperiodic.cli import main
from aperiodic.quadfield import golden_field, parse_elem

K = golden_field()
TAU = K(1, 1) / 2
NEG_TAU = ["--family", "minus", "--p", "1", "--sign", "minus", "--digits", "0..1"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


def test_spectrum_decide_golden(capsys):
    code, rep, _ = run_json(capsys, "spectrum", "decide", *NEG_TAU)
    assert code == 0 and rep["bdl"] is True and rep["reason"] == "1 | 1 (beta' < 0)"
    assert parse_elem(rep["xi"]["exact"]) == 1 / TAU + TAU**-3


def test_spectrum_decide_not_bdl(capsys):
    code, rep, _ = run_json(capsys, "spectrum", "decide", "--family", "minus", "--p", "2", "--sign", "minus", "--digits", "0..3")
    assert code == 0 and rep["bdl"] is False and rep["reason"] == "2 ∤ 3 (beta' < 0)" and rep["xi"] is None


def test_spectrum_decide_empirical(capsys):
    code, rep, _ = run_json(capsys, "spectrum", "decide", *NEG_TAU, "--empirical", "20000")
    assert code == 0 and rep["discrepancy"]["classification"] == "LooksBounded"


def test_spectrum_gen_with_oracle(capsys, tmp_path):
    out = tmp_path / "pts.csv"
    code, rep, _ = run_json(
        capsys, "spectrum", "gen", *NEG_TAU, "--range=-10,10", "--oracle", "--max-degree", "10",
        "--out", str(out), "--word-out", str(tmp_path / "w.txt"),
    )
    assert code == 0
    assert rep["oracle"]["other_differences"] == [] and rep["oracle"]["boundary_differences"] == []
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == rep["count"]
    assert (tmp_path / "pts.direct.csv").exists()
    assert {parse_elem(g["exact"]) for g in rep["gaps"]} == {K(1), 1 / TAU}
    assert set((tmp_path / "w.txt").read_text().strip()) <= {"A", "B", "|"}


def test_spectrum_negative_digits(capsys):
    code, rep, _ = run_json(capsys, "spectrum", "decide", "--family", "minus", "--p", "1", "--sign", "plus", "--digits=-1..1")
    assert code == 0 and rep["bdl"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "decide", "--family", "minus", "--p", "2", "--sign", "minus", "--digits", "0..1"],  # #D < beta
        ["spectrum", "decide", "--family", "minus", "--p", "1", "--sign", "plus", "--digits", "0..1"],
        ["spectrum", "gen", *NEG_TAU, "--oracle", "--max-degree", "14"],
        ["cap", "gen", "--eps", "1", "--eta", "sqrt(5)", "--window", "0,1"],
        ["cap", "transform", "--eps", "1/2 - 1/2*sqrt(5)", "--eta", "1/2 + 1/2*sqrt(5)", "--window", "0,1", "--matrix", "2,0,0,1"],
        ["analyze-morphism", "A->AX"],
        ["--precision", "5", "spectrum", "decide", *NEG_TAU],
        ["spectrum", "decide"],
        ["witness", "--points", "/nonexistent/file.csv", "--xi", "1"],
    ],
)
def test_input_errors_exit_1(capsys, argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    capsys.readouterr()
    assert code == 1


def test_spectrum_unsafe_degree(capsys):
    code, rep, _ = run_json(capsys, "spectrum", "gen", *NEG_TAU, "--range=-2,2", "--oracle", "--max-degree", "13", "--unsafe")
    assert code == 0 and rep["oracle"]["max_degree"] == 13


def test_cap_decide_and_disagreement_exit(capsys):
    base = ["cap", "decide", "--eps", "3/2 - 1/2*sqrt(5)", "--eta", "3/2 + 1/2*sqrt(5)"]
    code, rep, _ = run_json(capsys, *base, "--window", "0,1", "--empirical", "100000")
    assert code == 0 and rep["bdl"] is True and rep["discrepancy"]["classification"] == "LooksBounded"
    code, rep, _ = run_json(capsys, *base, "--window", "0,1/2", "--empirical", "100000")
    assert rep["bdl"] is False
    assert rep["discrepancy"]["classification"] == "LooksUnbounded"
    assert code == 0  # symbolic and empirical agree
    # empirical contradiction with the symbolic answer is reported with exit 2
    from aperiodic import cli

    assert cli._disagrees(True, cli.bdl.classify_boundedness((1, 2, 4, 8, 16)))


def test_cap_transform(capsys):
    code, rep, _ = run_json(
        capsys, "cap", "transform", "--eps", "3/2 - 1/2*sqrt(5)", "--eta", "3/2 + 1/2*sqrt(5)",
        "--window", "0,1", "--matrix", "0,-1,1,2",
    )
    assert code == 0
    assert parse_elem(rep["eps"]["exact"]) == TAU.conjugate()
    assert parse_elem(rep["window"][1]["exact"]) == TAU**2
    assert parse_elem(rep["scale"]["exact"]) == TAU**2


def test_analyze_morphism_verdicts(capsys):
    code, rep, _ = run_json(capsys, "analyze-morphism", "A->AAB;B->AB", "--radius", "5000")
    assert code == 0 and rep["verdict"] == "Balanced" and rep["incidence_matrix"] == [[2, 1], [1, 1]]
    assert rep["discrepancy"]["classification"] == "LooksBounded"
    code, rep, _ = run_json(capsys, "analyze-morphism", "A->ABBA;B->AA", "--radius", "2000")
    assert code == 0 and rep["verdict"] == "NotBalanced" and rep["bdl_lengths"] is None
    assert "no eigenvalue" in rep["bdl_refused"]
    code, rep, _ = run_json(capsys, "analyze-morphism", "A->C;B->ACCCC;C->CB", "--auto-power", "--radius", "5000")
    assert code == 0 and rep["power"] == 2 and rep["seed"] == "B|C"
    assert rep["verdict"] == "NotBalanced"
    f = [float(x["float"]) for x in rep["bdl_lengths"]["f"]]
    assert abs(f[1] - 0.3489065910628247) < 1e-9


def test_discrepancy_and_witness_from_file(capsys, tmp_path):
    pts = tmp_path / "pts.csv"
    assert main(["spectrum", "gen", *NEG_TAU, "--range=-300,300", "--out", str(pts)]) == 0
    capsys.readouterr()
    xi = "-5/2 + 3/2*sqrt(5)"
    code, rep, _ = run_json(capsys, "discrepancy", "--points", str(pts), "--xi", xi, "--out", str(tmp_path / "d.csv"))
    assert code == 0 and rep["classification"] == "LooksBounded"
    code, rep, _ = run_json(capsys, "witness", "--points", str(pts), "--xi", xi, "--count", "20", "--out", str(tmp_path / "w.csv"))
    assert code == 0 and rep["pairs"] == 40 and float(rep["max_displacement"]) < 2


def test_discrepancy_plain_number_file(capsys, tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("\n".join(str(i) for i in range(-100, 101)) + "\n")
    code, rep, _ = run_json(capsys, "discrepancy", "--points", str(p), "--xi", "1", "--horizons", "5")
    assert code == 0 and rep["classification"] == "LooksBounded"


def test_grid(capsys, tmp_path):
    code, rep, _ = run_json(capsys, "grid", "--bound", "5", "--out", str(tmp_path / "g.csv"))
    assert code == 0 and rep["count"] > 0
    rows = list(csv.reader(open(tmp_path / "g.csv")))
    assert rows[0] == ["x", "y"] and len(rows) == rep["count"] + 1


def test_outputs_are_deterministic(capsys, tmp_path):
    for k in (1, 2):
        assert main(["spectrum", "gen", *NEG_TAU, "--range=-50,50", "--out", str(tmp_path / f"p{k}.csv"),
                     "--json-out", str(tmp_path / f"r{k}.json"), "--profile-out", str(tmp_path / f"d{k}.csv")]) == 0
    for name in ("p", "r", "d"):
        ext = "json" if name == "r" else "csv"
        assert (tmp_path / f"{name}1.{ext}").read_bytes() == (tmp_path / f"{name}2.{ext}").read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "aperiodic.cli", "spectrum", "decide", *NEG_TAU],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["bdl"] is True
