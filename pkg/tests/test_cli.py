import json
import subprocess
import sys

import pytest

from lexwrap import cli
from lexwrap.pipeline import TheoremViolation, VerificationReport
from oracles import QUAD, sphere_cloud


@pytest.fixture
def quad_file(tmp_path):
    path = tmp_path / "quad.xyz"
    path.write_text("".join(f"{x} {y}\n" for x, y in QUAD))
    return path


@pytest.fixture
def sphere_file(tmp_path):
    path = tmp_path / "sphere.csv"
    X = sphere_cloud(40)
    path.write_text("x,y,z\n" + "".join(",".join(repr(float(c)) for c in X[v]) + "\n" for v in range(len(X))))
    return path


def test_reconstruct_writes_outputs(quad_file, tmp_path, capsys):
    out = tmp_path / "deep" / "out"
    assert cli.main(["reconstruct", str(quad_file), "--out", str(out)]) == 0
    assert {p.name for p in out.iterdir()} == {"barcode.json", "cycle.off", "cycle.obj", "wrap.off", "report.json"}
    assert "containment True" in capsys.readouterr().out
    off = (out / "cycle.off").read_text().splitlines()
    assert sum(line.startswith("2 ") for line in off) == 4


def test_reconstruct_sphere_surface(sphere_file, tmp_path):
    assert cli.main(["reconstruct", str(sphere_file), "--dim", "2", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["watertight"] is True and report["metadata"]["ambient_dim"] == 3


def test_output_directory_from_environment(quad_file, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert cli.main(["barcode", str(quad_file)]) == 0
    bars = json.loads((tmp_path / "env" / "barcode.json").read_text())
    assert sum(b["death"] is None for b in bars) == 1


def test_verify_writes_summary(quad_file, tmp_path, capsys):
    assert cli.main(["verify", str(quad_file), "--out", str(tmp_path), "--r-grid", "0.3,0.505,1"]) == 0
    summary = json.loads((tmp_path / "verify.json").read_text())
    assert summary["ok"] and summary["radii"] == 3
    assert "lex_min_in_wrap" in capsys.readouterr().out


def test_verify_parallel(quad_file, tmp_path):
    assert cli.main(["verify", str(quad_file), "--out", str(tmp_path), "--jobs", "2"]) == 0


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus", "x.xyz"],
        ["reconstruct", "{quad}", "--dim", "5"],
        ["reconstruct", "{quad}", "--field", "4"],
        ["verify", "{quad}", "--r-grid", "a,b"],
        ["barcode", "{quad}", "--format", "ply"],
    ],
)
def test_usage_errors_exit_1(argv, quad_file, tmp_path):
    argv = [a.format(quad=quad_file) for a in argv] + ["--out", str(tmp_path)] * bool(argv)
    assert cli.main(argv) == 1


def test_data_errors_exit_2(tmp_path):
    assert cli.main(["barcode", str(tmp_path / "missing.xyz"), "--out", str(tmp_path)]) == 2
    bad = tmp_path / "bad.xyz"
    bad.write_text("0 0\n1 x\n")
    assert cli.main(["barcode", str(bad), "--out", str(tmp_path)]) == 2
    flat = tmp_path / "flat.xyz"
    flat.write_text("0 0\n4 0\n2 1\n")
    assert cli.main(["reconstruct", str(flat), "--out", str(tmp_path)]) == 2


def test_theorem_violations_exit_3(quad_file, tmp_path, monkeypatch, capsys):
    def broken(*a, **k):
        raise TheoremViolation("cycle escaped", [(0, 1)])

    monkeypatch.setattr(cli, "reconstruct", broken)
    assert cli.main(["reconstruct", str(quad_file), "--out", str(tmp_path)]) == 3

    def failing(*a, **k):
        rep = VerificationReport()
        rep.lex_min_in_wrap.add(False)
        rep.failures.append({"check": "lex_min_in_wrap", "witness": [[0, 1]]})
        return rep

    monkeypatch.setattr(cli, "verify_theorems", failing)
    capsys.readouterr()
    assert cli.main(["verify", str(quad_file), "--out", str(tmp_path)]) == 3
    err = capsys.readouterr().err.strip().splitlines()
    assert json.loads(err[-1])["witness"] == [[0, 1]]


def test_console_entry_point(quad_file, tmp_path):
    done = subprocess.run(
        [sys.executable, "-m", "lexwrap.cli", "barcode", str(quad_file), "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert done.returncode == 0 and (tmp_path / "barcode.json").exists()
