import json
import math
import subprocess
import sys

import numpy as np
import pytest

from halfline_nls import cli

C_D11 = -math.sqrt(2.0)


def run(args):
    return cli.main(args)


def test_classify_exit_codes(capsys):
    assert run(["classify", "--alpha", "1", "--omega", "1",
                "--c-re", str(C_D11)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["family"] == "FamilyD_minus"
    assert run(["classify", "--alpha", "1", "--omega", "1",
                "--c-re", str(-C_D11)]) == 3


def test_bad_input_exit_code(capsys):
    assert run(["eval", "--descriptor", "/no/such/file.json"]) == 2
    assert run(["classify", "--alpha", "1"]) == 2  # missing required flag


def test_gate_and_build_round_trip(tmp_path, capsys):
    desc = tmp_path / "desc.json"
    code = run(["build", "--alpha", "1", "--omega", "1", "--c-re", str(C_D11),
                "--output", str(desc)])
    assert code == 0
    d = json.loads(desc.read_text())
    assert d["omega"] == pytest.approx(1.0)
    assert d["poles"][0] == pytest.approx([0.0, 0.5], abs=1e-9)
    assert d["residues"][0][1] == pytest.approx(-0.41421356, abs=1e-6)


def test_build_rejects_inadmissible(tmp_path):
    out = tmp_path / "rep.json"
    code = run(["build", "--alpha", "1", "--omega", "1", "--c-re", str(-C_D11),
                "--output", str(out)])
    assert code == 3
    assert "error" in json.loads(out.read_text())


def test_eval_csv_format(tmp_path):
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps(
        {"omega": 1.0, "poles": [[0.0, 0.5]],
         "residues": [[0.0, -0.41421356237309503]]}))
    out = tmp_path / "u.csv"
    code = run(["eval", "--descriptor", str(desc), "--nx", "3", "--nt", "3",
                "--x1", "1", "--t1", "1", "--output", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "x,t,re_u,im_u"
    assert len(lines) == 1 + 3 * 3
    row = lines[1].split(",")
    assert len(row) == 4
    # 17 significant digits survive a parse round trip bit-for-bit
    assert float(row[2]) == pytest.approx(1.0, abs=1e-10)
    reformatted = f"{float(row[2]):.17g}"
    assert reformatted == row[2]


def test_eval_threads_deterministic(tmp_path):
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps(
        {"omega": 1.0, "poles": [[0.0, 0.5]],
         "residues": [[0.0, -0.41421356237309503]]}))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path, threads in [(a, "1"), (b, "4")]:
        assert run(["eval", "--descriptor", str(desc), "--nx", "5", "--nt", "4",
                    "--x1", "2", "--t1", "2", "--threads", threads,
                    "--output", str(path)]) == 0
    assert a.read_text() == b.read_text()


def test_eval_outside_quarter_plane(tmp_path):
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps(
        {"omega": 1.0, "poles": [[0.0, 0.5]], "residues": [[0.0, -0.4]]}))
    assert run(["eval", "--descriptor", str(desc), "--x0", "-1"]) == 2


def test_eval_singularity_exit_code(tmp_path):
    # pick the residue magnitude e so the stage-1 determinant 1 - |d_1|^2
    # vanishes exactly at the grid point x = 1
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps(
        {"omega": 1.0, "poles": [[0.0, 0.5]],
         "residues": [[0.0, -math.e]]}))
    code = run(["eval", "--descriptor", str(desc), "--nx", "41", "--nt", "2",
                "--x1", "2", "--t1", "0.5"])
    assert code == 4


def test_figures_written(tmp_path):
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps(
        {"omega": 1.0, "poles": [[0.0, 0.5]],
         "residues": [[0.0, -0.41421356237309503]]}))
    fig = tmp_path / "u.png"
    out = tmp_path / "u.csv"
    assert run(["eval", "--descriptor", str(desc), "--nx", "4", "--nt", "4",
                "--output", str(out), "--figure", str(fig)]) == 0
    assert fig.stat().st_size > 1000


def test_verify_round_trip(tmp_path, capsys):
    desc = tmp_path / "desc.json"
    assert run(["build", "--alpha", "1", "--omega", "1", "--c-re", str(C_D11),
                "--output", str(desc)]) == 0
    rep = tmp_path / "rep.json"
    assert run(["verify", "--descriptor", str(desc), "--alpha", "1",
                "--omega", "1", "--c-re", str(C_D11), "--nx", "6", "--nt", "5",
                "--output", str(rep)]) == 0
    d = json.loads(rep.read_text())
    assert d["pass"] is True
    assert d["max_pde_residual"] < 1e-5


def test_eval_closed_two_pole(capsys):
    assert run(["eval-closed", "--example", "two-pole", "--nx", "3", "--nt",
                "3", "--x1", "1", "--t1", "1"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "x,t,re_u,im_u"
    from halfline_nls.closedform import u_section5

    x, t, re, im = map(float, lines[1].split(","))
    assert complex(re, im) == pytest.approx(u_section5(x, t), abs=1e-12)


def test_spectral_csv(capsys):
    assert run(["spectral", "--alpha", "1", "--omega", "1", "--c-re",
                str(C_D11), "--k-min", "1.1", "--k-max", "1.3", "--n", "3"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0].startswith("k_re,k_im,re_qb")
    assert len(lines) == 4


def test_poles_json(capsys):
    assert run(["poles", "--alpha", "1", "--omega", "1",
                "--c-re", str(C_D11)]) == 0
    d = json.loads(capsys.readouterr().out)
    assert len(d["upper"]) == 1 and d["real"] == []
    (k, r), = d["upper"]
    assert k == pytest.approx([0.0, 0.5], abs=1e-9)


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "halfline_nls.cli", "classify", "--alpha", "1",
         "--omega", "1", "--c-re", str(C_D11)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "EventuallyAdmissible"
