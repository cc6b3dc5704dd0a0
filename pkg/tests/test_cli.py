"""CLI surface: subcommands, exit codes, manifests, determinism."""

import json

import numpy as np
import pytest

from convexrange import matrices as mat
from convexrange.cli import main


@pytest.fixture
def matrix_file(tmp_path):
    path = tmp_path / "M.json"
    path.write_text(json.dumps(mat.matrix_to_json(np.diag([3.0, 2.0, 1.0]))))
    return str(path)


@pytest.fixture
def interval_file(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps(mat.matrix_to_json(np.diag([1.0, 0.5, 0.5, 0.0]))))
    return str(path)


@pytest.fixture
def measure_file(tmp_path):
    path = tmp_path / "m.json"
    payload = {
        "masses": [0.5, 0.25, 0.25],
        "target": [[1.0, -0.5, 0.25], [0.5, 1.0, -1.0]],
        "constraints": [[1.0, 1.0, 1.0]],
        "z": [0.75],
    }
    path.write_text(json.dumps(payload))
    return str(path)


def test_numrange_writes_boundary_and_manifest(tmp_path, matrix_file):
    out = tmp_path / "boundary.csv"
    report = tmp_path / "report.json"
    code = main([
        "numrange", "--matrix", matrix_file, "--mode", "k", "--k", "2",
        "--angles", "36", "--out", str(out), "--report", str(report),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "theta,h,x,y,flat"
    assert len(lines) == 37
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(2.5)
    sidecar = json.loads((tmp_path / "boundary.csv.manifest.json").read_text())
    assert sidecar["command"] == "numrange"
    assert "matrix" in sidecar["inputs"]


def test_numrange_sampling_requires_seed(tmp_path, matrix_file):
    out = tmp_path / "b.csv"
    code = main([
        "numrange", "--matrix", matrix_file, "--k", "1", "--angles", "16",
        "--samples", "100", "--out", str(out),
    ])
    assert code == 3


def test_certify_pass_and_determinism(tmp_path, matrix_file):
    rep1 = tmp_path / "r1.json"
    rep2 = tmp_path / "r2.json"
    argv = ["certify", "--matrix", matrix_file, "--mode", "k", "--k", "2",
            "--samples", "3000", "--seed", "42", "--angles", "36"]
    assert main(argv + ["--report", str(rep1)]) == 0
    assert main(argv + ["--report", str(rep2)]) == 0
    assert rep1.read_text() == rep2.read_text()
    payload = json.loads(rep1.read_text())
    assert payload["pass"] is True
    assert payload["certification"]["n_outside"] == 0


def test_faces_qk_and_alias(tmp_path, interval_file, capsys):
    assert main(["faces", "qk", "--matrix", interval_file, "--k", "2"]) == 0
    out1 = capsys.readouterr().out.strip()
    assert main(["qk", "--matrix", interval_file, "--k", "2"]) == 0
    out2 = capsys.readouterr().out.strip()
    assert out1 == out2
    payload = json.loads(out1)
    assert payload == {"extreme": False, "face_dim": 3, "rank_r": 2}


def test_faces_polytope(tmp_path):
    kpath = tmp_path / "K.json"
    hpath = tmp_path / "H.json"
    kpath.write_text(json.dumps({
        "d": 3,
        "vertices": [[str(x), str(y), str(z)]
                     for x in (0, 1) for y in (0, 1) for z in (0, 1)],
    }))
    hpath.write_text(json.dumps({"A": [["1", "1", "1"]], "b": ["3/2"]}))
    report = tmp_path / "rep.json"
    code = main(["faces", "polytope", "--polytope", str(kpath),
                 "--subspace", str(hpath), "--report", str(report)])
    assert code == 0
    payload = json.loads(report.read_text())
    assert payload["summary"]["all_pass"] is True
    assert payload["summary"]["n_faces"] == 13


def test_faces_suite_small(tmp_path):
    report = tmp_path / "suite.json"
    code = main(["faces", "suite", "--trials", "8", "--seed", "5",
                 "--quiet", "--report", str(report)])
    assert code == 0
    payload = json.loads(report.read_text())
    assert payload["all_pass"] is True


def test_majorize_exit_codes(tmp_path):
    steps = tmp_path / "steps.json"
    assert main(["majorize", "--c", "3,1", "--b", "2,2",
                 "--emit-steps", str(steps)]) == 0
    payload = json.loads(steps.read_text())
    assert payload["majorized"] is True
    assert payload["steps"] == [{"i": 0, "j": 1, "lambda": 0.5}]
    assert main(["majorize", "--c", "2,2", "--b", "3,1"]) == 1


def test_lyapunov_range_and_vertices(tmp_path, measure_file):
    out = tmp_path / "pts.csv"
    assert main(["lyapunov", "range", "--measure", measure_file,
                 "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert len(rows) == 8
    assert all(len(r.split(",")) == 2 for r in rows)

    vout = tmp_path / "verts.csv"
    vrep = tmp_path / "verts.json"
    assert main(["lyapunov", "vertices", "--measure", measure_file,
                 "--out", str(vout), "--report", str(vrep)]) == 0
    payload = json.loads(vrep.read_text())
    assert payload["max_fractional"] <= 1


def test_lyapunov_constrained_and_study(tmp_path, measure_file):
    out = tmp_path / "c.csv"
    assert main(["lyapunov", "constrained", "--measure", measure_file,
                 "--eta", "0.5", "--out", str(out)]) == 0
    study = tmp_path / "study.json"
    assert main(["lyapunov", "refine-study", "--measure", measure_file,
                 "--rounds", "2", "--seed", "5", "--out", str(study)]) == 0
    payload = json.loads(study.read_text())
    assert [e["atoms"] for e in payload["rounds"]] == [3, 6, 12]


def test_lyapunov_projections(tmp_path, matrix_file):
    out = tmp_path / "proj.csv"
    rep = tmp_path / "proj.json"
    code = main(["lyapunov", "projections", "--matrix", matrix_file,
                 "--k", "2", "--samples", "2000", "--seed", "11",
                 "--out", str(out), "--report", str(rep)])
    assert code == 0
    payload = json.loads(rep.read_text())
    assert payload["n_outside"] == 0


def test_plot_outputs(tmp_path, matrix_file):
    out = tmp_path / "b.csv"
    png = tmp_path / "b.png"
    code = main(["numrange", "--matrix", matrix_file, "--k", "1",
                 "--angles", "24", "--out", str(out), "--plot", str(png)])
    assert code == 0
    assert png.stat().st_size > 0
    assert (tmp_path / "b.png.manifest.json").exists()


def test_malformed_matrix_exits_3(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("this is not json")
    code = main(["numrange", "--matrix", str(bad), "--k", "1",
                 "--out", str(tmp_path / "x.csv")])
    assert code == 3


def test_usage_error_exits_2():
    assert main(["numrange"]) == 2
    assert main(["no-such-command"]) == 2
