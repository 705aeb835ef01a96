import json
import subprocess
import sys

import numpy as np
import pytest

from copula_forge.cli import main
from copula_forge.core import validate
from copula_forge.io import copula_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pmf_examples(capsys):
    code, out, _ = run(capsys, "pmf", "--k", "4", "--point", "2", "2")
    assert code == 0
    atoms = {a["value"]: a["prob"] for a in json.loads(out)["atoms"]}
    assert atoms == {"0/1": "1/6", "1/4": "2/3", "1/2": "1/6"}
    _, out, _ = run(capsys, "pmf", "--k", "3", "--point", "0", "2")
    assert json.loads(out)["atoms"] == [{"value": "0/1", "prob": "1/1"}]
    _, out, _ = run(capsys, "pmf", "--k", "2", "--hat", "--u", "1/4", "--v", "0.25")
    assert [a["value"] for a in json.loads(out)["atoms"]] == ["0/1", "1/8"]


def test_moments_examples(capsys):
    rec = lambda *a: json.loads(run(capsys, "moments", *a)[1])  # noqa: E731
    r = rec("--k", "4", "--u", "1/2", "--v", "1/2")
    assert (r["mean"], r["variance"]) == ("1/4", "1/48")
    assert rec("--k", "4", "--y", "--u", "1/2", "--v", "1/2")["variance"] == "1/1200"
    assert rec("--k", "2", "--hat", "--u", "1/4", "--v", "1/4")["variance"] == "1/256"
    assert rec("--k", "2", "--hat", "--y", "--u", "1/4", "--v", "1/4")["field"] == "Yhat"


@pytest.mark.parametrize(
    "argv, kind",
    [
        (["sample", "y", "--k", "9"], "CapacityError"),
        (["verify", "--k", "9", "--suite", "pmf"], "CapacityError"),
        (["pmf", "--k", "4", "--point", "5", "0"], "DomainError"),
        (["pmf", "--k", "4"], "UsageError"),
        (["moments", "--k", "4", "--u", "1/3", "--v", "1/2"], "DomainError"),
        (["moments", "--k", "4", "--u", "3/2", "--v", "1/2"], "DomainError"),
        (["pmf", "--k", "4", "--hat", "--u", "0.1234567890123", "--v", "0"], "UsageError"),
        (["sample", "x", "--k", "4", "--seed", "-1"], "UsageError"),
        (["frobnicate"], "UsageError"),
        (["pmf", "--k", "1", "--point", "0", "0"], "DomainError"),
    ],
)
def test_errors_exit_2_with_json(capsys, argv, kind):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == kind


def test_verify_ok_and_report(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--k", "5", "--suite", "pmf", "--out", str(path))
    rep = json.loads(path.read_text())
    assert code == 0 and rep["passed"] and len(rep["records"]) == 36


def test_verify_failure_exit_1(capsys, monkeypatch):
    import copula_forge.cli as cli

    monkeypatch.setattr(cli, "run_suite", lambda *a, **kw: [{"claim": "x", "pass": False}])
    code, _, err = run(capsys, "verify", "--k", "3", "--suite", "pmf")
    assert code == 1 and json.loads(err)["error"] == "VerificationFailed"


def test_sample_x_files_valid(tmp_path, capsys):
    assert run(capsys, "sample", "x", "--k", "4", "--seed", "7", "--samples", "3", "--out", str(tmp_path))[0] == 0
    files = sorted(tmp_path.iterdir())
    assert [f.name for f in files] == ["x_0000.json", "x_0001.json", "x_0002.json"]
    for f in files:
        assert validate(copula_from_json(f.read_text())).ok


def test_sample_y_point_mode(capsys):
    code, out, _ = run(capsys, "sample", "y", "--k", "10", "--point", "5", "5", "--samples", "4")
    assert code == 0 and len(json.loads(out)["values"]) == 4


def test_sample_pairs_from_grid_file(tmp_path, capsys):
    grid = tmp_path / "g.json"
    run(capsys, "sample", "x", "--k", "3", "--seed", "1", "--out", str(tmp_path / "d"))
    grid.write_text((tmp_path / "d" / "x_0000.json").read_text())
    code, out, _ = run(capsys, "sample", "pairs", "--k", "3", "--grid", str(grid), "--samples", "5", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "u,v" and len(out.splitlines()) == 6


def test_heatmap_corners_and_bounds(capsys):
    _, out, _ = run(capsys, "heatmap", "--k", "3", "--grid", "2", "--y", "--seed", "4")
    assert out.splitlines() == ["u,v,value,variance", "0,0,0,0", "0,1,0,0", "1,0,0,0", "1,1,1,0"]
    _, out, _ = run(capsys, "heatmap", "--k", "4", "--seed", "11", "--grid", "21")
    data = np.loadtxt(out.splitlines()[1:], delimiter=",")
    u, v, c = data[:, 0], data[:, 1], data[:, 2]
    assert data.shape == (441, 4)
    assert np.all(c >= np.maximum(0, u + v - 1) - 1e-12) and np.all(c <= np.minimum(u, v) + 1e-12)


def test_console_script_entry():
    res = subprocess.run(
        [sys.executable, "-m", "copula_forge.cli", "moments", "--k", "4", "--u", "1/2", "--v", "1/2"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["variance"] == "1/48"
