import json
import subprocess
import sys

import pytest

from grayson_lab import cli, suites
from grayson_lab.cli import RunConfig, main, parse_args, run
from grayson_lab.report import Report, emit_report


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_parse_examples():
    c = parse_args(["polygon", "--gram", "[[1,0],[0,1]]"])
    assert c.command == "polygon" and c.gram == [[1, 0], [0, 1]]
    c = parse_args(["dw", "--gram", "[[0.25,0],[0,4]]", "--sublattice", "[[1],[0]]"])
    assert c.sublattice == [[1], [0]] and c.seed == 0
    with pytest.raises(SystemExit):
        parse_args(["bogus"])


def test_parse_reads_json_files(tmp_path):
    p = tmp_path / "in.json"
    p.write_text(json.dumps({"gram": {"dim": 2, "gram": [[0.25, 0], [0, 4]]},
                             "sublattice": {"ambient_dim": 2, "basis": [[1, 0]]}}))
    c = parse_args(["dw", "--input", str(p)])
    assert c.gram == [[0.25, 0], [0, 4]] and c.sublattice == [[1], [0]]


def test_config_validation():
    with pytest.raises(cli.InputError):
        RunConfig("grad-check", samples=0)
    with pytest.raises(cli.InputError):
        RunConfig("cover-verify", t=0.5)
    with pytest.raises(cli.InputError):
        RunConfig("nope")


def test_dw_example(capsys):
    code, out = _run(["dw", "--gram", "[[0.25,0],[0,4]]", "--sublattice", "[[1],[0]]"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["d_W"] == pytest.approx(4.0)
    assert set(doc) == {"d_W", "c_inf", "c_sup"}


def test_polygon_example(tmp_path, capsys):
    code, out = _run(["polygon", "--gram", "[[1,0],[0,1]]"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["vertices"] == [0, 2] and doc["slopes"] == [0.0]
    out_path = tmp_path / "poly.json"
    assert main(["polygon", "--gram", "[[0.25,0],[0,4]]", "--out", str(out_path)]) == 0
    assert json.loads(out_path.read_text())["vertices"] == [0, 1, 2]
    assert out_path.with_suffix(".csv").read_text().splitlines()[0] == "rank,log_minvol,vertex"


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["polygon", "--gram", "[[1,0],[0,1]"],
    ["polygon", "--gram", "[[1,2],[2,1]]"],
    ["polygon"],
    ["dw", "--gram", "[[1,0],[0,1]]", "--sublattice", "[[2],[0]]"],
    ["dw", "--gram", "[[1,0],[0,1]]", "--sublattice", "[[1,0],[0,1]]"],
    ["dw", "--gram", "[[1,0],[0,1]]"],
    ["grad-check", "--samples", "0"],
    ["polygon", "--gram", "[[1,0],[0,1]]", "--unknown"],
])
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_uncertified_enumeration_exits_3(capsys):
    assert main(["polygon", "--gram", "[[1,0],[0,1]]", "--enum-bound", "0.5"]) == 3


def test_grad_check_passes(capsys):
    code, out = _run(["grad-check", "--samples", "5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert [s["lemma"] for s in doc["suites"]] == ["volume_gradient", "log_volume_gradient_norm"]
    assert all(s["violations"] == [] for s in doc["suites"])


def test_failing_suite_exits_1(monkeypatch, capsys):
    def failing(seed=0, samples=1):
        r = Report("volume_gradient", samples=1)
        r.add_violation(index=0)
        return r
    monkeypatch.setattr(suites, "gradient_suite", failing)
    code, out = _run(["grad-check"], capsys)
    assert code == 1
    assert json.loads(out)["suites"][0]["violations"] == [{"index": 0}]


def test_emit_report_examples():
    assert emit_report([]) == {"suites": []}
    doc = emit_report([Report("x", samples=3)])
    assert doc["suites"][0] == {"lemma": "x", "samples": 3, "violations": [], "stats": {}}


def test_unwritable_output_exits_2(tmp_path, capsys):
    target = tmp_path / "missing" / "out.json"
    assert run(parse_args(["polygon", "--gram", "[[1,0],[0,1]]", "--out", str(target)])) == 2


def test_threads_do_not_change_output(monkeypatch, tmp_path):
    argv = ["flow-verify", "--samples", "3", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    monkeypatch.setenv("GRAYSON_LAB_THREADS", "4")
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_byte_identical_subprocess_runs():
    argv = [sys.executable, "-m", "grayson_lab.cli", "cover-verify", "--samples", "3", "--seed", "11"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout and first.stdout
