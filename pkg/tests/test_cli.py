import csv
import io
import json
import subprocess
import sys

import pytest

from spinloop.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_n3(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--max-degree", "12")
    assert code == 0
    assert "FAIL" not in out
    assert out.strip().endswith("9/9 checks passed")


def test_invariants_n2_flagged(capsys):
    code, out, _ = run(capsys, "invariants", "--n", "2", "--max-degree", "6", "--format", "json")
    assert code == 0
    doc = json.loads(out)["results"][0]
    assert doc["status"] == "NOT-ISOMORPHIC"
    assert doc["invariant_dims"] != doc["subalgebra_dims"]
    assert set(doc) >= {"n", "D", "invariant_dims", "subalgebra_dims", "expected", "faithful", "image_order"}


def test_gysin_out_of_range_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gysin", "--n", "10"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["series", "--max-degree", "65"],
    ["loop", "--n", "1"],
    ["verify", "--n", "12"],
    ["loop", "--n", "3", "--max-degree", "4", "--basis", "5"],
    ["invariants", "--n-range", "5..3"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_env_default_degree(capsys, monkeypatch):
    monkeypatch.setenv("SPINLOOP_MAX_DEGREE", "5")
    _, out, _ = run(capsys, "series", "--n", "3", "--format", "json")
    assert json.loads(out)["max_degree"] == 5
    _, out, _ = run(capsys, "series", "--n", "3", "--format", "json", "--max-degree", "7")
    assert json.loads(out)["max_degree"] == 7


def test_loop_basis_text(capsys):
    code, out, _ = run(capsys, "loop", "--generators", "2:3", "--max-degree", "4", "--basis", "4")
    assert code == 0
    assert "1 1 2 3 3" in out
    assert "w3*s(w2)" in out


def test_csv_header_stable(capsys):
    _, a, _ = run(capsys, "gysin", "--n", "4", "--max-degree", "6", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(a)))
    assert list(rows[0]) == ["n", "degree", "tensor", "rank", "ker", "coker", "assembled", "direct"]
    assert [int(r["degree"]) for r in rows] == list(range(7))


@pytest.mark.parametrize("argv", [
    ["steenrod", "--n", "5", "--format", "json"],
    ["gysin", "--n-range", "3..5", "--max-degree", "10", "--format", "json"],
    ["verify", "--n", "4", "--max-degree", "8", "--format", "json"],
    ["loop", "--n", "4", "--max-degree", "8", "--format", "csv"],
])
def test_deterministic(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    if "json" in argv:
        json.loads(first)


def test_progress_on_stderr(capsys):
    _, out, err = run(capsys, "gysin", "--n", "3", "--max-degree", "3", "--format", "json")
    json.loads(out)
    assert "degree 3" in err


def test_steenrod_table_agrees_with_wu(capsys):
    code, out, _ = run(capsys, "steenrod", "--n", "6", "--format", "json")
    assert code == 0
    rows = json.loads(out)["results"][0]["squares"]
    assert all(r["wu_agrees"] for r in rows)
    assert {"i": 2, "j": 3, "value": "w2*w3 + w5", "wu_agrees": True} in rows


def test_presentation_file(tmp_path, capsys):
    from spinloop.fibersq import spin_presentation

    path = tmp_path / "p.json"
    path.write_text(spin_presentation(6).to_json())
    _, a, _ = run(capsys, "gysin", "--n", "6", "--max-degree", "10", "--format", "json", "--presentation", str(path))
    _, b, _ = run(capsys, "gysin", "--n", "6", "--max-degree", "10", "--format", "json")
    assert a == b


def test_bad_presentation_is_contract_error(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text('{"ambient_generators": [{"name": "v2", "degree": 2}]}')
    code, _, err = run(capsys, "gysin", "--n", "3", "--max-degree", "4", "--presentation", str(path))
    assert code == 1
    assert "error" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "o.json"
    code, out, _ = run(capsys, "series", "--generators", "4:6", "--max-degree", "12", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["results"][0]["series"][12] == 2


def test_parallel_verify_matches_serial(capsys):
    argv = ["verify", "--n-range", "3..4", "--max-degree", "8", "--format", "json"]
    _, serial, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--jobs", "2")
    assert serial == parallel


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spinloop.cli", "series", "--n", "4", "--max-degree", "6"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "n=4 degrees=[2, 3, 4]: 1 0 1 1 2 1 3"
