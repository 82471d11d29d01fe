"""Testes da linha de comando (main com argv explícito)."""
from __future__ import annotations

import json

import pytest

from nilcurv import runs
from nilcurv.main import EXIT_FAILED, EXIT_MALFORMED, EXIT_OK, main
from nilcurv.serialization import dump_algebra


@pytest.fixture()
def flat_h3_file(tmp_path, flat_h3):
    path = tmp_path / "h3-flat.json"
    dump_algebra(flat_h3, path)
    return path


def _run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_verify_flat_h3(capsys, flat_h3_file) -> None:
    code, out = _run(capsys, ["verify", str(flat_h3_file)])
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["flags"]["ricci_flat"] is True
    assert report["flags"]["flat"] is True
    assert report["center_type"] == "degenerate"
    assert report["oracle_deviation"] == 0.0


def test_verify_euclidean_h3_scalar(capsys, tmp_path, euclidean_h3) -> None:
    path = tmp_path / "h3.json"
    dump_algebra(euclidean_h3, path)
    code, out = _run(capsys, ["verify", str(path)])
    assert code == EXIT_OK
    assert json.loads(out)["scalar"] == "-1/2"


def test_verify_truncated_file(capsys, tmp_path) -> None:
    path = tmp_path / "broken.json"
    path.write_text('{"dim": 3, "center": [[1, 0', encoding="utf-8")
    code, out = _run(capsys, ["verify", str(path)])
    assert code == EXIT_MALFORMED
    assert out == ""


def test_verify_invalid_algebra(capsys, tmp_path) -> None:
    path = tmp_path / "invalid.json"
    path.write_text(
        json.dumps({"dim": 3, "center": [[0, 1, 0]], "js": [[[0, 0, 0], [0, 0, -1], [0, 1, 0]]]}),
        encoding="utf-8",
    )
    code, _ = _run(capsys, ["verify", str(path)])
    assert code == EXIT_FAILED


def _bad_entry_file(tmp_path, js) -> str:
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps({"dim": 3, "q": 0, "center": [["1/1", "0/1", "0/1"]], "js": js}),
        encoding="utf-8",
    )
    return str(path)


def test_verify_unparseable_entry_is_malformed(capsys, tmp_path) -> None:
    js = [[["0", "abc", "0"], ["0", "0", "-1"], ["0", "1", "0"]]]
    code, out = _run(capsys, ["verify", _bad_entry_file(tmp_path, js)])
    assert code == EXIT_MALFORMED
    assert out == ""


def test_verify_ragged_row_is_malformed(capsys, tmp_path) -> None:
    js = [[["0", "1"], ["-1", "0", "0"], ["0", "0", "0"]]]
    code, out = _run(capsys, ["verify", _bad_entry_file(tmp_path, js)])
    assert code == EXIT_MALFORMED
    assert out == ""


def test_text_output(capsys, flat_h3_file) -> None:
    code, out = _run(capsys, ["verify", str(flat_h3_file), "--text"])
    assert code == EXIT_OK
    lines = out.splitlines()
    assert "center_type: degenerate" in lines
    assert "scalar: 0/1" in lines
    with pytest.raises(json.JSONDecodeError):
        json.loads(out)


def test_json_and_text_are_exclusive(flat_h3_file) -> None:
    with pytest.raises(SystemExit):
        main(["verify", str(flat_h3_file), "--json", "--text"])


def test_family_constraint_failure(capsys) -> None:
    params = json.dumps({"q": 2, "r": 0, "a": [1], "lambdas": [2]})
    code, out = _run(capsys, ["family", "heis1", "--params", params])
    assert code == EXIT_FAILED
    assert out == ""


def test_family_bad_parameters_are_malformed(capsys) -> None:
    code, _ = _run(capsys, ["family", "heis1", "--params", '{"q": 2, "unknown": 1}'])
    assert code == EXIT_MALFORMED


def test_family_output_is_deterministic(capsys) -> None:
    _, first = _run(capsys, ["family", "h3-flat"])
    _, second = _run(capsys, ["family", "h3-flat"])
    assert first == second
    assert json.loads(first)["name"] == "h3-flat"


def test_family_writes_file_then_verifies(capsys, tmp_path) -> None:
    target = tmp_path / "heis1.json"
    params = json.dumps({"q": 2, "r": 0, "a": [1], "lambdas": [1]})
    code, out = _run(capsys, ["family", "heis1", "--params", params, "-o", str(target)])
    assert code == EXIT_OK
    assert out == ""
    code, out = _run(capsys, ["verify", str(target)])
    assert code == EXIT_OK
    assert json.loads(out)["flags"]["ricci_flat"] is True


def test_family_params_from_file(capsys, tmp_path) -> None:
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"lambdas": [1, 2]}), encoding="utf-8")
    code, out = _run(capsys, ["family", "euclid-heis", "--params", str(params)])
    assert code == EXIT_OK
    assert json.loads(out)["dim"] == 5


def test_signature(capsys) -> None:
    code, out = _run(capsys, ["signature", "--q", "1", "--n", "4"])
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["sig"] == [3, 3]
    assert data["dim"] == 6
    assert data["matches_formula"] is True


def test_signature_rejects_bad_space(capsys) -> None:
    code, _ = _run(capsys, ["signature", "--q", "3", "--n", "4"])
    assert code == EXIT_FAILED


def test_group_metric(capsys) -> None:
    params = json.dumps({"p": 1, "r": 1, "q": 0, "M1": [[3], [4]], "A": [1, 2], "lambdas": [5]})
    code, out = _run(capsys, ["group-metric", "--params", params, "--samples", "10"])
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["passed"] is True
    assert data["max_dev"] == 0.0
    assert data["mode"] == "exact"


def test_group_metric_constraint_failure(capsys) -> None:
    params = json.dumps({"p": 1, "r": 1, "q": 0, "M1": [[3], [4]], "A": [1, 2], "lambdas": [6]})
    code, _ = _run(capsys, ["group-metric", "--params", params])
    assert code == EXIT_FAILED


def test_corpus(capsys, tmp_path) -> None:
    table = tmp_path / "corpus.csv"
    code, out = _run(
        capsys,
        ["corpus", "--count", "2", "--seed", "5", "--center-changes", "1", "--no-progress", "--csv", str(table)],
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["count"] == 2
    assert data["passed"] is True
    assert table.exists()


def test_record_and_report_runs(capsys, runs_db_path) -> None:
    _run(capsys, ["signature", "--q", "0", "--n", "3", "--record"])
    _run(capsys, ["signature", "--q", "5", "--n", "3", "--record"])

    code, out = _run(capsys, ["runs", "stats"])
    assert code == EXIT_OK
    stats = json.loads(out)
    assert stats["total_runs"] == 2
    assert stats["failed_runs"] == 1

    code, out = _run(capsys, ["runs", "export", "--format", "csv"])
    assert code == EXIT_OK
    assert out.splitlines()[0] == ",".join(runs.RUN_FIELDS)


def test_environment_turns_recording_on(capsys, monkeypatch, runs_db_path) -> None:
    monkeypatch.setenv("NILCURV_RUNS_DB", str(runs_db_path))
    _run(capsys, ["signature", "--q", "0", "--n", "3"])
    records = runs.get_runs_raw(command="signature")
    assert len(records) == 1
    assert records[0]["details"] == {"n": 3, "q": 0}
