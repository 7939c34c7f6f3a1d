import json

import pytest

from twistlab.cli import EXIT_INPUT, EXIT_OK, EXIT_UNSUPPORTED, batch, read_records, run, run_job, run_jobs

E0 = '{"a":[0,-1,1,0,0]}'


def _records(capsys) -> list:
    return [json.loads(line) for line in capsys.readouterr().out.splitlines()]


def test_analyze(capsys):
    assert run(["analyze", "--curve", E0]) == EXIT_OK
    (record,) = _records(capsys)
    assert record["status"] == "ok"
    assert record["minimal"] == [0, -1, 1, 0, 0]
    assert record["disc"] == -11
    assert record["galoisType"] == "S3"
    assert record["rootNumber"] == 1
    assert record["engineVersion"]
    assert "elapsedMillis" not in record


def test_timings(capsys):
    run(["analyze", "--curve", E0, "--timings"])
    assert "elapsedMillis" in _records(capsys)[0]


def test_twist(capsys):
    assert run(["twist", "--curve", E0, "--d", "1"]) == EXIT_OK
    assert _records(capsys)[0]["flip"] == 0
    assert run(["twist", "--curve", E0, "--d", "-7"]) == EXIT_OK
    record = _records(capsys)[0]
    assert record["flip"] == 1 and record["rootNumber"] == -1
    assert record["admissible"] == {"T": [7]}


def test_unsupported_exit_codes(capsys):
    assert run(["twist", "--curve", E0, "--d", "3"]) == EXIT_OK
    assert _records(capsys)[0]["status"] == "unsupported"
    assert run(["twist", "--curve", E0, "--d", "3", "--strict"]) == EXIT_UNSUPPORTED


def test_input_errors(capsys, tmp_path):
    assert run(["twist", "--curve", E0, "--d", "4"]) == EXIT_INPUT
    assert _records(capsys)[0]["status"] == "error"
    assert run(["analyze", "--curve", '{"a":[0,0,0,0,0]}']) == EXIT_INPUT
    path = tmp_path / "in.jsonl"
    path.write_text(E0 + "\n{not json\n")
    assert run(["analyze", "--in", str(path)]) == EXIT_INPUT
    with pytest.raises(SystemExit):
        run(["analyze", "--curve", "{oops"])


def test_envelope_and_descend(capsys):
    assert run(["envelope", "--curve", '{"a":[0,0,0,-1,0]}', "--d", "17", "--d2", "2"]) == EXIT_OK
    assert _records(capsys)[0]["possible"] == [0, 2, 4]
    assert run(["descend", "--curve", '{"e":[0,1,-1]}']) == EXIT_OK
    record = _records(capsys)[0]
    assert record["d2"] == 2
    assert record["support"] == [2]


def test_classify_and_gmodule(capsys):
    assert run(["classify", "--curve", E0]) == EXIT_OK
    record = _records(capsys)[0]
    assert record["verdict"] == "NotConstant"
    assert record["witness"] == {"kind": "real"}
    assert run(["gmodule", "--p", "7"]) == EXIT_OK
    assert _records(capsys)[0]["algebra"]["simpleDims"] == [3, 3]


def test_search_family(capsys):
    assert run(["search", "--mode", "family", "--p", "11", "--t0", "0"]) == EXIT_OK
    record = _records(capsys)[0]
    assert record["curve"]["a"] == [0, -1, 1, 0, 8]


def test_output_file(tmp_path):
    out = tmp_path / "out.jsonl"
    assert run(["analyze", "--curve", E0, "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text().splitlines()[0])["disc"] == -11


def test_read_records():
    parsed = read_records([E0, "", "[1, 2]", "{bad"])
    assert [n for n, _, _ in parsed] == [1, 3, 4]
    assert parsed[0][2] is None
    assert parsed[1][2] is not None and parsed[2][2] is not None


def test_batch_keeps_order_and_counts():
    lines = [
        '{"command":"analyze","a":[0,-1,1,0,0]}',
        "{broken",
        '{"command":"twist","a":[0,-1,1,0,0],"d":3}',
        '{"command":"nope"}',
        '{"command":"gmodule","p":5}',
    ]
    records, summary = batch(lines, {})
    assert [r["line"] for r in records] == [1, 2, 3, 4, 5]
    assert [r["status"] for r in records] == ["ok", "error", "unsupported", "error", "ok"]
    assert summary == {"ok": 2, "unsupported": 1, "failed": 2}


def test_parallel_results_match_serial():
    items = [("twist", {"a": [0, -1, 1, 0, 0], "d": d}) for d in (1, -7, 17, 3, 5, -3)]
    assert run_jobs(items, {}, jobs=2) == run_jobs(items, {}, jobs=1)


def test_run_job_shape():
    job = run_job("analyze", {"a": [0, -1, 1, 0, 0]}, {})
    assert list(job)[:3] == ["command", "inputs", "engineVersion"]
    assert job["inputs"] == {"a": [0, -1, 1, 0, 0]}


def test_batch_edge_cases():
    assert batch([], {}) == ([], {"ok": 0, "unsupported": 0, "failed": 0})
    lines = ['{"command":"analyze","a":[0,-1,1,0,0]}'] * 3 + ["{broken"]
    _, summary = batch(lines, {})
    assert summary == {"ok": 3, "unsupported": 0, "failed": 1}


def test_analyze_reduction(capsys):
    run(["analyze", "--curve", E0])
    assert _records(capsys)[0]["reduction"] == [[11, "mult_split", 1]]


def test_validate_prints_summary(capsys, monkeypatch):
    monkeypatch.setattr("twistlab.cli.run_validation", lambda size, seed: {"seed": seed, "all_passed": True})
    assert run(["validate", "--size", "1", "--seed", "7"]) == EXIT_OK
    out = capsys.readouterr()
    assert json.loads(out.out) == {"seed": 7, "all_passed": True}
    assert "=== TWISTLAB VALIDATION ===" in out.err
    assert "all_passed" in out.err
