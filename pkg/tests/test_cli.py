import json
import subprocess
import sys

import pytest

from levelone import __version__
from levelone.cli import main, parse_weight
from levelone.embed import embedding_to_json, shipped_embedding


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(args, capsys):
    code, out, _ = run(args + ["--output", "json"], capsys)
    payload = json.loads(out)
    assert payload["schema"] == "levelone.cli/1" and payload["version"] == __version__
    return code, payload["result"]


def test_parse_weight():
    assert parse_weight("0", 3) == (0, 0, 0)
    assert parse_weight("w2", 3) == (0, 1, 0)
    assert parse_weight("w1+w3", 3) == (1, 0, 1)
    assert parse_weight("1,2,0", 3) == (1, 2, 0)
    with pytest.raises(ValueError):
        parse_weight("w4", 3)
    with pytest.raises(ValueError):
        parse_weight("1,2", 3)


def test_anomaly(capsys):
    code, res = run_json(["anomaly", "A1", "1"], capsys)
    assert code == 0
    assert res["conformal_anomaly"] == "1"
    assert res["trace_anomalies"] == [{"lambda": [0], "delta": "0"}, {"lambda": [1], "delta": "1/4"}]


def test_verlinde(capsys):
    code, res = run_json(["verlinde", "A8", "1", "--genus", "3"], capsys)
    assert code == 0 and res["dimension"] == 729
    code, res = run_json(["verlinde", "A1", "2", "--genus", "0", "--labels", "w1;w1;w1;w1"], capsys)
    assert res["dimension"] == 2
    code, out, _ = run(["verlinde", "E8", "1"], capsys)
    assert code == 0 and out.strip().endswith(": 1")


def test_branch(capsys):
    code, res = run_json(["branch", "e8:D8", "0"], capsys)
    assert code == 0
    assert res["entries"] == [{"mu": [0] * 8, "shift": 0, "mult": 1}, {"mu": [0, 0, 0, 0, 0, 0, 1, 0], "shift": 1, "mult": 1}]
    assert res["index"] == [1]


def test_factorize_and_duality(capsys):
    code, res = run_json(["factorize", "A2", "2", "--genus", "2"], capsys)
    assert code == 0 and res["ok"] and res["lhs"] == res["rhs"]
    code, res = run_json(["duality", "G2:F4", "--genus", "3"], capsys)
    assert code == 0 and res["dim_a"] == res["dim_b"] == 15 and res["closed_form_ok"]


def test_heisenberg(capsys):
    code, res = run_json(["heisenberg", "sl9"], capsys)
    assert code == 0 and res["ok"] and res["invariant_dims"] == [1]


def test_heisenberg_failing_scenario_exits_two(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"Z": [4], "signs": [1], "genus": 1, "N": [[1]]}))
    code, _, err = run(["heisenberg", str(p)], capsys)
    assert code == 2 and "verification failure" in err


@pytest.mark.parametrize(
    "args",
    [
        ["verlinde", "X9", "1"],
        ["verlinde", "A1", "1", "--labels", "w1;w2"],
        ["anomaly", "A2", "-1"],
        ["branch", "e8:A3", "0"],
        ["duality", "SL2:E8"],
        ["heisenberg", "no-such-scenario"],
        ["branch", "e8:D8", "w1", "--cutoff", "9"],
    ],
)
def test_domain_errors_exit_one(args, capsys):
    code, _, err = run(args, capsys)
    assert code == 1 and err.startswith("error:")


def test_json_output_is_byte_identical(capsys):
    args = ["branch", "e8:A2+E6", "0", "--output", "json"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_json_byte_identical_across_processes(tmp_path):
    cmd = [sys.executable, "-m", "levelone.cli", "verlinde", "G2", "1", "--genus", "2", "--output", "json",
           "--cache-dir", str(tmp_path)]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["result"]["dimension"] == 5


def test_cache_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("LEVELONE_CACHE_DIR", str(tmp_path))
    assert main(["verlinde", "A2", "2"]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert "rootsys-A2.json" in names and any(n.startswith("S_") for n in names)


def test_paper_suite_only(capsys):
    code, out, _ = run(["paper-suite", "--only", "1,schur"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2
    assert lines[0].startswith("[PASS] 1.") and lines[1].startswith("[PASS] 8.")
    code, _, _ = run(["paper-suite", "--only", "42"], capsys)
    assert code == 1


def test_corrupted_embedding_file_fails_criterion_one(tmp_path, capsys):
    data = json.loads(embedding_to_json(shipped_embedding("g2f4")))
    data["restriction"][0][1] += 1
    p = tmp_path / "g2f4-bad.json"
    p.write_text(json.dumps(data))
    code, out, _ = run(["paper-suite", "--only", "1", "--embedding-file", str(p)], capsys)
    assert code == 2
    assert out.startswith("[FAIL] 1.")


def test_paper_suite_json(capsys):
    code, res = run_json(["paper-suite", "--only", "conformal"], capsys)
    assert code == 0 and res["criteria"][0]["ok"] and res["criteria"][0]["criterion"] == 1


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0 and __version__ in capsys.readouterr().out
