import json

import pytest

from qbitcommit import cli, harness


def write_config(tmp_path, name="cfg.json", **cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


@pytest.mark.parametrize("cfg", [
    {"experiment": "bcjl-honest", "n": 8, "k": 4, "epsilon": 0.05, "trials": 5},
    {"experiment": "bcjl-attack", "n": 4, "k": 2, "trials": 2},
    {"experiment": "script-attack", "trials": 3},
    {"experiment": "fidelity-sweep", "grid": [0, 0.5, 1]},
    {"experiment": "two-party", "domain": 4, "trials": 2, "function": "random"},
])
def test_runs_are_byte_identical(tmp_path, cfg):
    path = write_config(tmp_path, **cfg)
    outs = []
    for i in range(2):
        out = tmp_path / f"out{i}.csv"
        assert cli.main(["run", path, "--seed", "7", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    rows = harness.read_table(tmp_path / "out0.csv")
    assert rows[-1]["trial"] == "summary"
    assert all(r["seed"] == "7" and r["build"] for r in rows)


def test_seed_changes_output(tmp_path):
    path = write_config(tmp_path, experiment="script-attack", trials=2)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["run", path, "--seed", "1", "--out", str(a)])
    cli.main(["run", path, "--seed", "2", "--out", str(b)])
    assert a.read_bytes() != b.read_bytes()


def test_jsonl_format(tmp_path):
    path = write_config(tmp_path, experiment="fidelity-sweep", grid=[0.25], format="jsonl")
    out = tmp_path / "o.jsonl"
    assert cli.main(["run", path, "--out", str(out)]) == 0
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert rows[0]["s"] == 0.25


@pytest.mark.parametrize("bad,field", [
    ({"experiment": "nope"}, "experiment"),
    ({"experiment": "bcjl-honest", "epsilon": 0.6}, "epsilon"),
    ({"experiment": "bcjl-honest", "n": 4, "k": 5}, "k"),
    ({"experiment": "bcjl-honest", "colour": 1}, "colour"),
    ({"experiment": "bcjl-attack", "epsilon": 0.1}, "epsilon"),
    ({"experiment": "two-party", "domain": 9}, "domain"),
])
def test_config_errors_exit_1(tmp_path, capsys, bad, field):
    path = write_config(tmp_path, **bad)
    assert cli.main(["run", path]) == 1
    assert field in capsys.readouterr().err


def test_missing_config_exits_1(tmp_path):
    assert cli.main(["run", str(tmp_path / "absent.json")]) == 1


def test_cap_exits_2(tmp_path, capsys):
    path = write_config(tmp_path, experiment="bcjl-attack", n=9, k=5)
    assert cli.main(["run", path]) == 2
    assert "MAX_OPERATOR_DIM" in capsys.readouterr().err


def test_code_size_cap_exits_2(tmp_path):
    path = write_config(tmp_path, experiment="bcjl-honest", n=40, k=20)
    assert cli.main(["run", path]) == 2


def test_report_summary(tmp_path, capsys):
    path = write_config(tmp_path, experiment="fidelity-sweep", grid=[1.0, 0.0, 0.5])
    out = tmp_path / "o.csv"
    cli.main(["run", path, "--out", str(out)])
    capsys.readouterr()
    assert cli.main(["report", str(out)]) == 0
    text = capsys.readouterr().out
    assert "delta-detection curve" in text
    curve = text.split("curve (sorted by delta):")[1].splitlines()[2:]
    deltas = [float(line.split()[0]) for line in curve if line.strip()]
    assert deltas == sorted(deltas)


def test_report_single_row(tmp_path, capsys):
    path = write_config(tmp_path, experiment="fidelity-sweep", grid=[0.5])
    out = tmp_path / "o.csv"
    cli.main(["run", path, "--out", str(out)])
    capsys.readouterr()
    assert cli.main(["report", str(out)]) == 0
    assert capsys.readouterr().out.startswith("single row:")


def test_report_empty_table(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert cli.main(["report", str(empty)]) == 1
    assert "empty" in capsys.readouterr().err


def test_demo(capsys):
    assert cli.main(["demo"]) == 0
    assert "with probability 0.500000" in capsys.readouterr().out
