"""Command-line interface: flags, outputs, exit codes."""

from __future__ import annotations

import csv
import json

import pytest

from moneychains import asymptotic_density, derive_seed, exact_marginal, ModelKind
from moneychains.cli import main, parse_args


def test_parse_args_rejects_bad_usage():
    cases = [
        [],  # no command
        ["simulate"],  # everything missing
        ["simulate", "--model", "reshuffle", "--graph", "complete", "--n", "4",
         "--coins-per-vertex", "1", "--steps", "10"],  # no seed
        ["simulate", "--model", "reshuffle", "--graph", "complete", "--edges", "x",
         "--n", "4", "--coins-per-vertex", "1", "--steps", "10", "--seed", "1"],
        ["simulate", "--model", "reshuffle", "--graph", "complete", "--n", "4",
         "--coins-per-vertex", "1", "--all-at-vertex", "0", "--steps", "1",
         "--seed", "1"],  # two init modes
        ["exact", "--model", "reshuffle", "--n", "3"],  # missing m and out
        ["frobnicate"],
    ]
    for argv in cases:
        with pytest.raises(SystemExit) as excinfo:
            parse_args(argv)
        assert excinfo.value.code == 2, argv


def test_simulate_writes_csv_and_report(tmp_path, capsys):
    out = tmp_path / "hist.csv"
    report_path = tmp_path / "run.json"
    code = main([
        "simulate", "--model", "exchange", "--graph", "complete", "--n", "5",
        "--coins-per-vertex", "3", "--steps", "2000", "--seed", "11",
        "--burn-in", "500", "--sample-every", "50",
        "--out", str(out), "--report", str(report_path),
    ])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "tv_to_exact=" in stdout and "exchange on 5 vertices" in stdout

    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert rows[0].keys() == {"coins", "count", "frequency", "exact", "asymptotic"}
    assert [int(r["coins"]) for r in rows] == list(range(16))
    marginal = exact_marginal(ModelKind.EXCHANGE, 5, 15)
    assert float(rows[4]["exact"]) == marginal.probs_float()[4]

    payload = json.loads(report_path.read_text())
    assert payload["model"] == "exchange"
    assert payload["seed"] == 11
    assert sum(payload["final_config"]) == 15


def test_simulate_is_byte_identical_per_seed(tmp_path):
    args = [
        "simulate", "--model", "saving", "--graph", "cycle", "--n", "10",
        "--coins-per-vertex", "2", "--steps", "5000", "--seed", "77",
    ]
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    third = tmp_path / "c.csv"
    assert main(args + ["--out", str(first)]) == 0
    assert main(args + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert main(args[:-1] + ["78", "--out", str(third)]) == 0
    assert first.read_bytes() != third.read_bytes()


def test_simulate_accepts_edge_list_file(tmp_path, capsys):
    edges = tmp_path / "g.txt"
    edges.write_text("# triangle plus tail\n0 1\n1 2\n0 2\n2 3\n")
    code = main([
        "simulate", "--model", "reshuffle", "--edges", str(edges),
        "--init-custom", "4,0,0,0", "--steps", "100", "--seed", "3",
    ])
    assert code == 0
    assert "on 4 vertices, 4 coins" in capsys.readouterr().out


def test_simulate_grid_and_erdos_graphs(tmp_path, capsys):
    assert main([
        "simulate", "--model", "saving", "--graph", "grid", "--width", "3",
        "--height", "2", "--coins-per-vertex", "2", "--steps", "50", "--seed", "5",
    ]) == 0
    assert main([
        "simulate", "--model", "saving", "--graph", "erdos-renyi", "--n", "8",
        "--p", "0.5", "--coins-per-vertex", "2", "--steps", "50", "--seed", "5",
    ]) == 0
    capsys.readouterr()


def test_simulate_input_errors_exit_2(tmp_path, capsys):
    # all-at-vertex without the supply
    assert main([
        "simulate", "--model", "reshuffle", "--graph", "complete", "--n", "4",
        "--all-at-vertex", "0", "--steps", "10", "--seed", "1",
    ]) == 2
    assert "--total-coins" in capsys.readouterr().err
    # malformed edge file
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n1 1\n")
    assert main([
        "simulate", "--model", "reshuffle", "--edges", str(bad),
        "--coins-per-vertex", "1", "--steps", "10", "--seed", "1",
    ]) == 2
    assert "self-loop" in capsys.readouterr().err
    # missing edge file
    assert main([
        "simulate", "--model", "reshuffle", "--edges", str(tmp_path / "nope.txt"),
        "--coins-per-vertex", "1", "--steps", "10", "--seed", "1",
    ]) == 2
    capsys.readouterr()
    # negative steps
    assert main([
        "simulate", "--model", "reshuffle", "--graph", "complete", "--n", "4",
        "--coins-per-vertex", "1", "--steps", "-5", "--seed", "1",
    ]) == 2
    # unknown model
    assert main([
        "simulate", "--model", "barter", "--graph", "complete", "--n", "4",
        "--coins-per-vertex", "1", "--steps", "5", "--seed", "1",
    ]) == 2
    capsys.readouterr()


def test_exact_command(tmp_path):
    out = tmp_path / "marginal.csv"
    assert main(["exact", "--model", "reshuffle", "--n", "3", "--m", "2",
                 "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert [float(r["probability"]) for r in rows] == [1 / 2, 1 / 3, 1 / 6]
    assert float(rows[1]["asymptotic"]) == asymptotic_density(
        ModelKind.RESHUFFLE, 1, 2 / 3
    )


def test_exact_command_rejects_single_vertex(tmp_path, capsys):
    assert main(["exact", "--model", "reshuffle", "--n", "1", "--m", "2",
                 "--out", str(tmp_path / "x.csv")]) == 2
    assert "at least 2 vertices" in capsys.readouterr().err


def test_verify_command(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main([
        "verify", "--models", "all", "--graphs", "path,star",
        "--n-max", "3", "--m-max", "2", "--out", str(out),
    ])
    assert code == 0
    assert "verification passed" in capsys.readouterr().out
    payload = json.loads(out.read_text())
    assert payload["passed"] is True
    # 3 models x 2 families x n in {2, 3} x m in {0, 1, 2}
    assert len(payload["instances"]) == 36
    assert {c["name"] for c in payload["cross_checks"]} == {
        "exchange_saving_share_stationary",
        "exchange_saving_kernels_differ",
    }


def test_verify_respects_caps(capsys, monkeypatch):
    assert main(["verify", "--n-max", "3", "--m-max", "3", "--max-states", "4"]) == 2
    assert "exceed the cap" in capsys.readouterr().err
    monkeypatch.setenv("MONEYCHAINS_MAX_STATES", "4")
    assert main(["verify", "--n-max", "3", "--m-max", "3"]) == 2
    monkeypatch.setenv("MONEYCHAINS_MAX_STATES", "not-a-number")
    assert main(["verify", "--n-max", "2", "--m-max", "1"]) == 2
    assert "must be an integer" in capsys.readouterr().err
    monkeypatch.setenv("MONEYCHAINS_MAX_STATES", "100000")
    assert main(["verify", "--n-max", "2", "--m-max", "1"]) == 0
    capsys.readouterr()


def test_verify_validation(capsys):
    assert main(["verify", "--n-min", "1"]) == 2
    assert main(["verify", "--m-min", "3", "--m-max", "2"]) == 2
    assert main(["verify", "--models", "barter"]) == 2
    capsys.readouterr()


def test_sweep_command(tmp_path, capsys):
    out_dir = tmp_path / "grid"
    code = main([
        "sweep", "--models", "reshuffle,exchange", "--graph", "complete",
        "--n-list", "4", "--coins-per-vertex-list", "2,3", "--steps-list", "500",
        "--seed", "9", "--out-dir", str(out_dir),
    ])
    assert code == 0
    capsys.readouterr()
    index = json.loads((out_dir / "index.json").read_text())
    assert index["master_seed"] == 9
    assert len(index["points"]) == 4
    for i, point in enumerate(index["points"]):
        assert point["seed"] == derive_seed(9, f"sweep:{i}")
        csv_path = out_dir / point["csv"]
        assert csv_path.exists()
        rows = list(csv.DictReader(csv_path.read_text().splitlines()))
        assert rows and rows[0].keys() == {
            "coins", "count", "frequency", "exact", "asymptotic",
        }
    assert {p["model"] for p in index["points"]} == {"reshuffle", "exchange"}


def test_sweep_rejects_bad_lists(tmp_path, capsys):
    assert main([
        "sweep", "--models", "reshuffle", "--graph", "complete",
        "--n-list", "4,x", "--coins-per-vertex-list", "2", "--steps-list", "10",
        "--seed", "1", "--out-dir", str(tmp_path / "g"),
    ]) == 2
    assert "comma-separated list of integers" in capsys.readouterr().err
