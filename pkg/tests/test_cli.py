"""Command line interface: subcommands and exit codes."""
import subprocess
import sys

import pytest

from dtmsim.cli import main
from dtmsim.network import load_network

SMALL_CONFIG = """
format_version = 1

[network.grid]
rows = 4
cols = 4
per_lane_capacity = 6

[demand]
vehicles = 40
departure_window = 100

[strategy]
name = "vam"
d_r = 600.0

[run]
seed = 5
runs = 2
"""


@pytest.fixture
def config_file(tmp_path):
    p = tmp_path / "cfg.toml"
    p.write_text(SMALL_CONFIG)
    return str(p)


def test_simulate_ok(config_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["simulate", "--config", config_file,
                 "--out", str(out)]) == 0
    assert (out / "runs.csv").exists()
    assert (out / "aggregate.csv").exists()
    assert "mean_completion_time" in capsys.readouterr().out


def test_simulate_seed_runs_override(config_file, tmp_path):
    out = tmp_path / "out"
    assert main(["simulate", "--config", config_file, "--seed", "9",
                 "--runs", "1", "--out", str(out)]) == 0
    lines = (out / "runs.csv").read_text().splitlines()
    assert len(lines) == 2   # header + 1 run


def test_missing_config_is_config_error(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "nope.toml")]) == 1


def test_bad_strategy_is_config_error(config_file):
    assert main(["compare", "--config", config_file,
                 "--strategies", "vam,psychic"]) == 1


def test_bad_sweep_values_is_config_error(config_file):
    assert main(["sweep", "--config", config_file, "--param", "p_r",
                 "--values", "a,b"]) == 1
    assert main(["sweep", "--config", config_file, "--param", "p_r",
                 "--values", ""]) == 1


def test_out_path_collision_is_runtime_error(config_file, tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("i am a file, not a directory")
    assert main(["simulate", "--config", config_file,
                 "--out", str(blocker)]) == 2


def test_truncated_run_exits_3(config_file, tmp_path):
    cfg = tmp_path / "trunc.toml"
    cfg.write_text(SMALL_CONFIG + "\n[run.extra]\n")
    # rewrite with a tiny tick budget
    cfg.write_text(SMALL_CONFIG.replace("runs = 2",
                                        "runs = 1\nmax_ticks = 40"))
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 3
    # results are still written
    lines = (out / "runs.csv").read_text().splitlines()
    assert lines[1].endswith(",1")   # truncated flag set


def test_compare_cli(config_file, tmp_path, capsys):
    out = tmp_path / "cmp"
    assert main(["compare", "--config", config_file,
                 "--strategies", "none,vam", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "none" in text and "vam" in text and "delta" in text
    assert (out / "comparison.csv").exists()


def test_sweep_cli(config_file, tmp_path, capsys):
    out = tmp_path / "sweep"
    assert main(["sweep", "--config", config_file, "--param", "p_r",
                 "--values", "0,1", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "p_r=0" in text and "p_r=1" in text
    assert (out / "sweep_aggregate.csv").exists()


def test_gen_network(tmp_path):
    out = tmp_path / "net.toml"
    assert main(["gen-network", "--grid", "3x4", "--out", str(out)]) == 0
    net = load_network(str(out))
    assert len(net.node_ids) == 12
    assert main(["gen-network", "--grid", "bogus", "--out", str(out)]) == 1


def test_console_entry_point(tmp_path):
    out = tmp_path / "net.toml"
    proc = subprocess.run(
        [sys.executable, "-m", "dtmsim.cli", "gen-network", "--grid", "2x2",
         "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "4 intersections" in proc.stdout
