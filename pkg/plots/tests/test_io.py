import pytest

from conftest import RUNS_HEADER, write_csv
from dtmplot.io import PlotInputError, load_edges, load_runs, load_sweep


def test_load_runs(runs_csv):
    df = load_runs([runs_csv])
    assert len(df) == 20
    assert set(df["strategy"]) == {"fast", "mid", "slow", "slowest"}


def test_load_concatenates(runs_csv, tmp_path):
    other = write_csv(tmp_path / "more.csv", RUNS_HEADER,
                      [[0, "extra", 500, 200.0, 190.0, 0, 0]])
    df = load_runs([runs_csv, other])
    assert len(df) == 21 and "extra" in set(df["strategy"])


def test_missing_file(tmp_path):
    with pytest.raises(PlotInputError, match="no such file"):
        load_runs([str(tmp_path / "nope.csv")])


def test_no_inputs():
    with pytest.raises(PlotInputError, match="no input"):
        load_runs([])


def test_schema_mismatch(sweep_csv, edges_csv):
    with pytest.raises(PlotInputError, match="missing column"):
        load_runs([edges_csv])
    with pytest.raises(PlotInputError, match="missing column"):
        load_edges([sweep_csv])


def test_header_only_is_empty(tmp_path):
    path = write_csv(tmp_path / "empty.csv", RUNS_HEADER, [])
    with pytest.raises(PlotInputError, match="no data rows"):
        load_runs([path])


def test_unreadable_csv(tmp_path):
    path = tmp_path / "junk.csv"
    path.write_bytes(b"\x00\x01\x02")
    with pytest.raises(PlotInputError):
        load_runs([str(path)])


def test_sweep_rejects_mixed_params(sweep_csv, tmp_path):
    other = write_csv(tmp_path / "other.csv",
                      ["param", "value", "run_index", "completion_time",
                       "mean_travel_time", "median_travel_time", "switches",
                       "truncated"],
                      [["d_r", 500.0, 0, 2000, 900.0, 880.0, 3, 0]])
    with pytest.raises(PlotInputError, match="mix parameters"):
        load_sweep([sweep_csv, other])


def test_sweep_ok(sweep_csv):
    df = load_sweep([sweep_csv])
    assert sorted(df["value"].unique()) == [0.0, 0.5, 1.0]
