import csv

import pytest

RUNS_HEADER = ["run_index", "strategy", "completion_time",
               "mean_travel_time", "median_travel_time", "switches",
               "truncated"]
SWEEP_HEADER = ["param", "value", "run_index", "completion_time",
                "mean_travel_time", "median_travel_time", "switches",
                "truncated"]
EDGES_HEADER = ["run_index", "tick", "edge_id", "count"]

# four strategies with strictly ordered per-seed completion times
ORDERED_STRATEGIES = ["fast", "mid", "slow", "slowest"]


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return str(path)


@pytest.fixture
def runs_csv(tmp_path):
    rows = []
    for si, name in enumerate(ORDERED_STRATEGIES):
        for r in range(5):
            comp = 1000 + 100 * si + 7 * r
            rows.append([r, name, comp, comp * 0.4, comp * 0.38, si, 0])
    return write_csv(tmp_path / "runs.csv", RUNS_HEADER, rows)


@pytest.fixture
def sweep_csv(tmp_path):
    rows = []
    for v in [0.0, 0.5, 1.0]:
        for r in range(4):
            travel = 900 - 150 * v + 11 * r
            rows.append(["p_r", v, r, travel * 2.2, travel, travel * 0.95,
                         int(30 * v), 0])
    return write_csv(tmp_path / "sweep.csv", SWEEP_HEADER, rows)


@pytest.fixture
def edges_csv(tmp_path):
    rows = []
    for r in range(2):
        for t in range(0, 100, 5):
            for e, base in [("a~b", 10), ("b~a", 4), ("b~c", 1)]:
                rows.append([r, t, e, base + (t // 20) + r])
    return write_csv(tmp_path / "edges.csv", EDGES_HEADER, rows)
