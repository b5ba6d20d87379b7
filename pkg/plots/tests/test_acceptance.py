"""End-to-end criterion for the plotting package.

Generates real comparison CSVs with the dtmsim CLI (skipped when the
simulator is not installed), renders the strategy-comparison chart, and
checks it shows four series ordered by the data.  Also checks the clean
failure on a schema mismatch.
"""
import shutil
import subprocess

import pandas as pd
import pytest

from dtmplot.charts import strategy_comparison
from dtmplot.cli import main
from dtmplot.io import load_runs

SCENARIO = """\
format_version = 1

[network.grid]
rows = 4
cols = 4
per_lane_capacity = 6

[demand]
vehicles = 60
departure_window = 120

[strategy]
name = "vam"
d_r = 600.0
switch_cooldown = 30

[run]
seed = 11
runs = 3
"""


def verdict(capsys, name: str, ok: bool, detail: str):
    with capsys.disabled():
        print(f"\n[{name}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def comparison_csv(tmp_path_factory):
    if shutil.which("dtmsim") is None:
        pytest.skip("dtmsim CLI not installed")
    tmp = tmp_path_factory.mktemp("cmp")
    cfg = tmp / "scenario.toml"
    cfg.write_text(SCENARIO)
    proc = subprocess.run(
        ["dtmsim", "compare", "--config", str(cfg),
         "--strategies", "centralized,vam,alert,none",
         "--out", str(tmp / "out")],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return str(tmp / "out" / "runs.csv")


def test_strategy_comparison_end_to_end(comparison_csv, tmp_path, capsys):
    out = tmp_path / "fig"
    rc = main(["plot", "--kind", "strategy-comparison",
               "--in", comparison_csv, "--out", str(out)])

    df = load_runs([comparison_csv])
    want = list(df.groupby("strategy")["completion_time"].mean()
                .sort_values().index)
    ax = strategy_comparison(df).axes[0]
    labels = [t.get_text().split(" ")[0]
              for t in ax.get_legend().get_texts()]
    series = [l for l in ax.get_lines()
              if not l.get_label().startswith("_")]

    ok = (rc == 0 and out.with_suffix(".png").is_file()
          and out.with_suffix(".svg").is_file()
          and len(series) == 4 and labels == want)
    detail = (f"four series rendered from simulator CSVs, legend order "
              f"{' < '.join(labels)} matches per-strategy means; "
              f"PNG + SVG written")
    verdict(capsys, "plots-strategy-comparison", ok, detail)


def test_schema_mismatch_clean_failure(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    pd.DataFrame({"tick": [1], "edge_id": ["a~b"], "count": [3]}).to_csv(
        bad, index=False)
    rc = main(["plot", "--kind", "strategy-comparison",
               "--in", str(bad), "--out", str(tmp_path / "fig")])
    err = capsys.readouterr().err
    ok = (rc == 1 and "missing column" in err
          and not (tmp_path / "fig.png").exists())
    verdict(capsys, "plots-schema-mismatch", ok,
            "wrong-schema CSV rejected with exit code 1 and a clear "
            "message; no output written")
