"""Loading and validating dtmsim CSV artifacts.

Each loader accepts one or more CSV paths, checks that every file carries
the columns the chart needs, concatenates them, and fails with
PlotInputError on a schema mismatch or when no data rows remain.
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import pandas as pd

RUNS_COLUMNS = ("run_index", "strategy", "completion_time",
                "mean_travel_time", "median_travel_time")
SWEEP_COLUMNS = ("param", "value", "run_index", "mean_travel_time")
EDGES_COLUMNS = ("run_index", "tick", "edge_id", "count")


class PlotInputError(Exception):
    """Input CSV is missing, unreadable, empty, or has the wrong schema."""


def _load(paths: Sequence[str], required: Sequence[str],
          label: str) -> pd.DataFrame:
    if not paths:
        raise PlotInputError("no input files given")
    frames = []
    for p in paths:
        path = Path(p)
        if not path.is_file():
            raise PlotInputError(f"{p}: no such file")
        try:
            df = pd.read_csv(path)
        except Exception as exc:
            raise PlotInputError(f"{p}: unreadable CSV ({exc})") from exc
        missing = [c for c in required if c not in df.columns]
        if missing:
            raise PlotInputError(
                f"{p}: not a {label} file, missing column(s) "
                f"{', '.join(missing)} (has: {', '.join(df.columns)})")
        frames.append(df)
    out = pd.concat(frames, ignore_index=True)
    if out.empty:
        raise PlotInputError(f"input {label} file(s) contain no data rows")
    return out


def load_runs(paths: Sequence[str]) -> pd.DataFrame:
    """Per-run metrics from simulate/compare (runs.csv)."""
    df = _load(paths, RUNS_COLUMNS, "runs.csv")
    if df["strategy"].isna().any():
        raise PlotInputError("runs.csv has rows without a strategy")
    return df


def load_sweep(paths: Sequence[str]) -> pd.DataFrame:
    """Per-run metrics keyed by the swept parameter value (sweep.csv)."""
    df = _load(paths, SWEEP_COLUMNS, "sweep.csv")
    params = sorted(df["param"].astype(str).unique())
    if len(params) > 1:
        raise PlotInputError(
            f"sweep files mix parameters: {', '.join(params)}")
    return df


def load_edges(paths: Sequence[str]) -> pd.DataFrame:
    """Per-tick edge occupancy counts (edges.csv)."""
    return _load(paths, EDGES_COLUMNS, "edges.csv")
