from dtmplot.charts import (compliance_sweep, edge_heatmap, save_figure,
                            strategy_comparison, strategy_order)
from dtmplot.io import load_edges, load_runs, load_sweep


def test_strategy_order(runs_csv):
    df = load_runs([runs_csv])
    assert strategy_order(df) == ["fast", "mid", "slow", "slowest"]


def test_strategy_comparison_series(runs_csv):
    df = load_runs([runs_csv])
    fig = strategy_comparison(df)
    ax = fig.axes[0]
    labels = [t.get_text() for t in ax.get_legend().get_texts()]
    assert len(labels) == 4
    assert [l.split(" ")[0] for l in labels] == ["fast", "mid", "slow",
                                                "slowest"]
    # one data line per strategy (plus one mean guide line each)
    data_lines = [l for l in ax.get_lines() if l.get_label() in labels]
    assert len(data_lines) == 4
    assert len(data_lines[0].get_xdata()) == 5


def test_compliance_sweep_chart(sweep_csv):
    df = load_sweep([sweep_csv])
    fig = compliance_sweep(df)
    ax = fig.axes[0]
    line = ax.get_lines()[0]
    assert list(line.get_xdata()) == [0.0, 0.5, 1.0]
    ys = list(line.get_ydata())
    assert ys == sorted(ys, reverse=True)   # travel time falls with p_r
    assert ax.get_xlabel() == "p_r"


def test_edge_heatmap_chart(edges_csv):
    df = load_edges([edges_csv])
    fig = edge_heatmap(df)
    ax = fig.axes[0]
    img = ax.get_images()[0].get_array()
    assert img.shape[0] == 3          # one row per edge
    assert img[0].mean() > img[-1].mean()   # busiest edge first


def test_save_writes_png_and_svg(runs_csv, tmp_path):
    df = load_runs([runs_csv])
    paths = save_figure(strategy_comparison(df), str(tmp_path / "fig.png"))
    names = sorted(p.name for p in paths)
    assert names == ["fig.png", "fig.svg"]
    for p in paths:
        assert p.stat().st_size > 1000


def test_rendering_is_deterministic(runs_csv, tmp_path):
    df = load_runs([runs_csv])
    a = save_figure(strategy_comparison(df), str(tmp_path / "a"))
    b = save_figure(strategy_comparison(df), str(tmp_path / "b"))
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes(), pa.suffix
