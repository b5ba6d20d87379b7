"""Figure generation for dtmsim CSV outputs.

Consumes the simulator's CSV artifacts (runs.csv, sweep.csv, edges.csv)
and renders deterministic PNG + SVG charts.  The package has no code
dependency on the simulator.
"""
from .io import PlotInputError, load_edges, load_runs, load_sweep

__all__ = ["PlotInputError", "load_runs", "load_sweep", "load_edges"]
__version__ = "0.1.0"
