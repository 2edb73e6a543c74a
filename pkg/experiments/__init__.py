"""Replicated parameter sweeps over the diffusion engine."""

from .base import BaseSweep, PhaseLabel, PointSummary, SweepBase, SweepResult, SweepSpec, SweptParameter
from .sweeps import (
    SeedCompanion,
    SeedSweepReport,
    classify_phase,
    compare_strategies,
    epidemic_window,
    layer_epidemic_windows,
    run_sweep,
    sweep_edge_probability,
    sweep_layers,
    sweep_rules,
    sweep_seed_fraction,
)

__all__ = [
    "BaseSweep", "PhaseLabel", "PointSummary", "SweepBase", "SweepResult", "SweepSpec", "SweptParameter",
    "SeedCompanion", "SeedSweepReport", "classify_phase", "compare_strategies", "epidemic_window",
    "layer_epidemic_windows", "run_sweep", "sweep_edge_probability", "sweep_layers", "sweep_rules", "sweep_seed_fraction",
]
