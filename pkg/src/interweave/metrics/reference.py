"""Published evaluation tables shipped as fixtures.

Grids of judge-vs-human gap proportions, tolerance-agreement cells with
their printed column averages, the per-dimension RMSE summary, and
per-generator mean/variance scores. Values are exactly as printed
(3-decimal proportions, 2-decimal means), so consumers comparing against
recomputed quantities must allow for rounding.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

JUDGES = ("GPT-4o", "InternVL", "InternVL_trained", "QwenVL", "QwenVL_trained")
TABLE_DIMENSIONS = ("TCC", "ICC", "IQ", "ITS")


@lru_cache(maxsize=1)
def _tables() -> dict:
    ref = resources.files(__package__).joinpath("fixtures/published_tables.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def gap_grid(judge: str) -> dict[str, dict[str, list[float]]]:
    """generator -> dimension -> [p0..p5] for one judge vs human."""
    grids = _tables()["gap_proportions"]
    if judge not in grids:
        raise KeyError(f"no gap grid for judge {judge!r}; have {sorted(grids)}")
    return grids[judge]


def agreement_cells() -> dict[str, dict[str, dict[str, float]]]:
    """generator -> dimension -> judge -> printed A@1 value."""
    return _tables()["agreement_at_1"]


def agreement_column(judge: str) -> dict[str, dict[str, float]]:
    """generator -> dimension -> printed A@1 value for one judge."""
    cells = agreement_cells()
    return {gen: {dim: cells[gen][dim][judge] for dim in cells[gen]} for gen in cells}


def agreement_printed_averages() -> dict[str, float]:
    return _tables()["agreement_at_1_average"]


def judge_rmse_summary() -> dict[str, dict[str, float]]:
    """dimension -> judge -> printed RMSE average."""
    return _tables()["judge_rmse"]


def generator_scores() -> dict[str, dict[str, dict[str, dict[str, float]]]]:
    """generator -> {human, model_judge} -> dimension -> {mean, variance}."""
    return _tables()["generator_scores"]
