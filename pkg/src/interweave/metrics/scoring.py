"""Score sets and judge-agreement statistics.

Per-dimension mean and population variance summarize one judge's view of a
generator; RMSE, tolerance agreement (A@tau) and the absolute-gap
distribution compare a model judge against the human reference over a
matched sample universe. Comparisons are strict by default: differing
universes raise rather than silently intersecting. With
``allow_partial=True`` the intersection is used and unmatched ids are
reported in a coverage diagnostic instead (never imputed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from ..errors import DuplicateNameError, EmptySetError, UniverseMismatchError
from ..model import (
    SCORE_DIMENSIONS,
    JudgeKind,
    ScoreRecord,
    ScoreVector,
    dumps_canonical,
    iter_jsonl,
)

MAX_GAP = 5


@dataclass(frozen=True)
class ScoreSet:
    """One judge's scores over a sample universe, one record per sample."""

    judge_id: str
    scores: Mapping[str, ScoreVector]

    @classmethod
    def from_records(cls, records: Iterable[ScoreRecord]) -> "ScoreSet":
        judge_id = None
        scores: dict[str, ScoreVector] = {}
        for record in records:
            if judge_id is None:
                judge_id = record.judge_id
            elif record.judge_id != judge_id:
                raise ValueError(
                    f"records mix judges: {judge_id!r} and {record.judge_id!r}"
                )
            if record.sample_id in scores:
                raise DuplicateNameError(f"{judge_id}/{record.sample_id}")
            scores[record.sample_id] = record.scores
        if judge_id is None:
            raise EmptySetError()
        return cls(judge_id=judge_id, scores=scores)

    def sample_ids(self) -> frozenset[str]:
        return frozenset(self.scores)

    def values(self, dimension: str) -> np.ndarray:
        _check_dimension(dimension)
        return np.array(
            [getattr(v, dimension) for _, v in sorted(self.scores.items())], dtype=np.float64
        )

    def __len__(self) -> int:
        return len(self.scores)


def _check_dimension(dimension: str) -> None:
    if dimension not in SCORE_DIMENSIONS:
        raise ValueError(f"unknown dimension {dimension!r}; expected one of {SCORE_DIMENSIONS}")


def load_score_records(path: str | Path) -> list[ScoreRecord]:
    return [ScoreRecord.from_dict(d) for d in iter_jsonl(Path(path).read_text(encoding="utf-8"))]


def write_score_records(records: Iterable[ScoreRecord], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(dumps_canonical(record.as_dict()) + "\n")


def load_score_set(path: str | Path) -> ScoreSet:
    return ScoreSet.from_records(load_score_records(path))


def records_from_vectors(
    vectors: Mapping[str, ScoreVector],
    judge_id: str,
    judge_kind: JudgeKind = JudgeKind.MODEL,
    timestamp: str = "1970-01-01T00:00:00Z",
) -> list[ScoreRecord]:
    return [
        ScoreRecord(sample_id, judge_id, judge_kind, vector, timestamp)
        for sample_id, vector in sorted(vectors.items())
    ]


# -- single-set statistics ------------------------------------------------------


def mean_score(score_set: ScoreSet, dimension: str) -> float:
    """Arithmetic mean over all samples."""
    if len(score_set) == 0:
        raise EmptySetError()
    return float(np.mean(score_set.values(dimension)))


def variance_score(score_set: ScoreSet, dimension: str) -> float:
    """Population variance (divisor N, not N-1)."""
    if len(score_set) == 0:
        raise EmptySetError()
    values = score_set.values(dimension)
    return float(np.mean((values - values.mean()) ** 2))


# -- paired judge-vs-judge statistics ---------------------------------------------


@dataclass(frozen=True)
class PairCoverage:
    matched: int
    missing_in_model: tuple[str, ...] = ()
    missing_in_human: tuple[str, ...] = ()


def matched_values(
    model: ScoreSet,
    human: ScoreSet,
    dimension: str,
    allow_partial: bool = False,
) -> tuple[np.ndarray, np.ndarray, PairCoverage]:
    _check_dimension(dimension)
    model_ids = model.sample_ids()
    human_ids = human.sample_ids()
    missing_in_model = tuple(sorted(human_ids - model_ids))
    missing_in_human = tuple(sorted(model_ids - human_ids))
    if (missing_in_model or missing_in_human) and not allow_partial:
        raise UniverseMismatchError(missing_in_model, missing_in_human)
    common = sorted(model_ids & human_ids)
    if not common:
        raise EmptySetError()
    m = np.array([getattr(model.scores[s], dimension) for s in common], dtype=np.float64)
    h = np.array([getattr(human.scores[s], dimension) for s in common], dtype=np.float64)
    return m, h, PairCoverage(len(common), missing_in_model, missing_in_human)


def rmse(
    model: ScoreSet, human: ScoreSet, dimension: str, allow_partial: bool = False
) -> float:
    """Root mean squared error between matched score pairs."""
    m, h, _ = matched_values(model, human, dimension, allow_partial)
    return float(np.sqrt(np.mean((m - h) ** 2)))


def _gap_proportions(m: np.ndarray, h: np.ndarray) -> tuple[float, ...]:
    gaps = np.abs(m - h).astype(np.int64)
    counts = np.bincount(gaps, minlength=MAX_GAP + 1)
    return tuple(float(c) / len(gaps) for c in counts)


def agreement_at(
    model: ScoreSet,
    human: ScoreSet,
    dimension: str,
    tau: int = 1,
    allow_partial: bool = False,
) -> float:
    """Fraction of matched pairs within tolerance tau.

    Computed as the prefix sum of the gap proportions, the same float
    operations gap_distribution exposes, so proportions[0] + proportions[1]
    equals agreement at tau=1 bit for bit.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    m, h, _ = matched_values(model, human, dimension, allow_partial)
    proportions = _gap_proportions(m, h)
    return float(sum(proportions[: tau + 1]))


@dataclass(frozen=True)
class GapDistribution:
    """Distribution of |model - human| over matched pairs, gaps 0..5."""

    dimension: str
    proportions: tuple[float, ...]
    coverage: PairCoverage = field(default=PairCoverage(0), compare=False)

    def __post_init__(self):
        if len(self.proportions) != MAX_GAP + 1:
            raise ValueError("gap distribution needs 6 proportions (gaps 0..5)")
        if any(p < 0 for p in self.proportions):
            raise ValueError("proportions must be non-negative")
        if abs(sum(self.proportions) - 1.0) > 1e-9:
            raise ValueError("proportions must sum to 1")

    def within(self, tau: int) -> float:
        return float(sum(self.proportions[: tau + 1]))


def gap_distribution(
    model: ScoreSet,
    human: ScoreSet,
    dimension: str,
    allow_partial: bool = False,
) -> GapDistribution:
    m, h, coverage = matched_values(model, human, dimension, allow_partial)
    return GapDistribution(dimension, _gap_proportions(m, h), coverage)


# -- grid aggregation (one judge vs human across many generators) ------------------


def agreement_grid(
    model_sets: Mapping[str, ScoreSet],
    human_sets: Mapping[str, ScoreSet],
    tau: int = 1,
    allow_partial: bool = False,
) -> dict[str, dict[str, float]]:
    """A@tau per (generator, dimension) for one judge."""
    if set(model_sets) != set(human_sets):
        raise UniverseMismatchError(
            tuple(sorted(set(human_sets) - set(model_sets))),
            tuple(sorted(set(model_sets) - set(human_sets))),
        )
    return {
        generator: {
            dim: agreement_at(model_sets[generator], human_sets[generator], dim, tau, allow_partial)
            for dim in SCORE_DIMENSIONS
        }
        for generator in sorted(model_sets)
    }


def grid_average(
    grid: Mapping[str, Mapping[str, float]],
    weights: Mapping[str, Mapping[str, int]] | None = None,
) -> float:
    """Average a per-(generator, dimension) grid.

    Unweighted by default (every cell counts once, the printed-table
    convention). Passing per-cell pair counts switches to pooled
    aggregation over all matched pairs.
    """
    cells = [(g, d) for g in grid for d in grid[g]]
    if not cells:
        raise EmptySetError()
    if weights is None:
        return float(np.mean([grid[g][d] for g, d in cells]))
    total = sum(weights[g][d] for g, d in cells)
    if total == 0:
        raise EmptySetError()
    return float(sum(grid[g][d] * weights[g][d] for g, d in cells) / total)
