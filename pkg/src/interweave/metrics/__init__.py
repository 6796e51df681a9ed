from . import reference
from .reports import (
    Report,
    Table,
    agreement_grid_table,
    comparison_table,
    emit_report,
    gap_table,
    mean_variance_table,
)
from .scoring import (
    GapDistribution,
    PairCoverage,
    ScoreSet,
    agreement_at,
    agreement_grid,
    gap_distribution,
    grid_average,
    load_score_records,
    load_score_set,
    matched_values,
    mean_score,
    records_from_vectors,
    rmse,
    variance_score,
    write_score_records,
)

__all__ = [
    "GapDistribution",
    "PairCoverage",
    "Report",
    "ScoreSet",
    "Table",
    "agreement_at",
    "agreement_grid",
    "agreement_grid_table",
    "comparison_table",
    "emit_report",
    "gap_distribution",
    "gap_table",
    "grid_average",
    "load_score_records",
    "load_score_set",
    "matched_values",
    "mean_score",
    "mean_variance_table",
    "records_from_vectors",
    "reference",
    "rmse",
    "variance_score",
    "write_score_records",
]
