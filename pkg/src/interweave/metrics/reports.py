"""Deterministic table renderers: markdown for reading, CSV for machines.

Markdown cells follow the printed conventions: "mean (variance)" at two
decimals for generator quality tables, three decimals for proportions and
agreement values. CSV keeps full float precision.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from ..model import SCORE_DIMENSIONS
from .scoring import GapDistribution, grid_average

DIM_HEADERS = tuple(d.upper() for d in SCORE_DIMENSIONS)


@dataclass(frozen=True)
class Table:
    name: str
    headers: tuple[str, ...]
    rows: tuple[tuple, ...]  # first cell is the row label
    markdown_formats: tuple[str, ...] = ()  # per value column, e.g. "%.3f"

    def to_markdown(self) -> str:
        fmts = self.markdown_formats or ("%s",) * (len(self.headers) - 1)
        lines = [
            "| " + " | ".join(self.headers) + " |",
            "| " + " | ".join("---" for _ in self.headers) + " |",
        ]
        for row in self.rows:
            cells = [str(row[0])]
            for fmt, value in zip(fmts, row[1:]):
                cells.append(fmt % value if isinstance(value, (int, float)) else str(value))
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.headers)
        for row in self.rows:
            writer.writerow([row[0], *(repr(v) if isinstance(v, float) else v for v in row[1:])])
        return buffer.getvalue()


def mean_variance_table(
    name: str,
    stats: Mapping[str, Mapping[str, tuple[float, float]]],
) -> Table:
    """Rows of generators, one "mean (variance)" cell per dimension."""
    rows = []
    for generator in sorted(stats):
        cells = []
        for dim in SCORE_DIMENSIONS:
            mean, variance = stats[generator][dim]
            cells.append(f"{mean:.2f} ({variance:.2f})")
        rows.append((generator, *cells))
    return Table(name=name, headers=("Generator", *DIM_HEADERS), rows=tuple(rows))


def gap_table(
    name: str,
    distributions: Mapping[str, Mapping[str, GapDistribution]],
) -> Table:
    """Rows of (generator, dimension), six gap-proportion columns."""
    rows = []
    for generator in sorted(distributions):
        for dim in SCORE_DIMENSIONS:
            dist = distributions[generator][dim]
            rows.append((f"{generator}/{dim.upper()}", *dist.proportions))
    return Table(
        name=name,
        headers=("Generator/Dimension", "0", "1", "2", "3", "4", "5"),
        rows=tuple(rows),
        markdown_formats=("%.3f",) * 6,
    )


def agreement_grid_table(
    name: str,
    grids: Mapping[str, Mapping[str, Mapping[str, float]]],
    include_average: bool = True,
) -> Table:
    """Judges as columns, (generator, dimension) cells as rows, plus an
    Average row computed as the unweighted mean of each judge's cells."""
    judges = tuple(sorted(grids))
    generators = sorted({g for judge in judges for g in grids[judge]})
    rows = []
    for generator in generators:
        for dim in SCORE_DIMENSIONS:
            rows.append(
                (f"{generator}/{dim.upper()}", *(grids[j][generator][dim] for j in judges))
            )
    if include_average:
        rows.append(("Average", *(grid_average(grids[j]) for j in judges)))
    return Table(
        name=name,
        headers=("Generator/Dimension", *judges),
        rows=tuple(rows),
        markdown_formats=("%.3f",) * len(judges),
    )


def comparison_table(
    name: str,
    rmse_by_dim: Mapping[str, float],
    agreement_by_dim: Mapping[str, float],
) -> Table:
    rows = [
        (dim.upper(), rmse_by_dim[dim], agreement_by_dim[dim]) for dim in SCORE_DIMENSIONS
    ]
    return Table(
        name=name,
        headers=("Dimension", "RMSE", "A@1"),
        rows=tuple(rows),
        markdown_formats=("%.3f", "%.3f"),
    )


@dataclass
class Report:
    tables: list[Table] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def add(self, table: Table) -> None:
        self.tables.append(table)


def emit_report(report: Report, out_dir: str | Path) -> list[Path]:
    """Write every table as <name>.md and <name>.csv; deterministic output."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for table in report.tables:
        md_path = out_dir / f"{table.name}.md"
        csv_path = out_dir / f"{table.name}.csv"
        md_path.write_text(table.to_markdown(), encoding="utf-8")
        csv_path.write_text(table.to_csv(), encoding="utf-8")
        written += [md_path, csv_path]
    if report.diagnostics:
        import json

        diag_path = out_dir / "diagnostics.json"
        diag_path.write_text(
            json.dumps(report.diagnostics, indent=2, sort_keys=True), encoding="utf-8"
        )
        written.append(diag_path)
    return written
