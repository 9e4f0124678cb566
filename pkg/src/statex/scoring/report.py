"""Per-table score rows and their batch aggregate (mean, SEM, 99% CI)."""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Iterable

from ..errors import EmptyBatch
from ..statements import StatementSet, build_tree
from .entities import entity_scores
from .ted import CostModel, tree_edit_distance

Z_99 = 2.576

# numeric columns aggregated over the batch
METRIC_COLUMNS = (
    "similarity",
    "distance",
    "n_edits",
    "r_insert",
    "r_delete",
    "r_rename",
    "f1",
    "precision",
    "recall",
    "accuracy",
)


@dataclass(frozen=True)
class ScoreRow:
    """Scores for one table.

    Invalid predictions carry similarity, f1, precision, recall and accuracy
    of 0; their tree-derived columns are None and are left out of the means.
    """

    id: str
    similarity: float
    distance: float | None
    n_edits: int | None
    r_insert: float | None
    r_delete: float | None
    r_rename: float | None
    f1: float
    precision: float
    recall: float
    accuracy: float
    invalid: bool = False
    reason: str = ""


def canonical_order(statements: StatementSet) -> StatementSet:
    """Sort statements by (property, property_value) of their first predicate."""
    key = lambda st: (st.predicates[0].property, st.predicates[0].property_value)  # noqa: E731
    return StatementSet(sorted(statements, key=key))


def score_pair(
    table_id: str,
    ground_truth: StatementSet,
    prediction: StatementSet,
    cost: CostModel | None = None,
    canonical: bool = False,
) -> ScoreRow:
    if canonical:
        ground_truth, prediction = canonical_order(ground_truth), canonical_order(prediction)
    summary = tree_edit_distance(build_tree(prediction), build_tree(ground_truth), cost)
    r_ins, r_del, r_ren = summary.ratios()
    ent = entity_scores(ground_truth, prediction)
    return ScoreRow(
        id=table_id,
        similarity=summary.similarity,
        distance=summary.distance,
        n_edits=summary.n_edits,
        r_insert=r_ins,
        r_delete=r_del,
        r_rename=r_ren,
        f1=ent.f1,
        precision=ent.precision,
        recall=ent.recall,
        accuracy=ent.accuracy,
    )


def invalid_row(table_id: str, reason: str) -> ScoreRow:
    return ScoreRow(
        id=table_id,
        similarity=0.0,
        distance=None,
        n_edits=None,
        r_insert=None,
        r_delete=None,
        r_rename=None,
        f1=0.0,
        precision=0.0,
        recall=0.0,
        accuracy=0.0,
        invalid=True,
        reason=reason or "invalid output",
    )


@dataclass(frozen=True)
class ColumnStats:
    n: int
    mean: float
    sem: float
    ci99: float


def column_stats(values: Iterable[float]) -> ColumnStats | None:
    xs = [float(v) for v in values]
    if not xs:
        return None
    mean = math.fsum(xs) / len(xs)
    # single observation: no spread estimate, report 0
    sem = statistics.stdev(xs) / math.sqrt(len(xs)) if len(xs) > 1 else 0.0
    return ColumnStats(n=len(xs), mean=mean, sem=sem, ci99=Z_99 * sem)


@dataclass(frozen=True)
class AggregateReport:
    rows: tuple[ScoreRow, ...]
    stats: dict[str, ColumnStats | None]
    invalid_fraction: float

    def mean(self, column: str) -> float:
        s = self.stats[column]
        return s.mean if s is not None else float("nan")

    def to_json(self) -> dict[str, Any]:
        return {
            "rows": [asdict(r) for r in self.rows],
            "aggregate": {
                "n_tables": len(self.rows),
                "invalid_fraction": self.invalid_fraction,
                **{k: (asdict(v) if v else None) for k, v in self.stats.items()},
            },
        }

    def write_csv(self, path: str | Path) -> None:
        names = [f.name for f in fields(ScoreRow)]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=names)
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: ("" if v is None else v) for k, v in asdict(row).items()})


def aggregate(rows: Iterable[ScoreRow]) -> AggregateReport:
    ordered = tuple(sorted(rows, key=lambda r: r.id))
    if not ordered:
        raise EmptyBatch("cannot aggregate an empty batch")
    stats = {
        col: column_stats(getattr(r, col) for r in ordered if getattr(r, col) is not None)
        for col in METRIC_COLUMNS
    }
    invalid = sum(r.invalid for r in ordered)
    return AggregateReport(ordered, stats, invalid / len(ordered))
