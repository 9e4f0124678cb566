"""Batch evaluation of model predictions against ground-truth statements.

Ground truth lives in ``<gt_dir>/<id>.json``::

    {"id": ..., "table": <Table JSON>, "labels": <LabelsTable JSON>,
     "statements": <StatementSet JSON>}

``statements`` may be omitted when ``table`` and ``labels`` are present; it
is then extracted from them.  Predictions are raw model outputs: for the
direct and indirect_2d tasks ``<pred_dir>/<id>.txt``; for indirect_1d
``<pred_dir>/<id>.json`` holding a list of per-cell outputs in row-major
order (flat or nested by row).
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from ..errors import DataError, MissingGroundTruth
from ..extraction import extract_statements
from ..scoring import AggregateReport, CostModel, ScoreRow, aggregate, invalid_row, score_pair
from ..statements import StatementSet
from ..tables import LabelsTable, Table
from .prompts import TaskKind, parse_model_response

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroundTruth:
    id: str
    statements: StatementSet
    table: Table | None = None
    labels: LabelsTable | None = None

    @classmethod
    def from_json(cls, data: Mapping[str, Any], default_id: str = "") -> GroundTruth:
        table = Table.from_json(data["table"]) if data.get("table") else None
        labels = LabelsTable.from_json(data["labels"]) if data.get("labels") else None
        if data.get("statements") is not None:
            statements = StatementSet.from_json(data["statements"])
        elif table is not None and labels is not None:
            statements = extract_statements(table, labels)
        else:
            raise DataError(f"ground truth {default_id!r} has neither statements nor table+labels")
        return cls(str(data.get("id") or default_id), statements, table, labels)

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "table": self.table.to_json() if self.table else None,
            "labels": self.labels.to_json() if self.labels else None,
            "statements": self.statements.to_json(),
        }


def load_ground_truth(gt_dir: str | Path) -> dict[str, GroundTruth]:
    out = {}
    for path in sorted(Path(gt_dir).glob("*.json")):
        data = json.loads(path.read_text(encoding="utf-8"))
        gt = GroundTruth.from_json(data, default_id=path.stem)
        out[gt.id] = gt
    return out


def load_predictions(pred_dir: str | Path, task: TaskKind | str) -> dict[str, Any]:
    task = TaskKind(task)
    out: dict[str, Any] = {}
    if task is TaskKind.INDIRECT_1D:
        for path in sorted(Path(pred_dir).glob("*.json")):
            out[path.stem] = json.loads(path.read_text(encoding="utf-8"))
    else:
        for path in sorted(Path(pred_dir).glob("*.txt")):
            out[path.stem] = path.read_text(encoding="utf-8")
    return out


def _flatten(cells: Sequence[Any]) -> list[str]:
    flat: list[str] = []
    for item in cells:
        if isinstance(item, (list, tuple)):
            flat.extend(str(x) for x in item)
        else:
            flat.append(str(item))
    return flat


def predicted_statements(
    task: TaskKind, raw: Any, gt: GroundTruth
) -> tuple[StatementSet | None, str]:
    """Statements recovered from one raw prediction, or (None, reason) if invalid."""
    if task is TaskKind.DIRECT:
        parsed = parse_model_response(task, raw)
        return (None, parsed.reason) if parsed.invalid else (parsed.value, "")

    if gt.table is None:
        raise DataError(f"{gt.id!r}: indirect tasks need the source table")
    if task is TaskKind.INDIRECT_2D:
        parsed = parse_model_response(task, raw, gt.table)
        if parsed.invalid:
            return None, parsed.reason
        labels = parsed.value
    else:
        outputs = _flatten(raw if isinstance(raw, (list, tuple)) else [raw])
        n_rows, n_cols = gt.table.shape
        if len(outputs) != n_rows * n_cols:
            return None, "shape mismatch"
        cell_labels = []
        for out in outputs:
            parsed = parse_model_response(task, out)
            if parsed.invalid:
                return None, parsed.reason
            cell_labels.append(parsed.value)
        labels = LabelsTable(cell_labels[r * n_cols : (r + 1) * n_cols] for r in range(n_rows))
    return extract_statements(gt.table, labels), ""


def score_prediction(
    task: TaskKind, raw: Any, gt: GroundTruth, cost: CostModel, canonical: bool
) -> ScoreRow:
    try:
        statements, reason = predicted_statements(task, raw, gt)
    except DataError as exc:
        statements, reason = None, str(exc)
    if statements is None:
        return invalid_row(gt.id, reason)
    return score_pair(gt.id, gt.statements, statements, cost, canonical)


def _score_item(args: tuple) -> ScoreRow:
    return score_prediction(*args)


def run_evaluation(
    ground_truth: str | Path | Mapping[str, GroundTruth],
    predictions: str | Path | Mapping[str, Any],
    task: TaskKind | str,
    cost: CostModel | None = None,
    canonical: bool = False,
    workers: int = 1,
) -> AggregateReport:
    """Score every prediction against its ground truth and aggregate the batch.

    Ground-truth tables without a prediction are scored as invalid.
    """
    task = TaskKind(task)
    cost = cost or CostModel()
    gts = ground_truth if isinstance(ground_truth, Mapping) else load_ground_truth(ground_truth)
    preds = predictions if isinstance(predictions, Mapping) else load_predictions(predictions, task)
    for pid in preds:
        if pid not in gts:
            raise MissingGroundTruth(pid)

    jobs = []
    rows: list[ScoreRow] = []
    for gid in sorted(gts):
        if gid not in preds:
            rows.append(invalid_row(gid, "missing prediction"))
        else:
            jobs.append((task, preds[gid], gts[gid], cost, canonical))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows.extend(pool.map(_score_item, jobs))
    else:
        rows.extend(_score_item(job) for job in jobs)
    n_invalid = sum(r.invalid for r in rows)
    if n_invalid:
        log.info("%d of %d predictions invalid", n_invalid, len(rows))
    return aggregate(rows)
