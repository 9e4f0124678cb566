"""Entity-level precision / recall / F1 over per-attribute value sets."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..statements import StatementSet

ENTITY_ATTRIBUTES = ("subject", "subject_value", "property", "property_value", "unit")


def entity_sets(statements: StatementSet) -> dict[str, set[str]]:
    """Distinct non-empty values of each attribute, pooled over the whole set."""
    sets: dict[str, set[str]] = {attr: set() for attr in ENTITY_ATTRIBUTES}
    for pred in statements.predicates():
        for attr in ENTITY_ATTRIBUTES:
            value = getattr(pred, attr)
            if value:
                sets[attr].add(value)
    return sets


@dataclass(frozen=True)
class Counts:
    n_both: int = 0
    n_gt_only: int = 0
    n_pred_only: int = 0

    def __add__(self, other: Counts) -> Counts:
        return Counts(
            self.n_both + other.n_both,
            self.n_gt_only + other.n_gt_only,
            self.n_pred_only + other.n_pred_only,
        )

    @property
    def _empty(self) -> bool:
        return self.n_both == self.n_gt_only == self.n_pred_only == 0

    @property
    def precision(self) -> float:
        if self._empty:
            return 1.0
        denom = self.n_both + self.n_pred_only
        return self.n_both / denom if denom else 0.0

    @property
    def recall(self) -> float:
        if self._empty:
            return 1.0
        denom = self.n_both + self.n_gt_only
        return self.n_both / denom if denom else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    @property
    def accuracy(self) -> float:
        if self._empty:
            return 1.0
        return self.n_both / (self.n_both + self.n_gt_only + self.n_pred_only)


@dataclass(frozen=True)
class EntityScore:
    per_attribute: dict[str, Counts] = field(default_factory=dict)

    @property
    def pooled(self) -> Counts:
        total = Counts()
        for c in self.per_attribute.values():
            total = total + c
        return total

    @property
    def precision(self) -> float:
        return self.pooled.precision

    @property
    def recall(self) -> float:
        return self.pooled.recall

    @property
    def f1(self) -> float:
        return self.pooled.f1

    @property
    def accuracy(self) -> float:
        return self.pooled.accuracy


def entity_scores(ground_truth: StatementSet, prediction: StatementSet) -> EntityScore:
    """Compare attribute value sets; values only in the ground truth are misses."""
    gt, pred = entity_sets(ground_truth), entity_sets(prediction)
    return EntityScore(
        {
            attr: Counts(
                n_both=len(gt[attr] & pred[attr]),
                n_gt_only=len(gt[attr] - pred[attr]),
                n_pred_only=len(pred[attr] - gt[attr]),
            )
            for attr in ENTITY_ATTRIBUTES
        }
    )
