"""Tree similarity, edit ratios, entity scores and batch aggregation."""

from .entities import ENTITY_ATTRIBUTES, Counts, EntityScore, entity_scores, entity_sets
from .levenshtein import levenshtein, normalized_levenshtein
from .oracle import brute_force_ted
from .report import (
    AggregateReport,
    ColumnStats,
    ScoreRow,
    aggregate,
    canonical_order,
    invalid_row,
    score_pair,
)
from .ted import CROSS_TYPE_COST, CostModel, EditSummary, edit_ratios, rename_cost, tree_edit_distance

__all__ = [
    "AggregateReport",
    "CROSS_TYPE_COST",
    "ColumnStats",
    "CostModel",
    "Counts",
    "ENTITY_ATTRIBUTES",
    "EditSummary",
    "EntityScore",
    "ScoreRow",
    "aggregate",
    "brute_force_ted",
    "canonical_order",
    "edit_ratios",
    "entity_scores",
    "entity_sets",
    "invalid_row",
    "levenshtein",
    "normalized_levenshtein",
    "rename_cost",
    "score_pair",
    "tree_edit_distance",
]
