"""Rule-based statement extraction from a table and its labels table.

Every search starts at an anchor cell and looks along its row and column in
the fixed direction order left, above, right; within one direction the
nearest cell comes first.  Cells below the anchor are only reached by the
key lookup of a (key, value) pair.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator

from .statements import Predicate, Statement, StatementSet
from .tables import CellLabel, LabelsTable, Table, validate_pair

__all__ = [
    "ExtractionResult",
    "HEADER_JOINER",
    "SearchHit",
    "append_headers",
    "append_property",
    "construct_statement",
    "extract_statements",
    "extract_with_diagnostics",
    "search_adjacent",
    "search_pair",
]

log = logging.getLogger(__name__)

HEADER_JOINER = " : "
TIME_PROPERTY = "time"
# climb level meaning "accept any header"; header_k has depth k
_BELOW_HEADERS = 4

LEFT, ABOVE, RIGHT = "left", "above", "right"


@dataclass(frozen=True)
class SearchHit:
    row: int
    col: int
    label: CellLabel
    direction: str = ""

    @property
    def pos(self) -> tuple[int, int]:
        return (self.row, self.col)


def _adjacent_cells(labels: LabelsTable, row: int, col: int) -> Iterator[tuple[int, int, str]]:
    for c in range(col - 1, -1, -1):
        yield row, c, LEFT
    for r in range(row - 1, -1, -1):
        yield r, col, ABOVE
    for c in range(col + 1, labels.n_cols):
        yield row, c, RIGHT


def _line_outward(n: int, center: int) -> Iterator[int]:
    """Indices of a line, first walking toward 0 then toward ``n - 1``, nearest first."""
    yield from range(center - 1, -1, -1)
    yield from range(center + 1, n)


def _check_bounds(labels: LabelsTable, row: int, col: int) -> None:
    if not (0 <= row < labels.n_rows and 0 <= col < labels.n_cols):
        raise IndexError(f"cell ({row}, {col}) outside {labels.shape} grid")


def search_adjacent(
    labels: LabelsTable, row: int, col: int, target: CellLabel
) -> SearchHit | None:
    """First cell labeled ``target`` to the left of, above, or right of (row, col)."""
    _check_bounds(labels, row, col)
    for r, c, direction in _adjacent_cells(labels, row, col):
        if labels.labels[r][c] is target:
            return SearchHit(r, c, target, direction)
    return None


def _orthogonal_key(labels: LabelsTable, value: SearchHit, key_label: CellLabel) -> SearchHit | None:
    grid = labels.labels
    if value.direction == ABOVE:
        for c in _line_outward(labels.n_cols, value.col):
            if grid[value.row][c] is key_label:
                return SearchHit(value.row, c, key_label, "row")
    else:
        for r in _line_outward(labels.n_rows, value.row):
            if grid[r][value.col] is key_label:
                return SearchHit(r, value.col, key_label, "column")
    return None


def _iter_pairs(
    labels: LabelsTable, row: int, col: int, key_label: CellLabel, value_label: CellLabel
) -> Iterator[tuple[SearchHit, SearchHit]]:
    for r, c, direction in _adjacent_cells(labels, row, col):
        if labels.labels[r][c] is not value_label:
            continue
        value = SearchHit(r, c, value_label, direction)
        key = _orthogonal_key(labels, value, key_label)
        if key is not None:
            yield key, value


def search_pair(
    labels: LabelsTable,
    row: int,
    col: int,
    key_label: CellLabel,
    value_label: CellLabel,
) -> tuple[SearchHit, SearchHit] | None:
    """Find a (key, value) pair such as subject / subject_value for an anchor.

    Value cells are visited in adjacent-search order.  For a value found in
    the anchor's row the key is sought in the value's column (upward, then
    downward); for a value found above the anchor, in the value's row
    (leftward, then rightward).  The first value that has a key wins.
    """
    _check_bounds(labels, row, col)
    return next(_iter_pairs(labels, row, col, key_label, value_label), None)


def _above_then_left(row: int, col: int) -> Iterator[tuple[int, int]]:
    for r in range(row - 1, -1, -1):
        yield r, col
    for c in range(col - 1, -1, -1):
        yield row, c


def append_headers(
    table: Table,
    labels: LabelsTable,
    row: int,
    col: int,
    property: str,
    level: int = _BELOW_HEADERS,
) -> str:
    """Prefix ``property`` with the section headers governing cell (row, col).

    ``level`` is a header depth (1 = header_1); only strictly more senior
    headers (smaller depth) are taken.  The climb continues from each header
    found until a header_1 is consumed or nothing more senior exists.
    """
    for r, c in _above_then_left(row, col):
        depth = labels.labels[r][c].header_depth
        if depth is not None and depth < level:
            property = table.cells[r][c] + HEADER_JOINER + property
            if depth == 1:
                return property
            return append_headers(table, labels, r, c, property, depth)
    return property


def append_property(
    table: Table, labels: LabelsTable, row: int, col: int, subproperty: str
) -> tuple[str, tuple[int, int] | None]:
    """Prefix a sub-property with the nearest property above or to the left.

    Returns the joined text and the property cell position (None if no
    property was found and the text is unchanged).
    """
    for r, c in _above_then_left(row, col):
        if labels.labels[r][c] is CellLabel.PROPERTY:
            return table.cells[r][c] + HEADER_JOINER + subproperty, (r, c)
    return subproperty, None


def construct_statement(
    table: Table, labels: LabelsTable, row: int, col: int, property: str
) -> Statement:
    cells = table.cells
    unit = search_adjacent(labels, row, col, CellLabel.UNIT_VALUE)
    subject = search_pair(labels, row, col, CellLabel.SUBJECT, CellLabel.SUBJECT_VALUE)
    main = Predicate(
        property=property,
        property_value=cells[row][col],
        unit=cells[unit.row][unit.col] if unit else "",
        subject=cells[subject[0].row][subject[0].col] if subject else "",
        subject_value=cells[subject[1].row][subject[1].col] if subject else "",
    )
    predicates = [main]

    time = search_adjacent(labels, row, col, CellLabel.TIME_VALUE)
    if time is not None:
        predicates.append(Predicate(TIME_PROPERTY, cells[time.row][time.col]))

    seen_keys: set[tuple[int, int]] = set()
    for key, value in _iter_pairs(labels, row, col, CellLabel.KEY, CellLabel.KEY_VALUE):
        if key.pos in seen_keys:
            continue
        seen_keys.add(key.pos)
        predicates.append(Predicate(cells[key.row][key.col], cells[value.row][value.col]))
    return Statement(predicates)


@dataclass
class ExtractionResult:
    statements: StatementSet
    # property_value cells without a reachable (sub)property
    skipped: list[tuple[int, int]] = field(default_factory=list)


def _resolve_property(table: Table, labels: LabelsTable, row: int, col: int) -> str | None:
    prop = search_adjacent(labels, row, col, CellLabel.PROPERTY)
    if prop is not None:
        return append_headers(table, labels, prop.row, prop.col, table.cells[prop.row][prop.col])
    sub = search_adjacent(labels, row, col, CellLabel.SUBPROPERTY)
    if sub is None:
        return None
    text, origin = append_property(table, labels, sub.row, sub.col, table.cells[sub.row][sub.col])
    r, c = origin if origin is not None else sub.pos
    return append_headers(table, labels, r, c, text)


def extract_with_diagnostics(table: Table, labels: LabelsTable) -> ExtractionResult:
    validate_pair(table, labels)
    result = ExtractionResult(StatementSet())
    found: list[Statement] = []
    for r, label_row in enumerate(labels.labels):
        for c, label in enumerate(label_row):
            if label is not CellLabel.PROPERTY_VALUE:
                continue
            prop = _resolve_property(table, labels, r, c)
            if prop is None:
                result.skipped.append((r, c))
                continue
            found.append(construct_statement(table, labels, r, c, prop))
    if result.skipped:
        log.debug("skipped %d property_value cells without property", len(result.skipped))
    result.statements = StatementSet(found)
    return result


def extract_statements(table: Table, labels: LabelsTable) -> StatementSet:
    """Convert a table and its labels table into statements, row-major."""
    return extract_with_diagnostics(table, labels).statements
