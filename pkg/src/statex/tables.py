"""Tables, semantic cell labels and their markdown / JSON forms.

Markdown grids follow the pipe-table layout produced by ``pandas.to_markdown``:

    | 0                        | 1    | 2    |
    |--------------------------|------|------|
    | Emissions Scope          | FY21 | FY22 |
    | Scope 1 Direct Emissions | 24   | 374  |

The leading ``0 | 1 | 2`` row is a column-index header; it is dropped on parse
when it is the first row and is directly followed by a separator line.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import EmptyInput, ShapeMismatch, UnknownLabel

__all__ = [
    "CellLabel",
    "LabelsTable",
    "Table",
    "TableKind",
    "parse_labels_markdown",
    "parse_markdown_table",
    "render_labels_markdown",
    "render_markdown_table",
    "split_markdown_grid",
    "validate_pair",
]


class TableKind(str, enum.Enum):
    SIMPLE = "simple"
    COMPLEX = "complex"
    QUALITATIVE = "qualitative"
    UNKNOWN = "unknown"


class CellLabel(str, enum.Enum):
    """Semantic role of a table cell.

    Declaration order is the annotation precedence: when a cell could carry
    several labels, the one declared first wins.
    """

    PROPERTY = "property"
    PROPERTY_VALUE = "property_value"
    SUBPROPERTY = "subproperty"
    SUBJECT = "subject"
    SUBJECT_VALUE = "subject_value"
    UNIT = "unit"
    UNIT_VALUE = "unit_value"
    TIME = "time"
    TIME_VALUE = "time_value"
    KEY = "key"
    KEY_VALUE = "key_value"
    HEADER_1 = "header_1"
    HEADER_2 = "header_2"
    HEADER_3 = "header_3"
    EMPTY = "empty"
    RUBBISH = "rubbish"

    @property
    def precedence(self) -> int:
        """Rank in the precedence order, 0 being the highest."""
        return _PRECEDENCE[self]

    def outranks(self, other: CellLabel) -> bool:
        return self.precedence < other.precedence

    @property
    def header_depth(self) -> int | None:
        """1, 2 or 3 for header labels (1 is the outermost), else None."""
        return _HEADER_DEPTH.get(self)

    @property
    def is_header(self) -> bool:
        return self in _HEADER_DEPTH

    @classmethod
    def parse(cls, text: str) -> CellLabel:
        """Normalize free-form label text (``"Property Value"``) to a label.

        Raises ``KeyError`` when the text names no label.
        """
        key = _LABEL_SEP.sub("_", text.strip().lower())
        key = _LABEL_ALIASES.get(key, key)
        return cls(key) if key in _LABEL_VALUES else _raise_key(text)

    def __str__(self) -> str:
        return self.value


def _raise_key(text: str) -> CellLabel:
    raise KeyError(text)


_PRECEDENCE = {label: i for i, label in enumerate(CellLabel)}
_HEADER_DEPTH = {CellLabel.HEADER_1: 1, CellLabel.HEADER_2: 2, CellLabel.HEADER_3: 3}
_LABEL_VALUES = frozenset(label.value for label in CellLabel)
_LABEL_SEP = re.compile(r"[\s\-]+")
_LABEL_ALIASES = {"sub_property": "subproperty"}


def _freeze_grid(rows: Iterable[Iterable[Any]], convert) -> tuple[tuple[Any, ...], ...]:
    grid = tuple(tuple(convert(c) for c in row) for row in rows)
    if grid:
        width = len(grid[0])
        for i, row in enumerate(grid):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} cells, expected {width}")
    return grid


@dataclass(frozen=True)
class Table:
    """Rectangular grid of trimmed cell text.

    ``id`` and ``kind`` are metadata and do not take part in equality.
    """

    cells: tuple[tuple[str, ...], ...]
    id: str | None = field(default=None, compare=False)
    kind: TableKind = field(default=TableKind.UNKNOWN, compare=False)

    def __init__(
        self,
        cells: Iterable[Iterable[Any]],
        id: str | None = None,
        kind: TableKind | str = TableKind.UNKNOWN,
    ) -> None:
        object.__setattr__(self, "cells", _freeze_grid(cells, lambda c: str(c).strip()))
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "kind", TableKind(kind))

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    @property
    def n_cols(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def __getitem__(self, pos: tuple[int, int]) -> str:
        r, c = pos
        return self.cells[r][c]

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "cells": [list(row) for row in self.cells],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> Table:
        return cls(data["cells"], id=data.get("id"), kind=data.get("kind", "unknown"))


@dataclass(frozen=True)
class LabelsTable:
    labels: tuple[tuple[CellLabel, ...], ...]

    def __init__(self, labels: Iterable[Iterable[CellLabel | str]]) -> None:
        object.__setattr__(
            self,
            "labels",
            _freeze_grid(labels, lambda c: c if isinstance(c, CellLabel) else CellLabel.parse(c)),
        )

    @property
    def n_rows(self) -> int:
        return len(self.labels)

    @property
    def n_cols(self) -> int:
        return len(self.labels[0]) if self.labels else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def __getitem__(self, pos: tuple[int, int]) -> CellLabel:
        r, c = pos
        return self.labels[r][c]

    def count(self, label: CellLabel) -> int:
        return sum(row.count(label) for row in self.labels)

    def to_json(self) -> dict[str, Any]:
        return {"labels": [[lab.value for lab in row] for row in self.labels]}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> LabelsTable:
        return cls(data["labels"])


def validate_pair(table: Table, labels: LabelsTable) -> tuple[Table, LabelsTable]:
    """Check that ``labels`` annotates ``table`` cell for cell."""
    if table.n_rows == 0 or table.n_cols == 0 or table.shape != labels.shape:
        raise ShapeMismatch(table.shape, labels.shape)
    return table, labels


# -- markdown -----------------------------------------------------------------

_SEPARATOR = re.compile(r"^[\s|:\-]*-[\s|:\-]*$")
_ESCAPE = re.compile(r"\\([\\|\-])")
_DASHES_ONLY = re.compile(r"^[\s:\-]*$")


def _split_row(line: str) -> list[str]:
    """Split one pipe-delimited line on unescaped pipes, keeping escapes."""
    cells: list[str] = []
    buf: list[str] = []
    i = 0
    while i < len(line):
        ch = line[i]
        if ch == "\\" and i + 1 < len(line):
            buf.append(line[i : i + 2])
            i += 2
            continue
        if ch == "|":
            cells.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
        i += 1
    cells.append("".join(buf))
    if line.lstrip().startswith("|"):
        cells = cells[1:]
    if cells and _ends_with_pipe(line):
        cells = cells[:-1]
    return cells


def _ends_with_pipe(line: str) -> bool:
    stripped = line.rstrip()
    if not stripped.endswith("|"):
        return False
    # an odd run of backslashes before the final pipe escapes it
    n = len(stripped) - 1 - len(stripped[:-1].rstrip("\\"))
    return n % 2 == 0


def _unescape(text: str) -> str:
    return _ESCAPE.sub(r"\1", text.strip())


def _is_index_header(row: list[str]) -> bool:
    return [c.strip() for c in row] == [str(i) for i in range(len(row))]


def split_markdown_grid(text: str) -> list[list[str]]:
    """Return the padded, unescaped cell grid of a markdown pipe table.

    Lines without a pipe are ignored, separator lines are dropped and a
    leading column-index header is removed.
    """
    lines = [ln.rstrip("\r") for ln in text.split("\n") if "|" in ln]
    rows: list[list[str]] = []
    for i, line in enumerate(lines):
        if _SEPARATOR.match(line):
            continue
        raw = _split_row(line)
        if (
            not rows
            and i == 0
            and i + 1 < len(lines)
            and _SEPARATOR.match(lines[i + 1])
            and _is_index_header(raw)
        ):
            continue
        rows.append([_unescape(c) for c in raw])
    if not rows:
        raise EmptyInput("no data rows in markdown table")
    width = max(len(r) for r in rows)
    return [r + [""] * (width - len(r)) for r in rows]


def parse_markdown_table(text: str) -> Table:
    return Table(split_markdown_grid(text))


def _escape_cell(text: str) -> str:
    text = text.replace("\\", "\\\\").replace("|", "\\|")
    return re.sub(r"\r\n|\r|\n", "<br>", text)


def render_grid(rows: Sequence[Sequence[str]], index_header: bool = False) -> str:
    if not rows or not rows[0]:
        raise EmptyInput("cannot render an empty table")
    escaped = [[_escape_cell(c) for c in row] for row in rows]
    for row in escaped:
        # a row made only of dashes/colons would read back as a separator
        if all(_DASHES_ONLY.match(c) for c in row) and any("-" in c for c in row):
            j = next(k for k, c in enumerate(row) if "-" in c)
            row[j] = row[j].replace("-", "\\-")
    n_cols = len(escaped[0])
    widths = [max(1, *(len(r[j]) for r in escaped)) for j in range(n_cols)]

    def line(cells: Sequence[str]) -> str:
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    sep = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    out = []
    if index_header or _is_index_header(list(rows[0])):
        out += [line([str(j) for j in range(n_cols)]), sep]
    out.append(line(escaped[0]))
    out.append(sep)
    out.extend(line(r) for r in escaped[1:])
    return "\n".join(out)


def render_markdown_table(table: Table, index_header: bool = False) -> str:
    """Render ``table`` as a pipe table with a separator after the first row.

    Literal pipes and backslashes are backslash-escaped; embedded newlines
    become ``<br>`` (and therefore do not round-trip).  ``index_header``
    adds a ``0 | 1 | ...`` column-index line on top, as in model prompts.
    """
    return render_grid(table.cells, index_header)


def parse_labels_markdown(text: str) -> LabelsTable:
    grid = split_markdown_grid(text)
    labels: list[list[CellLabel]] = []
    for r, row in enumerate(grid):
        out = []
        for c, cell in enumerate(row):
            try:
                out.append(CellLabel.parse(cell))
            except (KeyError, ValueError):
                raise UnknownLabel(r, c, cell) from None
        labels.append(out)
    return LabelsTable(labels)


def render_labels_markdown(labels: LabelsTable) -> str:
    return render_grid([[lab.value for lab in row] for row in labels.labels])
