"""Statement records, their markdown record form, and statement trees."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, fields
from typing import Any, Iterable, Iterator

from .errors import EmptyInput, MalformedRecords
from .tables import render_grid, split_markdown_grid

__all__ = [
    "LEAF_ORDER",
    "RECORD_COLUMNS",
    "Node",
    "NodeType",
    "Predicate",
    "Statement",
    "StatementSet",
    "StatementTree",
    "build_tree",
    "parse_records_markdown",
    "statements_to_markdown",
]

# column order of the record markdown form
RECORD_COLUMNS = ("property", "property_value", "unit", "subject", "subject_value")
# child order of predicate nodes in the tree form
LEAF_ORDER = ("subject", "subject_value", "property", "property_value", "unit")
SEP_TOKEN = "<sep>"


@dataclass(frozen=True)
class Predicate:
    property: str
    property_value: str
    unit: str = ""
    subject: str = ""
    subject_value: str = ""

    def to_json(self) -> dict[str, str]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> Predicate:
        return cls(**{k: str(data.get(k) or "") for k in RECORD_COLUMNS})


@dataclass(frozen=True)
class Statement:
    predicates: tuple[Predicate, ...]

    def __init__(self, predicates: Iterable[Predicate]) -> None:
        preds = tuple(predicates)
        if not preds:
            raise ValueError("a statement needs at least one predicate")
        object.__setattr__(self, "predicates", preds)

    def __iter__(self) -> Iterator[Predicate]:
        return iter(self.predicates)

    def __len__(self) -> int:
        return len(self.predicates)


@dataclass(frozen=True)
class StatementSet:
    statements: tuple[Statement, ...] = ()

    def __init__(self, statements: Iterable[Statement] = ()) -> None:
        object.__setattr__(self, "statements", tuple(statements))

    def __iter__(self) -> Iterator[Statement]:
        return iter(self.statements)

    def __len__(self) -> int:
        return len(self.statements)

    def __getitem__(self, i: int) -> Statement:
        return self.statements[i]

    def predicates(self) -> Iterator[Predicate]:
        for st in self.statements:
            yield from st.predicates

    def to_json(self) -> list[list[dict[str, str]]]:
        return [[p.to_json() for p in st] for st in self.statements]

    @classmethod
    def from_json(cls, data: list[list[dict[str, Any]]]) -> StatementSet:
        return cls(Statement(Predicate.from_json(p) for p in st) for st in data)


# -- record markdown ------------------------------------------------------------


def statements_to_markdown(statements: StatementSet) -> str:
    blocks = []
    for st in statements:
        rows = [list(RECORD_COLUMNS)]
        rows += [[getattr(p, col) for col in RECORD_COLUMNS] for p in st]
        blocks.append(render_grid(rows))
    return f"\n{SEP_TOKEN}\n".join(blocks)


_SEP_SPLIT = re.compile(r"[ \t]*" + re.escape(SEP_TOKEN) + r"[ \t]*")


def _parse_record_block(block: str) -> Statement:
    try:
        grid = split_markdown_grid(block)
    except EmptyInput:
        raise MalformedRecords("no table rows") from None
    header = [h.strip().lower() for h in grid[0]]
    for h in header:
        if h not in RECORD_COLUMNS:
            raise MalformedRecords(f"unknown column {h!r}")
    if len(set(header)) != len(header):
        raise MalformedRecords("duplicate columns")
    if "property" not in header:
        raise MalformedRecords("missing property column")
    body = grid[1:]
    if not body:
        raise MalformedRecords("statement without predicates")
    preds = []
    for row in body:
        values = dict(zip(header, row))
        preds.append(Predicate(**{col: values.get(col, "") for col in RECORD_COLUMNS}))
    return Statement(preds)


def parse_records_markdown(text: str) -> StatementSet:
    """Parse ``<sep>``-separated record tables back into statements.

    Raises ``MalformedRecords`` for anything that is not a sequence of
    well-formed record tables.
    """
    if not text.strip():
        return StatementSet()
    blocks = _SEP_SPLIT.split(text)
    return StatementSet(_parse_record_block(b) for b in blocks)


# -- trees ------------------------------------------------------------------------


class NodeType(str, enum.Enum):
    ROOT = "root"
    STATEMENT = "statement"
    PREDICATE = "predicate"
    SUBJECT = "subject"
    SUBJECT_VALUE = "subject_value"
    PROPERTY = "property"
    PROPERTY_VALUE = "property_value"
    UNIT = "unit"


@dataclass(eq=False)
class Node:
    name: str
    type: NodeType
    value: str | None = None
    parent: Node | None = field(default=None, repr=False)
    children: list[Node] = field(default_factory=list, repr=False)

    def add(self, segment: str, type: NodeType, value: str | None = None) -> Node:
        child = Node(f"{self.name}/{segment}", type, value, parent=self)
        self.children.append(child)
        return child

    def iter_preorder(self) -> Iterator[Node]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def signature(self) -> tuple:
        """Hashable structural fingerprint of the subtree rooted here."""
        return (self.name, self.type, self.value, tuple(c.signature() for c in self.children))


@dataclass(eq=False)
class StatementTree:
    root: Node

    def __len__(self) -> int:
        return sum(1 for _ in self.root.iter_preorder())

    def nodes(self) -> list[Node]:
        return list(self.root.iter_preorder())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StatementTree):
            return NotImplemented
        return self.root.signature() == other.root.signature()

    def render(self) -> str:
        """ASCII listing, one node per line."""
        lines: list[str] = []

        def walk(node: Node, prefix: str, last: bool, top: bool) -> None:
            label = f"Node({node.name!r}, type={node.type.value!r}, value={node.value!r})"
            lines.append(label if top else prefix + ("`-- " if last else "|-- ") + label)
            child_prefix = "" if top else prefix + ("    " if last else "|   ")
            for i, ch in enumerate(node.children):
                walk(ch, child_prefix, i == len(node.children) - 1, False)

        walk(self.root, "", True, True)
        return "\n".join(lines)


def build_tree(statements: StatementSet) -> StatementTree:
    root = Node("/root", NodeType.ROOT)
    for i, st in enumerate(statements):
        s_node = root.add(f"s{i}", NodeType.STATEMENT)
        for j, pred in enumerate(st):
            p_node = s_node.add(f"p{j}", NodeType.PREDICATE)
            for leaf in LEAF_ORDER:
                p_node.add(leaf, NodeType(leaf), getattr(pred, leaf))
    return StatementTree(root)
