"""Statement extraction from semantically labeled tables, and its evaluation."""

from .extraction import extract_statements
from .scoring import tree_edit_distance
from .statements import (
    Predicate,
    Statement,
    StatementSet,
    build_tree,
    parse_records_markdown,
    statements_to_markdown,
)
from .tables import (
    CellLabel,
    LabelsTable,
    Table,
    parse_labels_markdown,
    parse_markdown_table,
    render_markdown_table,
    validate_pair,
)

__version__ = "0.1.0"

__all__ = [
    "CellLabel",
    "LabelsTable",
    "Predicate",
    "Statement",
    "StatementSet",
    "Table",
    "build_tree",
    "extract_statements",
    "parse_labels_markdown",
    "parse_markdown_table",
    "parse_records_markdown",
    "render_markdown_table",
    "statements_to_markdown",
    "tree_edit_distance",
    "validate_pair",
]
