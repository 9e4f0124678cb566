from __future__ import annotations

import json
from pathlib import Path

import pytest

from statex.statements import Predicate, Statement, StatementSet
from statex.tables import LabelsTable, Table, parse_markdown_table

DATA = Path(__file__).parent / "data"

ORG = ("Organization", "XYZ")
UNIT = "million metric tons of CO2e"


def read(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


def emissions_statement(value: str, year: str, prop: str = "scope 1 emissions") -> Statement:
    """One statement of the worked tree example: an emissions figure plus its year."""
    return Statement(
        [Predicate(prop, value, UNIT, *ORG), Predicate("time", year, "year", *ORG)]
    )


@pytest.fixture
def splunk_table() -> Table:
    return parse_markdown_table(read("splunk_table.md"))


@pytest.fixture
def splunk_labels() -> LabelsTable:
    return LabelsTable.from_json(json.loads(read("splunk_labels.json")))


@pytest.fixture
def oneshot_table() -> Table:
    return parse_markdown_table(read("oneshot_table.md"))


@pytest.fixture
def oneshot_labels() -> LabelsTable:
    return LabelsTable.from_json(json.loads(read("oneshot_labels.json")))


@pytest.fixture
def splunk_response() -> str:
    return read("splunk_response.txt")


@pytest.fixture
def invalid_response() -> str:
    return read("invalid_response.txt")


@pytest.fixture
def tree_pair_renames() -> tuple[StatementSet, StatementSet]:
    """Statements s0 and s1: same shape, different value and year."""
    return (
        StatementSet([emissions_statement("3.3", "2020")]),
        StatementSet([emissions_statement("2.5", "2021")]),
    )


@pytest.fixture
def tree_pair_truncated() -> tuple[StatementSet, StatementSet]:
    """(prediction, ground truth): the prediction lost its time predicate and misnames scope."""
    gt = StatementSet([emissions_statement("3.3", "2020")])
    pred = StatementSet(
        [Statement([Predicate("scope 2 emissions", "3.3", UNIT, *ORG)])]
    )
    return pred, gt


_LEAF_TYPES = ("subject", "subject_value", "property", "property_value", "unit")
_VALUES = ("", "a", "ab", "b", "2020", "2021", "3.3", "3,3", "x y")


def random_tree(rng, n_nodes: int):
    """Random ordered tree of ``n_nodes`` nodes with statement-tree types and small values."""
    from statex.statements import Node, NodeType

    root = Node("/root", NodeType.ROOT)
    nodes = [root]
    for k in range(1, n_nodes):
        parent = rng.choice(nodes)
        kind = rng.choice(("statement", "predicate") + _LEAF_TYPES)
        value = rng.choice(_VALUES) if kind in _LEAF_TYPES else None
        nodes.append(parent.add(f"n{k}", NodeType(kind), value))
    return root


def realistic_pair(rng):
    """ESG-style (Table, LabelsTable): year header row, metric blocks, optional unit/subject columns.

    Cell texts are unique so a wrong mapping shows up in the extracted statements.
    """
    n_years = rng.randint(1, 4)
    with_unit = rng.random() < 0.5
    with_subject = rng.random() < 0.3
    lead = ["property"] + (["unit_value"] if with_unit else []) + (["subject_value"] if with_subject else [])
    width = len(lead) + n_years
    cells, labels = [], []

    def add(text_row, label_row):
        cells.append(text_row)
        labels.append(label_row)

    if rng.random() < 0.5:
        add([f"Report {rng.randint(1, 99)}"] + [""] * (width - 1), ["header_1"] + ["empty"] * (width - 1))
    head_text = ["Metric"] + (["Unit"] if with_unit else []) + (["Site"] if with_subject else [])
    head_label = ["header_2"] + (["empty"] * (len(lead) - 1))
    if with_subject:
        head_label[-1] = "subject"
    add(head_text + [f"FY{20 + k}" for k in range(n_years)], head_label + ["time_value"] * n_years)

    for b in range(rng.randint(1, 3)):
        if b or rng.random() < 0.3:
            add([f"Block {b}"] + [""] * (width - 1), ["header_3"] + ["empty"] * (width - 1))
        for m in range(rng.randint(1, 5)):
            row = [f"metric {b}.{m}"]
            if with_unit:
                row.append(rng.choice(["t", "kWh", "%", "m3"]))
            if with_subject:
                row.append(rng.choice(["HQ", "Plant A", "Plant B"]))
            row += [f"{rng.randint(0, 9999)}.{b}{m}{k}" for k in range(n_years)]
            add(row, lead + ["property_value"] * n_years)
    from statex.tables import LabelsTable, Table

    return Table(cells, id=f"t{rng.randrange(10**6)}"), LabelsTable(labels)
