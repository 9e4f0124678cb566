"""Dataset construction: shuffle augmentation, keyword filtering, predicate search."""

from __future__ import annotations

import itertools
import json
import math
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .statements import Predicate
from .tables import CellLabel, LabelsTable, Table, validate_pair

__all__ = [
    "DEFAULT_THRESHOLD",
    "FilterDecision",
    "KeywordSearch",
    "PredicateRecord",
    "ShuffleGroup",
    "filter_table",
    "has_quantitative",
    "keyword_predicate_search",
    "load_keywords",
    "rouge_l_precision",
    "shufflable_groups",
    "shuffle_variants",
    "table_seed",
    "tokenize",
]

DEFAULT_THRESHOLD = 0.75
ENUMERATION_LIMIT = 10_000

# labels that pin a row/column in place
_PINNED = frozenset(
    {
        CellLabel.HEADER_1,
        CellLabel.HEADER_2,
        CellLabel.HEADER_3,
        CellLabel.TIME,
        CellLabel.TIME_VALUE,
        CellLabel.UNIT,
    }
)


@dataclass(frozen=True)
class ShuffleGroup:
    axis: str  # "rows" or "columns"
    indices: tuple[int, ...]


def _runs(lines: Sequence[tuple[CellLabel, ...]]) -> Iterator[tuple[int, ...]]:
    """Maximal runs of consecutive eligible lines carrying identical labels."""
    run: list[int] = []
    for i, line in enumerate(lines):
        eligible = CellLabel.PROPERTY_VALUE in line and not _PINNED.intersection(line)
        if eligible and run and lines[run[-1]] == line:
            run.append(i)
            continue
        if len(run) > 1:
            yield tuple(run)
        run = [i] if eligible else []
    if len(run) > 1:
        yield tuple(run)


# labels a property_value anchor looks for along its row and column
_ANCHOR_TARGETS = frozenset(
    {
        CellLabel.PROPERTY,
        CellLabel.SUBPROPERTY,
        CellLabel.UNIT_VALUE,
        CellLabel.TIME_VALUE,
        CellLabel.SUBJECT_VALUE,
        CellLabel.KEY_VALUE,
    }
)
# label sought -> labels of the cells that go looking for it
_SEEKERS = {
    CellLabel.PROPERTY: {CellLabel.PROPERTY_VALUE, CellLabel.SUBPROPERTY},
    CellLabel.SUBJECT: {CellLabel.SUBJECT_VALUE},
    CellLabel.KEY: {CellLabel.KEY_VALUE},
}


def _sealed(lines: Sequence[tuple[CellLabel, ...]], run: tuple[int, ...]) -> bool:
    """True if no cell outside ``run`` can find a cell inside it.

    Searches from outside cross into a run only along the run's cross
    lines; each cross line is checked for cells that would look for the
    run's label there.
    """
    members = set(run)
    pattern = lines[run[0]]
    for pos, label in enumerate(pattern):
        seekers = set(_SEEKERS.get(label, ()))
        if label in _ANCHOR_TARGETS:
            seekers.add(CellLabel.PROPERTY_VALUE)
        if not seekers:
            continue
        for i, line in enumerate(lines):
            if i not in members and line[pos] in seekers:
                return False
    return True


def shufflable_groups(table: Table, labels: LabelsTable) -> list[ShuffleGroup]:
    """Rows / columns that can be permuted without changing the extracted statements.

    A group is a run of adjacent rows (or columns) that hold property values,
    carry no header, time or unit labels, and have identical label vectors;
    header rows therefore always split groups.  Runs whose cells could be
    found by a search starting outside the run are left out.
    """
    validate_pair(table, labels)
    groups = []
    for axis, lines in (("rows", list(labels.labels)), ("columns", list(zip(*labels.labels)))):
        groups += [ShuffleGroup(axis, run) for run in _runs(lines) if _sealed(lines, run)]
    return groups


def _apply(grid: Sequence[Sequence], row_order: list[int], col_order: list[int]) -> list[list]:
    return [[grid[r][c] for c in col_order] for r in row_order]


def _orders(
    shape: tuple[int, int], groups: Sequence[ShuffleGroup], perms: Sequence[tuple[int, ...]]
) -> tuple[list[int], list[int]]:
    rows, cols = list(range(shape[0])), list(range(shape[1]))
    for group, perm in zip(groups, perms):
        target = rows if group.axis == "rows" else cols
        for slot, src in zip(group.indices, perm):
            target[slot] = src
    return rows, cols


def shuffle_variants(
    table: Table, labels: LabelsTable, cap: int = 130, seed: int = 0
) -> list[tuple[Table, LabelsTable]]:
    """Non-identity permutations of the shufflable groups, at most ``cap`` of them.

    Table and labels are permuted together.  When the permutation space is
    larger than ``cap + 1`` a seeded sample is drawn without replacement.
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    groups = shufflable_groups(table, labels)
    if not groups or cap == 0:
        return []
    space = math.prod(math.factorial(len(g.indices)) for g in groups)
    cap = min(cap, space - 1)
    rng = random.Random(seed)
    identity = tuple(g.indices for g in groups)

    if space <= ENUMERATION_LIMIT:
        every = [
            combo
            for combo in itertools.product(*(itertools.permutations(g.indices) for g in groups))
            if combo != identity
        ]
        chosen = rng.sample(every, cap) if len(every) > cap else every
    else:
        chosen, seen = [], {identity}
        while len(chosen) < cap:
            combo = []
            for g in groups:
                members = list(g.indices)
                rng.shuffle(members)
                combo.append(tuple(members))
            key = tuple(combo)
            if key not in seen:
                seen.add(key)
                chosen.append(key)

    variants = []
    for k, combo in enumerate(chosen):
        row_order, col_order = _orders(table.shape, groups, combo)
        tid = f"{table.id}-aug{k}" if table.id else None
        variants.append(
            (
                Table(_apply(table.cells, row_order, col_order), id=tid, kind=table.kind),
                LabelsTable(_apply(labels.labels, row_order, col_order)),
            )
        )
    return variants


def table_seed(global_seed: int, table_key: str) -> int:
    """Per-table seed, independent of processing order."""
    h = 0
    for ch in table_key.encode("utf-8"):
        h = (h * 131 + ch) & 0xFFFFFFFF
    return global_seed ^ h


# -- relevance filtering --------------------------------------------------------

_TOKEN = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l_precision(reference: Sequence[str], candidate: Sequence[str]) -> float:
    """Longest-common-subsequence length over the candidate length."""
    if not candidate:
        return 0.0
    return _lcs_length(reference, candidate) / len(candidate)


_STRIP_CHARS = str.maketrans("", "", ",$€£%()")
_NUMBER = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


def _is_number(text: str) -> bool:
    return bool(_NUMBER.match("".join(text.translate(_STRIP_CHARS).split())))


def has_quantitative(table: Table) -> bool:
    return any(_is_number(cell) for row in table.cells for cell in row)


@dataclass(frozen=True)
class FilterDecision:
    passed: bool
    best_score: float
    best_keyword: str
    has_numbers: bool


def table_tokens(table: Table) -> list[str]:
    return [tok for row in table.cells for cell in row for tok in tokenize(cell)]


def filter_table(
    table: Table,
    keywords: Iterable[Sequence[str] | str],
    threshold: float = DEFAULT_THRESHOLD,
) -> FilterDecision:
    """Keep tables that mention a keyword (ROUGE-L precision > threshold) and hold numbers."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    reference = table_tokens(table)
    best, best_kw = 0.0, ""
    for kw in keywords:
        tokens = tokenize(kw) if isinstance(kw, str) else [t.lower() for t in kw]
        score = rouge_l_precision(reference, tokens)
        if score > best:
            best, best_kw = score, " ".join(tokens)
    numbers = has_quantitative(table)
    return FilterDecision(best > threshold and numbers, best, best_kw, numbers)


def load_keywords(path: str | Path) -> list[str]:
    """One keyword phrase per line; blank lines and ``#`` comments skipped."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]


# -- predicate analysis -----------------------------------------------------------


@dataclass(frozen=True)
class PredicateRecord:
    predicate: Predicate
    doc_id: str
    org: str = ""
    year: str = ""

    @classmethod
    def from_json(cls, data: dict) -> PredicateRecord:
        return cls(
            Predicate.from_json(data),
            doc_id=str(data.get("doc_id") or data.get("org") or ""),
            org=str(data.get("org") or ""),
            year=str(data.get("year") or ""),
        )


def load_predicate_db(path: str | Path) -> list[PredicateRecord]:
    """Read a JSON-lines predicate database."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(PredicateRecord.from_json(json.loads(line)))
    return out


@dataclass
class KeywordSearch:
    keyword: str
    matches: list[PredicateRecord] = field(default_factory=list)

    @property
    def n_predicates(self) -> int:
        return len(self.matches)

    @property
    def n_documents(self) -> int:
        return len({m.doc_id for m in self.matches})

    @property
    def n_organizations(self) -> int:
        return len({m.org or m.doc_id for m in self.matches})


def keyword_predicate_search(
    records: Iterable[PredicateRecord | tuple[Predicate, str]],
    keyword: str,
    numeric_only: bool = False,
) -> KeywordSearch:
    """Case-insensitive substring search of ``keyword`` in predicate properties."""
    needle = keyword.lower()
    result = KeywordSearch(keyword)
    for rec in records:
        if not isinstance(rec, PredicateRecord):
            rec = PredicateRecord(rec[0], rec[1])
        pred = rec.predicate
        if needle not in pred.property.lower():
            continue
        if numeric_only and not _is_number(pred.property_value):
            continue
        result.matches.append(rec)
    return result
