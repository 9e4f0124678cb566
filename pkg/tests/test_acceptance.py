"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` to see the lines, or execute the
module directly.
"""

import json
import math
import random
import time
from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from statex.datagen import filter_table, load_keywords, shufflable_groups, shuffle_variants
from statex.extraction import extract_statements
from statex.pipeline import (
    GroundTruth,
    TaskKind,
    parse_model_response,
    render_response,
    run_evaluation,
    wrap_response,
)
from statex.scoring import (
    CostModel,
    aggregate,
    brute_force_ted,
    entity_scores,
    normalized_levenshtein,
    score_pair,
    tree_edit_distance,
)
from statex.statements import (
    Predicate,
    Statement,
    StatementSet,
    build_tree,
    parse_records_markdown,
    statements_to_markdown,
)
from statex.tables import CellLabel, LabelsTable, Table, parse_markdown_table, render_markdown_table

from conftest import DATA, random_tree, realistic_pair

ROUND_TRIP_CASES = 1000


def verdict(number, name, ok, detail=""):
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {number} failed: {detail}"


# 1 ---------------------------------------------------------------------------


def test_01_worked_example_renames(tree_pair_renames):
    s0, s1 = tree_pair_renames
    start = time.perf_counter()
    r = tree_edit_distance(build_tree(s1), build_tree(s0))
    elapsed = time.perf_counter() - start
    ok = (
        abs(r.distance - 0.9166) <= 0.001
        and abs(r.normalized - 0.4583) <= 0.001
        and abs(r.similarity - 0.54) <= 0.005
        and (r.n_insert, r.n_delete, r.n_rename) == (0, 0, 2)
        and elapsed < 1.0
    )
    detail = (
        f"distance={r.distance:.4f} normalized={r.normalized:.4f} similarity={r.similarity:.4f} "
        f"ops=({r.n_insert},{r.n_delete},{r.n_rename}) {elapsed * 1000:.1f}ms"
    )
    verdict(1, "renamed values tree pair", ok, detail)


# 2 ---------------------------------------------------------------------------


def test_02_worked_example_truncated(tree_pair_truncated):
    pred, gt = tree_pair_truncated
    start = time.perf_counter()
    r = tree_edit_distance(build_tree(pred), build_tree(gt))
    elapsed = time.perf_counter() - start
    ratios = r.ratios()
    ok = (
        abs(r.distance - 6.0588) <= 0.001
        and r.n_edits == 7
        and abs(r.normalized - 0.8655) <= 0.001
        and abs(r.similarity - 0.1344) <= 0.001
        and all(abs(a - b) < 1e-12 for a, b in zip(ratios, (6 / 7, 0.0, 1 / 7)))
        and elapsed < 1.0
    )
    detail = (
        f"distance={r.distance:.4f} n_edits={r.n_edits} normalized={r.normalized:.4f} "
        f"similarity={r.similarity:.4f} ratios=({ratios[0]:.4f},{ratios[1]:.4f},{ratios[2]:.4f}) "
        f"{elapsed * 1000:.1f}ms"
    )
    verdict(2, "truncated prediction tree pair", ok, detail)


# 3 ---------------------------------------------------------------------------


def _squash(text):
    return "".join(text.split())


def test_03_splunk_extraction(splunk_table, splunk_labels, splunk_response):
    got = extract_statements(splunk_table, splunk_labels)
    body = splunk_response.split("<response>")[-1].split("</response>")[0]
    expected = parse_records_markdown(body)
    rendered_ok = _squash(statements_to_markdown(got)).replace("-", "") == _squash(body).replace("-", "")
    header_join = all(st.predicates[0].property.startswith("Emissions Scope : ") for st in got)
    times = sorted({st.predicates[1] for st in got}, key=lambda p: p.property_value)
    ok = (
        len(got) == 8
        and got == expected
        and rendered_ok
        and header_join
        and times == [Predicate("time", "FY21"), Predicate("time", "FY22")]
    )
    verdict(3, "Splunk table extraction", ok, f"{len(got)} statements, markdown match={rendered_ok}")


# 4 ---------------------------------------------------------------------------


def test_04_oracle_equivalence():
    rng = random.Random(2024)
    pairs = 240
    start = time.perf_counter()
    mismatches = 0
    for k in range(pairs):
        a = random_tree(rng, rng.randint(1, 8))
        b = random_tree(rng, rng.randint(1, 8))
        cost = CostModel(numeric_aware=bool(k % 2))
        if abs(tree_edit_distance(a, b, cost).distance - brute_force_ted(a, b, cost)) > 1e-12:
            mismatches += 1
    elapsed = time.perf_counter() - start
    verdict(4, "TED equals brute force", mismatches == 0 and elapsed < 60,
            f"{pairs} pairs, {mismatches} mismatches, {elapsed:.1f}s")


# 5 ---------------------------------------------------------------------------


def test_05_levenshtein_fixtures():
    cases = [
        ("2020", "2021", 1 / 4),
        ("3.3", "2.5", 2 / 3),
        ("scope 1 emissions", "scope 2 emissions", 1 / 17),
    ]
    errors = [abs(normalized_levenshtein(a, b) - want) for a, b, want in cases]
    verdict(5, "normalized Levenshtein fixtures", max(errors) < 1e-9, f"max error {max(errors):.1e}")


# 6 ---------------------------------------------------------------------------


def test_06_augmentation_invariance():
    rng = random.Random(6)
    pairs = variants_seen = 0
    problems = []
    while pairs < 100:
        table, labels = realistic_pair(rng)
        groups = shufflable_groups(table, labels)
        if not groups:
            continue
        pairs += 1
        cap, seed = rng.choice([5, 20, 130]), rng.randrange(10_000)
        variants = shuffle_variants(table, labels, cap=cap, seed=seed)
        space = math.prod(math.factorial(len(g.indices)) for g in groups)
        if len(variants) != min(cap, space - 1):
            problems.append(f"{table.id}: count {len(variants)} != min({cap}, {space - 1})")
        if shuffle_variants(table, labels, cap=cap, seed=seed) != variants:
            problems.append(f"{table.id}: seed not reproducible")
        if len({v[0].cells for v in variants} | {table.cells}) != len(variants) + 1:
            problems.append(f"{table.id}: duplicate variants")
        original = Counter(extract_statements(table, labels))
        for t2, l2 in variants:
            variants_seen += 1
            if Counter(extract_statements(t2, l2)) != original:
                problems.append(f"{t2.id}: statements changed")
    verdict(6, "augmentation invariance", not problems,
            f"{pairs} tables, {variants_seen} variants" + (f", {problems[:3]}" if problems else ""))


# 7 ---------------------------------------------------------------------------

_counts = Counter()

_cell = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc", "Zl", "Zp")), max_size=10
).map(str.strip)
_safe = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc", "Zl", "Zp"), blacklist_characters="<\r\n"),
    max_size=10,
).map(str.strip)


@st.composite
def _tables(draw):
    n_rows, n_cols = draw(st.integers(1, 5)), draw(st.integers(1, 5))
    return Table([[draw(_cell) for _ in range(n_cols)] for _ in range(n_rows)])


_statement_sets = st.lists(
    st.lists(st.builds(Predicate, _safe, _safe, _safe, _safe, _safe), min_size=1, max_size=3).map(Statement),
    max_size=4,
).map(StatementSet)


@settings(max_examples=ROUND_TRIP_CASES, deadline=None, database=None)
@given(_tables())
def _table_round_trip(table):
    _counts["table"] += 1
    assert parse_markdown_table(render_markdown_table(table)) == table


@settings(max_examples=ROUND_TRIP_CASES, deadline=None, database=None)
@given(_statement_sets)
def _records_round_trip(statements):
    _counts["records"] += 1
    assert parse_records_markdown(statements_to_markdown(statements)) == statements


@st.composite
def _payloads(draw):
    task = draw(st.sampled_from(list(TaskKind)))
    if task is TaskKind.DIRECT:
        payload = draw(_statement_sets)
    elif task is TaskKind.INDIRECT_2D:
        n_rows, n_cols = draw(st.integers(1, 4)), draw(st.integers(1, 4))
        labels = st.sampled_from(list(CellLabel))
        payload = LabelsTable([[draw(labels) for _ in range(n_cols)] for _ in range(n_rows)])
    else:
        payload = draw(st.sampled_from(list(CellLabel)))
    return task, payload, draw(st.booleans()), draw(_safe)


@settings(max_examples=ROUND_TRIP_CASES, deadline=None, database=None)
@given(_payloads())
def _envelope_round_trip(case):
    task, payload, single_line, echo = case
    _counts["envelope"] += 1
    raw = echo + wrap_response(render_response(task, payload), single_line) + echo
    parsed = parse_model_response(task, raw)
    assert not parsed.invalid and parsed.value == payload


def test_07_round_trips():
    failures = []
    for name, check in (("table", _table_round_trip), ("records", _records_round_trip),
                        ("envelope", _envelope_round_trip)):
        try:
            check()
        except Exception as exc:  # hypothesis re-raises the falsifying example
            failures.append(f"{name}: {type(exc).__name__}")
    counts = ", ".join(f"{k}={_counts[k]}" for k in ("table", "records", "envelope"))
    ok = not failures and all(_counts[k] >= ROUND_TRIP_CASES for k in ("table", "records", "envelope"))
    verdict(7, "round-trip suites", ok, counts + (f"; {failures}" if failures else ""))


# 8 ---------------------------------------------------------------------------


def test_08_metric_identities():
    rng = random.Random(8)
    bad = []
    for k in range(300):
        a, b = random_tree(rng, rng.randint(1, 30)), random_tree(rng, rng.randint(1, 30))
        same = tree_edit_distance(a, a)
        if same.similarity != 1.0 or same.distance != 0.0:
            bad.append(f"self similarity {same.similarity}")
        r = tree_edit_distance(a, b)
        if r.n_edits and abs(sum(r.ratios()) - 1.0) > 1e-12:
            bad.append(f"ratio sum {sum(r.ratios())}")
        preds = [
            Predicate(*(rng.choice(["", "a", "b", "12", "kg"]) for _ in range(5)))
            for _ in range(rng.randint(1, 6))
        ]
        preds.append(Predicate("p", "1"))  # at least one non-empty entity
        s = StatementSet([Statement(preds)])
        if entity_scores(s, s).f1 != 1.0:
            bad.append("entity f1 != 1")
        value = rng.random()
        rows = [score_pair(f"t{i}", s, s) for i in range(rng.randint(2, 6))]
        rows = [replace(x, similarity=value) for x in rows]
        if aggregate(rows).stats["similarity"].sem > 1e-12:
            bad.append("constant rows SEM > 0")
    verdict(8, "metric identities", not bad, f"300 random cases, {len(bad)} violations")


# 9 ---------------------------------------------------------------------------


def test_09_invalid_accounting(splunk_table, splunk_labels, splunk_response, invalid_response):
    gt = extract_statements(splunk_table, splunk_labels)
    rng = random.Random(9)
    ok, details = True, []
    for n_tables, n_invalid in ((4, 1), (10, 3), (7, 7), (5, 0)):
        planted = set(rng.sample(range(n_tables), n_invalid))
        gts = {f"t{i:02d}": GroundTruth(f"t{i:02d}", gt) for i in range(n_tables)}
        preds = {
            f"t{i:02d}": invalid_response if i in planted else splunk_response for i in range(n_tables)
        }
        rep = run_evaluation(gts, preds, TaskKind.DIRECT)
        invalid_rows = [r for r in rep.rows if r.invalid]
        this_ok = (
            rep.invalid_fraction == n_invalid / n_tables
            and all(r.similarity == 0.0 for r in invalid_rows)
            and {int(r.id[1:]) for r in invalid_rows} == planted
        )
        ok &= this_ok
        details.append(f"{n_invalid}/{n_tables}->{rep.invalid_fraction:.3f}")
    verdict(9, "invalid-output accounting", ok, ", ".join(details))


# 10 --------------------------------------------------------------------------


def test_10_filtering():
    keywords = load_keywords(DATA / "filter_keywords.txt")
    passed, wrong = [], []
    for path in sorted((DATA / "filter_corpus").glob("*.json")):
        doc = json.loads(path.read_text(encoding="utf-8"))
        decision = filter_table(Table.from_json(doc["tables"][0]), keywords, 0.75)
        if decision.passed:
            passed.append(doc["id"])
        if decision.passed != doc["id"].startswith("relevant_numeric"):
            wrong.append(doc["id"])
    ok = len(passed) == 10 and not wrong
    verdict(10, "keyword filtering", ok, f"{len(passed)} of 20 passed" + (f", wrong: {wrong}" if wrong else ""))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
