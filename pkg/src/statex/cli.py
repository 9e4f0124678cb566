"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 network error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .datagen import (
    DEFAULT_THRESHOLD,
    filter_table,
    keyword_predicate_search,
    load_keywords,
    load_predicate_db,
    shuffle_variants,
)
from .errors import DataError, InferenceError
from .extraction import extract_with_diagnostics
from .pipeline import (
    GenerationParams,
    TaskKind,
    build_prompt,
    infer_batch,
    run_evaluation,
)
from .scoring import CostModel
from .statements import statements_to_markdown
from .tables import LabelsTable, Table, parse_labels_markdown, parse_markdown_table

log = logging.getLogger("statex")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NETWORK = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_json_or_text(path: Path) -> dict | str:
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return json.loads(text)
    return text


def load_table(path: str | Path) -> Table:
    path = Path(path)
    data = _read_json_or_text(path)
    if isinstance(data, dict):
        return Table.from_json(data)
    table = parse_markdown_table(data)
    return Table(table.cells, id=path.stem)


def load_labels(path: str | Path) -> LabelsTable:
    data = _read_json_or_text(Path(path))
    if isinstance(data, dict):
        return LabelsTable.from_json(data)
    return parse_labels_markdown(data)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_extract(args: argparse.Namespace) -> int:
    result = extract_with_diagnostics(load_table(args.table), load_labels(args.labels))
    if result.skipped:
        log.warning("%d property_value cells had no property", len(result.skipped))
    if args.format == "json":
        text = json.dumps(result.statements.to_json(), indent=2, ensure_ascii=False) + "\n"
    else:
        text = statements_to_markdown(result.statements) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    report = run_evaluation(
        args.gt,
        args.pred,
        args.task,
        cost=CostModel(numeric_aware=args.numeric_aware),
        canonical=args.canonical_order,
        workers=args.workers,
    )
    Path(args.report).write_text(json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8")
    if args.csv:
        report.write_csv(args.csv)
    print(
        f"tables={len(report.rows)} similarity={report.mean('similarity'):.4f} "
        f"f1={report.mean('f1'):.4f} invalid={report.invalid_fraction:.4f}"
    )
    return EXIT_OK


def cmd_augment(args: argparse.Namespace) -> int:
    table, labels = load_table(args.table), load_labels(args.labels)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = table.id or Path(args.table).stem
    variants = shuffle_variants(table, labels, cap=args.cap, seed=args.seed)
    for k, (t, lab) in enumerate(variants):
        t = Table(t.cells, id=f"{stem}-aug{k}", kind=t.kind)
        (out / f"{stem}-aug{k}.table.json").write_text(json.dumps(t.to_json()), encoding="utf-8")
        (out / f"{stem}-aug{k}.labels.json").write_text(json.dumps(lab.to_json()), encoding="utf-8")
    print(f"wrote {len(variants)} variants to {out}")
    return EXIT_OK


def cmd_filter(args: argparse.Namespace) -> int:
    keywords = load_keywords(args.keywords)
    kept = total = 0
    with open(args.out, "w", encoding="utf-8") as fh:
        for path in sorted(Path(args.corpus).glob("*.json")):
            doc = json.loads(path.read_text(encoding="utf-8"))
            for i, tj in enumerate(doc.get("tables", [])):
                total += 1
                table = Table.from_json(tj)
                decision = filter_table(table, keywords, args.threshold)
                if not decision.passed:
                    continue
                kept += 1
                record = {
                    "doc_id": doc.get("id", path.stem),
                    "org": doc.get("org"),
                    "year": doc.get("year"),
                    "table_index": i,
                    "best_score": decision.best_score,
                    "best_keyword": decision.best_keyword,
                    "table": table.to_json(),
                }
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"kept {kept} of {total} tables")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    records = load_predicate_db(args.db)
    with open(args.csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["keyword", "n_predicates", "n_organizations"])
        searches = [keyword_predicate_search(records, kw, args.numeric_only) for kw in args.keyword]
        for s in searches:
            writer.writerow([s.keyword, s.n_predicates, s.n_organizations])
    if args.matches:
        with open(args.matches, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["keyword", "org", "year", "property", "value", "unit"])
            for s in searches:
                for m in s.matches:
                    p = m.predicate
                    writer.writerow([s.keyword, m.org, m.year, p.property, p.property_value, p.unit])
    return EXIT_OK


def _load_example(path: str, task: TaskKind):
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    source = data["cell"] if task is TaskKind.INDIRECT_1D else Table.from_json(data["table"])
    return source, data["response"]


def cmd_infer(args: argparse.Namespace) -> int:
    task = TaskKind(args.task)
    example = _load_example(args.example, task) if args.example else None
    prompts: dict[str, str] = {}
    shapes: dict[str, tuple[int, int]] = {}
    for path in args.table:
        table = load_table(path)
        name = table.id or Path(path).stem
        if task is TaskKind.INDIRECT_1D:
            shapes[name] = table.shape
            for r, row in enumerate(table.cells):
                for c, cell in enumerate(row):
                    prompts[f"{name}\t{r:06d}\t{c:06d}"] = build_prompt(task, cell, example)
        else:
            prompts[name] = build_prompt(task, table, example)
    params = GenerationParams(max_new_tokens=args.max_new_tokens)
    results = infer_batch(args.endpoint, prompts, params, workers=args.workers, timeout=args.timeout)
    failures = {k: v for k, v in results.items() if isinstance(v, InferenceError)}
    for key, err in sorted(failures.items()):
        log.error("%s: %s", key.split("\t")[0], err)

    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    if task is TaskKind.INDIRECT_1D:
        for name, (n_rows, n_cols) in shapes.items():
            grid = [
                [_as_text(results[f"{name}\t{r:06d}\t{c:06d}"]) for c in range(n_cols)]
                for r in range(n_rows)
            ]
            _emit(out, f"{name}.json", json.dumps(grid, ensure_ascii=False))
    else:
        for name, text in sorted(results.items()):
            _emit(out, f"{name}.txt", _as_text(text))
    return EXIT_NETWORK if failures else EXIT_OK


def _as_text(value: str | InferenceError) -> str:
    return "" if isinstance(value, InferenceError) else value


def _emit(out: Path | None, name: str, text: str) -> None:
    if out is None:
        sys.stdout.write(f"==> {name}\n{text}\n")
    else:
        (out / name).write_text(text, encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="statex", description="Statement extraction from labeled tables and tree-similarity scoring.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    tasks = [t.value for t in TaskKind]

    p = sub.add_parser("extract", help="extract statements from a table and its labels")
    p.add_argument("--table", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--format", choices=["md", "json"], default="md")
    p.add_argument("--out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("score", help="score predictions against ground truth")
    p.add_argument("--gt", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--task", choices=tasks, required=True)
    p.add_argument("--numeric-aware", action="store_true")
    p.add_argument("--canonical-order", action="store_true")
    p.add_argument("--report", required=True)
    p.add_argument("--csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("augment", help="write row/column shuffle variants")
    p.add_argument("--table", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--cap", type=int, default=130)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("filter", help="keep keyword-relevant quantitative tables")
    p.add_argument("--corpus", required=True)
    p.add_argument("--keywords", required=True)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("analyze", help="keyword search over a predicate database")
    p.add_argument("--db", required=True)
    p.add_argument("--keyword", action="append", required=True)
    p.add_argument("--numeric-only", action="store_true")
    p.add_argument("--csv", required=True)
    p.add_argument("--matches", help="per-match CSV (org, year, property, value, unit)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("infer", help="query a remote model")
    p.add_argument("--endpoint", required=True)
    p.add_argument("--task", choices=tasks, required=True)
    p.add_argument("--table", action="append", required=True)
    p.add_argument("--example")
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--max-new-tokens", type=int, default=1024)
    p.add_argument("--out")
    p.set_defaults(func=cmd_infer)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except InferenceError as exc:
        log.error("%s", exc)
        return EXIT_NETWORK
    except (DataError, ValueError, KeyError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
