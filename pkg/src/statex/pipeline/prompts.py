"""Special-token prompt construction and response parsing for the three tasks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from ..errors import MalformedRecords, ShapeMismatch, UnknownLabel
from ..statements import StatementSet, parse_records_markdown, statements_to_markdown
from ..tables import (
    CellLabel,
    LabelsTable,
    Table,
    parse_labels_markdown,
    render_labels_markdown,
    render_markdown_table,
    validate_pair,
)

TABLE_START = "<table>"
TABLE_END = "</table>"
RESPONSE_START = "<response>"
RESPONSE_END = "</response>"
NEWLINE = "<br>"
SEPARATOR = "<sep>"


class TaskKind(str, enum.Enum):
    DIRECT = "direct"
    INDIRECT_1D = "indirect_1d"
    INDIRECT_2D = "indirect_2d"


Payload = Union[StatementSet, LabelsTable, CellLabel, str]


def _render_input(task: TaskKind, source: Table | str) -> str:
    if task is TaskKind.INDIRECT_1D:
        if isinstance(source, Table):
            raise TypeError("indirect_1d prompts take a single cell's text")
        return source
    if not isinstance(source, Table):
        raise TypeError(f"{task.value} prompts take a Table")
    return render_markdown_table(source, index_header=True)


def render_response(task: TaskKind, payload: Payload) -> str:
    """Markdown body a model is expected to produce for ``payload``."""
    if isinstance(payload, str) and not isinstance(payload, CellLabel):
        return payload
    if task is TaskKind.DIRECT:
        return statements_to_markdown(payload)
    if task is TaskKind.INDIRECT_2D:
        return render_labels_markdown(payload)
    return CellLabel(payload).value


def build_prompt(
    task: TaskKind | str,
    source: Table | str,
    example: tuple[Table | str, Payload] | None = None,
    single_line: bool = False,
) -> str:
    """Prompt with an optional one-shot example, ending with an open ``<response>``.

    ``single_line`` replaces newlines with the ``<br>`` token.
    """
    task = TaskKind(task)
    parts = []
    if example is not None:
        ex_in, ex_out = example
        parts.append(
            f"{TABLE_START}\n{_render_input(task, ex_in)}\n{TABLE_END}\n"
            f"{RESPONSE_START}\n{render_response(task, ex_out)}\n{RESPONSE_END}\n\n"
        )
    parts.append(f"{TABLE_START}\n{_render_input(task, source)}\n{TABLE_END}\n{RESPONSE_START}\n")
    prompt = "".join(parts)
    return prompt.replace("\n", NEWLINE) if single_line else prompt


def wrap_response(body: str, single_line: bool = False) -> str:
    """Envelope a response body the way a well-behaved model emits it."""
    text = f"{RESPONSE_START}\n{body}\n{RESPONSE_END}"
    return text.replace("\n", NEWLINE) if single_line else text


@dataclass(frozen=True)
class ParsedResponse:
    kind: str  # "labels", "statements", "label" or "invalid"
    value: Payload | None = None
    reason: str = ""
    truncated: bool = False

    @property
    def invalid(self) -> bool:
        return self.kind == "invalid"


def extract_response_span(raw: str) -> tuple[str, bool]:
    """Body of the last ``<response>`` block and whether its end token was missing.

    Text before the block (an echoed prompt) and after ``</response>`` is
    ignored.  Without any start token the whole text is taken as the body.
    """
    start = raw.rfind(RESPONSE_START)
    body = raw[start + len(RESPONSE_START) :] if start >= 0 else raw
    end = body.find(RESPONSE_END)
    truncated = end < 0
    if not truncated:
        body = body[:end]
    body = body.replace(NEWLINE, "\n")
    return body.strip("\n"), truncated


def parse_model_response(
    task: TaskKind | str, raw: str, table: Table | None = None
) -> ParsedResponse:
    """Turn raw model output into a payload; failures come back as ``invalid``."""
    task = TaskKind(task)
    body, truncated = extract_response_span(raw)

    def invalid(reason: str) -> ParsedResponse:
        return ParsedResponse("invalid", reason=reason, truncated=truncated)

    if task is TaskKind.DIRECT:
        try:
            return ParsedResponse("statements", parse_records_markdown(body), truncated=truncated)
        except MalformedRecords as exc:
            return invalid(f"malformed records: {exc.reason}")
    if task is TaskKind.INDIRECT_2D:
        if not body.strip():
            return invalid("empty response")
        try:
            labels = parse_labels_markdown(body)
            if table is not None:
                validate_pair(table, labels)
        except UnknownLabel as exc:
            return invalid(f"unknown label {exc.text!r}")
        except ShapeMismatch:
            return invalid("shape mismatch")
        except ValueError as exc:
            return invalid(str(exc))
        return ParsedResponse("labels", labels, truncated=truncated)
    try:
        return ParsedResponse("label", CellLabel.parse(body.strip()), truncated=truncated)
    except (KeyError, ValueError):
        return invalid(f"unknown label {body.strip()!r}")
