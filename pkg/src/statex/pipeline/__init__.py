"""Model-facing surface: prompts, response parsing, remote inference, evaluation."""

from .client import GenerationParams, infer_batch, infer_remote
from .evaluate import GroundTruth, load_ground_truth, load_predictions, run_evaluation
from .prompts import (
    NEWLINE,
    RESPONSE_END,
    RESPONSE_START,
    SEPARATOR,
    TABLE_END,
    TABLE_START,
    ParsedResponse,
    TaskKind,
    build_prompt,
    extract_response_span,
    parse_model_response,
    render_response,
    wrap_response,
)

__all__ = [
    "GenerationParams",
    "GroundTruth",
    "NEWLINE",
    "ParsedResponse",
    "RESPONSE_END",
    "RESPONSE_START",
    "SEPARATOR",
    "TABLE_END",
    "TABLE_START",
    "TaskKind",
    "build_prompt",
    "extract_response_span",
    "infer_batch",
    "infer_remote",
    "load_ground_truth",
    "load_predictions",
    "parse_model_response",
    "render_response",
    "run_evaluation",
    "wrap_response",
]
