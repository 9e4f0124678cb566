"""HTTP client for remote text-generation endpoints."""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Mapping

import requests

from ..errors import HttpStatus, InferenceError, InferenceTimeout, NetworkError
from .prompts import RESPONSE_END

log = logging.getLogger(__name__)

TOKEN_ENV = "INFERENCE_TOKEN"
MAX_ATTEMPTS = 3
_TRANSIENT = frozenset({408, 429, 500, 502, 503, 504})


@dataclass
class GenerationParams:
    max_new_tokens: int = 1024
    temperature: float = 0.0  # greedy
    do_sample: bool = False
    stop: list[str] = field(default_factory=lambda: [RESPONSE_END])


def _completion_text(resp: requests.Response) -> str:
    try:
        data = resp.json()
    except ValueError:
        return resp.text
    if isinstance(data, list) and data:
        data = data[0]
    if isinstance(data, dict):
        for key in ("text", "generated_text", "completion", "output"):
            if isinstance(data.get(key), str):
                return data[key]
        choices = data.get("choices")
        if isinstance(choices, list) and choices:
            choice = choices[0]
            if isinstance(choice.get("text"), str):
                return choice["text"]
            message = choice.get("message") or {}
            if isinstance(message.get("content"), str):
                return message["content"]
    if isinstance(data, str):
        return data
    raise InferenceError("unrecognized completion payload")


def infer_remote(
    endpoint: str,
    prompt: str,
    params: GenerationParams | None = None,
    timeout: float = 60.0,
    backoff: float = 0.5,
    session: requests.Session | None = None,
) -> str:
    """POST ``prompt`` to ``endpoint`` and return the completion text.

    Connection errors, timeouts and 408/429/5xx answers are retried with
    exponential backoff, up to three attempts in total.  The bearer token is
    read from ``INFERENCE_TOKEN`` when set.
    """
    params = params or GenerationParams()
    headers = {"Content-Type": "application/json"}
    token = os.environ.get(TOKEN_ENV)
    if token:
        headers["Authorization"] = f"Bearer {token}"
    payload = {"prompt": prompt, **asdict(params)}
    http = session or requests

    error: InferenceError | None = None
    for attempt in range(MAX_ATTEMPTS):
        if attempt:
            time.sleep(backoff * 2 ** (attempt - 1))
        try:
            resp = http.post(endpoint, json=payload, headers=headers, timeout=timeout)
        except requests.Timeout as exc:
            error = InferenceTimeout(str(exc))
        except requests.RequestException as exc:
            error = NetworkError(str(exc))
        else:
            if resp.ok:
                return _completion_text(resp)
            error = HttpStatus(resp.status_code, resp.text[:500])
            if resp.status_code not in _TRANSIENT:
                raise error
        log.warning("inference attempt %d/%d failed: %s", attempt + 1, MAX_ATTEMPTS, error)
    assert error is not None
    raise error


def infer_batch(
    endpoint: str,
    prompts: Mapping[str, str],
    params: GenerationParams | None = None,
    workers: int = 4,
    **kwargs,
) -> dict[str, str | InferenceError]:
    """Run many prompts through a bounded thread pool; failures are returned, not raised."""

    def one(item: tuple[str, str]) -> tuple[str, str | InferenceError]:
        key, prompt = item
        try:
            return key, infer_remote(endpoint, prompt, params, **kwargs)
        except InferenceError as exc:
            return key, exc

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = dict(pool.map(one, sorted(prompts.items())))
    return results
