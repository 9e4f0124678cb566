import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from statex.errors import HttpStatus, InferenceTimeout, NetworkError
from statex.pipeline import GenerationParams, infer_batch, infer_remote


class Stub:
    """Local HTTP endpoint answering from a queue of (status, body) replies."""

    def __init__(self, replies, delay=0.0):
        self.replies = list(replies)
        self.requests = []
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers["Content-Length"])
                stub.requests.append((dict(self.headers), json.loads(self.rfile.read(length))))
                if delay:
                    threading.Event().wait(delay)
                status, body = stub.replies.pop(0) if len(stub.replies) > 1 else stub.replies[0]
                data = body.encode() if isinstance(body, str) else json.dumps(body).encode()
                self.send_response(status)
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.url = f"http://127.0.0.1:{self.server.server_port}/generate"
        threading.Thread(target=self.server.serve_forever, daemon=True).start()

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def stub():
    made = []

    def make(replies, delay=0.0):
        s = Stub(replies, delay)
        made.append(s)
        return s

    yield make
    for s in made:
        s.close()


def test_healthy_endpoint(stub, splunk_response, monkeypatch):
    monkeypatch.setenv("INFERENCE_TOKEN", "secret")
    s = stub([(200, {"generated_text": splunk_response})])
    assert infer_remote(s.url, "prompt") == splunk_response
    headers, payload = s.requests[0]
    assert headers["Authorization"] == "Bearer secret"
    assert payload["prompt"] == "prompt"
    assert payload["stop"] == ["</response>"]
    assert payload["do_sample"] is False


@pytest.mark.parametrize(
    "body",
    [{"text": "x"}, {"choices": [{"text": "x"}]}, {"choices": [{"message": {"content": "x"}}]}, [{"generated_text": "x"}]],
)
def test_payload_shapes(stub, body):
    assert infer_remote(stub([(200, body)]).url, "p") == "x"


def test_no_token_no_header(stub, monkeypatch):
    monkeypatch.delenv("INFERENCE_TOKEN", raising=False)
    s = stub([(200, {"text": "x"})])
    infer_remote(s.url, "p")
    assert "Authorization" not in s.requests[0][0]


def test_503_three_times(stub):
    s = stub([(503, "busy")])
    with pytest.raises(HttpStatus) as info:
        infer_remote(s.url, "p", backoff=0.01)
    assert info.value.code == 503
    assert len(s.requests) == 3


def test_transient_then_success(stub):
    s = stub([(503, "busy"), (200, {"text": "ok"})])
    assert infer_remote(s.url, "p", backoff=0.01) == "ok"
    assert len(s.requests) == 2


def test_client_error_not_retried(stub):
    s = stub([(400, "bad")])
    with pytest.raises(HttpStatus) as info:
        infer_remote(s.url, "p", backoff=0.01)
    assert info.value.code == 400 and len(s.requests) == 1


def test_unresolvable_host():
    with pytest.raises(NetworkError):
        infer_remote("http://nonexistent.invalid/generate", "p", timeout=2, backoff=0.01)


def test_timeout(stub):
    s = stub([(200, {"text": "late"})], delay=0.5)
    with pytest.raises(InferenceTimeout):
        infer_remote(s.url, "p", timeout=0.1, backoff=0.01)


def test_batch_isolates_failures(stub):
    good = stub([(200, {"text": "fine"})])
    results = infer_batch(good.url, {"a": "p1", "b": "p2"}, GenerationParams(max_new_tokens=8), workers=2)
    assert results == {"a": "fine", "b": "fine"}
    bad = infer_batch("http://nonexistent.invalid/x", {"a": "p"}, timeout=1, backoff=0.01)
    assert isinstance(bad["a"], NetworkError)
