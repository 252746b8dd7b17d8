"""Chat-completions gateway: live HTTP, mock fixtures, record/replay.

Every call produces a GenerationRecord with two durations: generation
(provider created to completed) and total (send to completed, including
the round trip).  Mock and replay backends resolve the prompt against
fixture files and never open sockets; the mock honors a per-fixture
virtual delay without sleeping, so timing-derived metrics stay
deterministic in tests.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import httpx

from .prompt import ExtractionError, PromptEnvelope, extract_code

DEFAULT_BASE_URL = "https://api.openai.com/v1"
DEFAULT_MODEL = "gpt-4-turbo"
KEY_ENV = "MAGICITEM_API_KEY"


@dataclass(frozen=True)
class GatewayConfig:
    backend: str = "mock"  # live | mock | replay
    base_url: str = DEFAULT_BASE_URL
    model_name: str = DEFAULT_MODEL
    api_key_env: str = KEY_ENV
    timeout_s: float = 120.0
    fixtures_dir: str | None = None
    record: bool = False  # replay only: fill missing fixtures from live

    def __post_init__(self):
        if self.backend not in ("live", "mock", "replay"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend in ("mock", "replay") and not self.fixtures_dir:
            raise ValueError(f"{self.backend} backend needs a fixtures dir")


@dataclass(frozen=True)
class Usage:
    prompt_tokens: int
    completion_tokens: int
    estimated: bool


@dataclass(frozen=True)
class GenerationRecord:
    record_id: str
    prompt_digest: str
    backend: str
    request_sent_at: float
    response_created_at: float
    response_completed_at: float
    generation_ms: float
    total_ms: float
    usage: Usage
    raw_reply: str
    extracted_script: str | None
    extraction_error: str | None

    def __post_init__(self):
        assert self.response_created_at <= self.response_completed_at
        assert self.generation_ms >= 0

    def to_dict(self) -> dict:
        return {
            "record_id": self.record_id,
            "prompt_digest": self.prompt_digest,
            "backend": self.backend,
            "request_sent_at": self.request_sent_at,
            "response_created_at": self.response_created_at,
            "response_completed_at": self.response_completed_at,
            "generation_ms": self.generation_ms,
            "total_ms": self.total_ms,
            "usage": {
                "prompt_tokens": self.usage.prompt_tokens,
                "completion_tokens": self.usage.completion_tokens,
                "estimated": self.usage.estimated,
            },
            "raw_reply": self.raw_reply,
            "extracted_script": self.extracted_script,
            "extraction_error": self.extraction_error,
        }


class GatewayErrorKind(Enum):
    TIMEOUT = "Timeout"
    TRANSPORT = "Transport"
    PROVIDER_STATUS = "ProviderStatus"
    MISSING_FIXTURE = "MissingFixture"
    MISSING_KEY = "MissingKey"


class GatewayError(Exception):
    def __init__(self, kind: GatewayErrorKind, message: str,
                 status_code: int | None = None):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.status_code = status_code


def estimate_tokens(text: str) -> int:
    """Fallback when the provider reports no usage: ceil(bytes / 4)."""
    return (len(text.encode("utf-8")) + 3) // 4


def fixture_key(envelope: PromptEnvelope) -> str:
    blob = envelope.system_text + "\n\x00\n" + envelope.user_text
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def generate(envelope: PromptEnvelope, config: GatewayConfig) -> GenerationRecord:
    if config.backend == "live":
        return _generate_live(envelope, config)
    if config.backend == "mock":
        return _generate_fixture(envelope, config, record_missing=False)
    return _generate_fixture(envelope, config, record_missing=config.record)


def _finish(envelope, backend, sent, created, completed, reply, usage) -> GenerationRecord:
    digest = fixture_key(envelope)
    script, error = None, None
    try:
        script = extract_code(reply)
    except ExtractionError as exc:
        error = exc.kind.value
    record_id = hashlib.sha256(
        f"{digest}:{backend}:{reply}".encode("utf-8")).hexdigest()[:16]
    return GenerationRecord(
        record_id=record_id,
        prompt_digest=digest,
        backend=backend,
        request_sent_at=sent,
        response_created_at=created,
        response_completed_at=completed,
        # epoch floats resolve to about a microsecond; rounding there keeps
        # fixture delays exact in the reported durations
        generation_ms=round((completed - created) * 1000.0, 3),
        total_ms=round((completed - sent) * 1000.0, 3),
        usage=usage,
        raw_reply=reply,
        extracted_script=script,
        extraction_error=error,
    )


def _estimated_usage(envelope: PromptEnvelope, reply: str) -> Usage:
    return Usage(
        prompt_tokens=(estimate_tokens(envelope.system_text)
                       + estimate_tokens(envelope.user_text)),
        completion_tokens=estimate_tokens(reply),
        estimated=True,
    )


# - fixture backends -


def _generate_fixture(envelope, config, record_missing: bool) -> GenerationRecord:
    sent = time.time()
    key = fixture_key(envelope)
    path = Path(config.fixtures_dir) / f"{key}.json"
    if not path.exists():
        if record_missing:
            return _record_fixture(envelope, config, path)
        raise GatewayError(GatewayErrorKind.MISSING_FIXTURE,
                           f"no fixture for prompt digest {key}")
    fixture = json.loads(path.read_text(encoding="utf-8"))
    reply = fixture["reply"]
    if "usage" in fixture:
        usage = Usage(int(fixture["usage"]["prompt_tokens"]),
                      int(fixture["usage"]["completion_tokens"]),
                      estimated=False)
    else:
        usage = _estimated_usage(envelope, reply)
    # virtual delay: reported in the timestamps, never slept
    created = time.time()
    completed = created + float(fixture.get("delay_ms", 0)) / 1000.0
    return _finish(envelope, config.backend, sent, created, completed,
                   reply, usage)


def _record_fixture(envelope, config, path: Path) -> GenerationRecord:
    record = _generate_live(envelope, config, backend_label="replay")
    fixture: dict = {"reply": record.raw_reply}
    if not record.usage.estimated:
        fixture["usage"] = {"prompt_tokens": record.usage.prompt_tokens,
                            "completion_tokens": record.usage.completion_tokens}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(fixture, indent=1), encoding="utf-8")
    return record


# - live backend -


def _client_factory(config: GatewayConfig) -> httpx.Client:
    # separated so tests can swap in a mock transport
    return httpx.Client(timeout=config.timeout_s)


def _generate_live(envelope, config, backend_label="live") -> GenerationRecord:
    key = os.environ.get(config.api_key_env, "")
    if not key:
        raise GatewayError(GatewayErrorKind.MISSING_KEY,
                           f"set {config.api_key_env} to use the live backend")
    payload = {
        "model": envelope.model_name,
        "temperature": envelope.temperature,
        "messages": [
            {"role": "system", "content": envelope.system_text},
            {"role": "user", "content": envelope.user_text},
        ],
    }
    url = config.base_url.rstrip("/") + "/chat/completions"
    sent = time.time()
    try:
        with _client_factory(config) as client:
            with client.stream("POST", url, json=payload,
                               headers={"Authorization": f"Bearer {key}"}) as resp:
                # non-streaming completion: first byte stands in for the
                # provider's creation instant
                created = time.time()
                body = resp.read()
                completed = time.time()
                status = resp.status_code
    except httpx.TimeoutException:
        raise GatewayError(GatewayErrorKind.TIMEOUT,
                           f"no reply within {config.timeout_s:.0f}s") from None
    except httpx.HTTPError as exc:
        raise GatewayError(GatewayErrorKind.TRANSPORT,
                           type(exc).__name__) from None
    if status != 200:
        excerpt = body.decode("utf-8", "replace")[:200]
        raise GatewayError(GatewayErrorKind.PROVIDER_STATUS,
                           f"provider returned {status}: {excerpt}",
                           status_code=status)
    data = json.loads(body)
    reply = data["choices"][0]["message"]["content"]
    if isinstance(data.get("usage"), dict):
        usage = Usage(int(data["usage"]["prompt_tokens"]),
                      int(data["usage"]["completion_tokens"]),
                      estimated=False)
    else:
        usage = _estimated_usage(envelope, reply)
    return _finish(envelope, backend_label, sent, created, completed,
                   reply, usage)
