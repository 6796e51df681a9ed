"""Gateway in front of all model calls: retry, rate limiting, audit journal.

The gateway is shared across worker threads. Each logical call acquires a
rate-limit slot per backend, runs the transport with exponential backoff,
and appends one audit entry with the full request/response payloads so
runs can be replayed and inspected offline.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from collections import deque
from typing import Callable, Sequence

from ..errors import (
    CaptionTooLongError,
    EmptyCaptionError,
    ImageUnresolvableError,
    RateLimitedError,
    TransportError,
)
from ..model import CAPTION_WORD_LIMIT, word_count
from .profiles import BackendProfile, BackendRole, ChatExchange, ChatPart, GenParams
from .transports import RetryableTransportFailure, Transport


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class AuditLog:
    """Append-only JSONL journal of every backend call."""

    def __init__(self, path=None):
        self.path = path
        self._lock = threading.Lock()
        self._memory: list[dict] = []
        self._seq = 0
        if path is not None:
            # Start a fresh handle in append mode; existing entries are kept.
            self._handle = open(path, "a", encoding="utf-8")
        else:
            self._handle = None

    def append(self, entry: dict) -> None:
        with self._lock:
            entry = {"seq": self._seq, **entry}
            self._seq += 1
            self._memory.append(entry)
            if self._handle is not None:
                self._handle.write(json.dumps(entry, ensure_ascii=False) + "\n")
                self._handle.flush()

    def entries(self) -> list[dict]:
        with self._lock:
            return list(self._memory)

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


class _RateLimiter:
    """Sliding-window limiter: at most `rpm` acquisitions per 60 s window."""

    def __init__(self, rpm: int, clock: Callable[[], float], sleep: Callable[[float], None]):
        self.rpm = rpm
        self.clock = clock
        self.sleep = sleep
        self._stamps: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        if self.rpm <= 0:
            return
        while True:
            with self._lock:
                now = self.clock()
                while self._stamps and now - self._stamps[0] >= 60.0:
                    self._stamps.popleft()
                if len(self._stamps) < self.rpm:
                    self._stamps.append(now)
                    return
                wait = 60.0 - (now - self._stamps[0])
            self.sleep(max(wait, 0.001))


class Gateway:
    """Uniform access to the LM / VLM / image-generator roles."""

    def __init__(
        self,
        transport: Transport,
        blob_store=None,
        audit_log: AuditLog | None = None,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
        image_size: str = "512x512",
    ):
        self.transport = transport
        self.blob_store = blob_store
        self.audit = audit_log or AuditLog()
        self.clock = clock
        self._sleep = sleep
        self.image_size = image_size
        self._limiters: dict[str, _RateLimiter] = {}
        self._limiter_lock = threading.Lock()

    # -- public operations -------------------------------------------------

    def complete_text(self, profile: BackendProfile, exchange: ChatExchange) -> str:
        if profile.role not in (BackendRole.LM, BackendRole.VLM):
            raise ValueError(f"complete_text needs an LM or VLM profile, got {profile.role}")
        if exchange.has_image and profile.role is not BackendRole.VLM:
            raise ValueError("image parts are only permitted for the VLM role")
        request_repr = self._exchange_repr(exchange)
        return self._call(
            profile,
            tag=exchange.tag,
            request_repr=request_repr,
            fn=lambda: self.transport.chat(profile, exchange, self._resolve_image),
        )

    def critique_image(
        self,
        profile: BackendProfile,
        image_ref: str,
        context_texts: Sequence[str],
        params: GenParams | None = None,
        tag: str | None = None,
    ) -> str:
        if profile.role is not BackendRole.VLM:
            raise ValueError(f"critique_image needs a VLM profile, got {profile.role}")
        self._resolve_image(image_ref)  # fail fast on unknown refs
        parts = [ChatPart(image_ref=image_ref)]
        parts += [ChatPart(text=t) for t in context_texts]
        exchange = ChatExchange(
            user_parts=tuple(parts), params=params or GenParams(temperature=0.0), tag=tag
        )
        return self.complete_text(profile, exchange)

    def generate_image(self, profile: BackendProfile, caption: str, tag: str | None = None) -> str:
        if profile.role is not BackendRole.IMAGE:
            raise ValueError(f"generate_image needs an image profile, got {profile.role}")
        if not caption or not caption.strip():
            raise EmptyCaptionError()
        words = word_count(caption)
        if words > CAPTION_WORD_LIMIT:
            raise CaptionTooLongError(words, CAPTION_WORD_LIMIT)
        if self.blob_store is None:
            raise ValueError("generate_image requires a blob store")

        blob = self._call(
            profile,
            tag=tag,
            request_repr={"caption": caption, "size": self.image_size},
            fn=lambda: self.transport.generate_image(profile, caption, self.image_size),
            response_repr=lambda data: f"<{len(data)} image bytes>",
            response_hash=lambda data: hashlib.sha256(data).hexdigest(),
        )
        return self.blob_store.put(blob)

    # -- internals ----------------------------------------------------------

    def _resolve_image(self, ref: str) -> bytes:
        if self.blob_store is None:
            raise ImageUnresolvableError(ref)
        return self.blob_store.get(ref)

    def _limiter(self, profile: BackendProfile) -> _RateLimiter:
        with self._limiter_lock:
            limiter = self._limiters.get(profile.limiter_key)
            if limiter is None or limiter.rpm != profile.rate_limit_rpm:
                limiter = _RateLimiter(profile.rate_limit_rpm, self.clock, self._sleep)
                self._limiters[profile.limiter_key] = limiter
            return limiter

    @staticmethod
    def _exchange_repr(exchange: ChatExchange) -> dict:
        return {
            "system": exchange.system_text,
            "parts": [
                {"text": p.text} if p.text is not None else {"image_ref": p.image_ref}
                for p in exchange.user_parts
            ],
            "params": {
                "temperature": exchange.params.temperature,
                "max_tokens": exchange.params.max_tokens,
                "seed": exchange.params.seed,
            },
        }

    def _call(
        self,
        profile: BackendProfile,
        tag: str | None,
        request_repr: dict,
        fn: Callable[[], object],
        response_repr: Callable[[object], str] = lambda r: r,
        response_hash: Callable[[object], str] = lambda r: _sha256(str(r)),
    ):
        limiter = self._limiter(profile)
        policy = profile.retry
        request_json = json.dumps(request_repr, ensure_ascii=False, sort_keys=True)
        started = self.clock()
        failures = 0
        last_rate_limited = False

        while True:
            limiter.acquire()
            try:
                result = fn()
            except RetryableTransportFailure as exc:
                failures += 1
                last_rate_limited = exc.rate_limited
                if failures >= policy.max_attempts:
                    error = (
                        RateLimitedError(str(exc), attempts=failures)
                        if last_rate_limited
                        else TransportError(
                            f"failed after {failures} attempts: {exc}", attempts=failures
                        )
                    )
                    self._journal(profile, tag, request_json, request_repr, None, None,
                                  failures, started, error=str(error))
                    raise error from exc
                self._sleep(policy.delay_ms(failures) / 1000.0)
            except Exception as exc:
                self._journal(profile, tag, request_json, request_repr, None, None,
                              failures + 1, started, error=str(exc))
                raise
            else:
                attempts = failures + 1
                self._journal(
                    profile, tag, request_json, request_repr,
                    response_repr(result), response_hash(result), attempts, started,
                )
                return result

    def _journal(self, profile, tag, request_json, request_repr, response,
                 resp_hash, attempts, started, error=None):
        self.audit.append(
            {
                "tag": tag,
                "role": profile.role.value,
                "model": profile.model_name,
                "kind": profile.kind.value,
                "request_sha256": _sha256(request_json),
                "response_sha256": resp_hash,
                "attempts": attempts,
                "latency_ms": round((self.clock() - started) * 1000.0, 3),
                "ok": error is None,
                "error": error,
                "request": request_repr,
                "response": response,
            }
        )
