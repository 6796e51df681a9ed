"""Transports: HTTP endpoints and in-process scripted responders.

A transport performs exactly one request attempt; retries, rate limiting
and auditing live in the gateway. Retryable failures raise
`RetryableTransportFailure` so the gateway can tell them apart from hard
errors (bad request, missing credentials).
"""

from __future__ import annotations

import base64
import os
from typing import Callable, Protocol

import requests

from ..errors import AuthMissingError, TransportError
from .profiles import BackendProfile, ChatExchange


class RetryableTransportFailure(Exception):
    """One attempt failed in a way worth retrying (connection, 429, 5xx)."""

    def __init__(self, message: str, rate_limited: bool = False):
        self.rate_limited = rate_limited
        super().__init__(message)


class Transport(Protocol):
    def chat(self, profile: BackendProfile, exchange: ChatExchange,
             resolve_image: Callable[[str], bytes]) -> str: ...

    def generate_image(self, profile: BackendProfile, caption: str, size: str) -> bytes: ...


def _bearer_headers(profile: BackendProfile) -> dict[str, str]:
    headers = {"Content-Type": "application/json"}
    if profile.auth_env_var:
        token = os.environ.get(profile.auth_env_var)
        if not token:
            raise AuthMissingError(profile.auth_env_var)
        headers["Authorization"] = f"Bearer {token}"
    return headers


class HttpTransport:
    """Chat-completions-style JSON POST plus a caption-to-image endpoint."""

    def __init__(self, timeout_s: float = 120.0, session: requests.Session | None = None):
        self.timeout_s = timeout_s
        self.session = session or requests.Session()

    def chat(self, profile, exchange, resolve_image) -> str:
        content: list[dict] | str
        parts = []
        for part in exchange.user_parts:
            if part.text is not None:
                parts.append({"type": "text", "text": part.text})
            else:
                blob = resolve_image(part.image_ref)
                encoded = base64.b64encode(blob).decode("ascii")
                parts.append(
                    {"type": "image_url", "image_url": {"url": f"data:image/png;base64,{encoded}"}}
                )
        # Collapse to the plain-string form when there is a single text part.
        content = parts[0]["text"] if len(parts) == 1 and "text" in parts[0] else parts

        messages = []
        if exchange.system_text:
            messages.append({"role": "system", "content": exchange.system_text})
        messages.append({"role": "user", "content": content})

        body = {
            "model": profile.model_name,
            "messages": messages,
            "temperature": exchange.params.temperature,
            "max_tokens": exchange.params.max_tokens,
        }
        if exchange.params.seed is not None:
            body["seed"] = exchange.params.seed

        data = self._post(profile, body)
        try:
            return data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"unexpected chat response shape: {exc}") from exc

    def generate_image(self, profile, caption, size) -> bytes:
        data = self._post(profile, {"caption": caption, "size": size})
        for key in ("image_base64", "b64_json"):
            if key in data:
                return base64.b64decode(data[key])
        try:
            return base64.b64decode(data["data"][0]["b64_json"])
        except (KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"unexpected image response shape: {exc}") from exc

    def _post(self, profile: BackendProfile, body: dict) -> dict:
        headers = _bearer_headers(profile)
        try:
            response = self.session.post(
                profile.endpoint_url, json=body, headers=headers, timeout=self.timeout_s
            )
        except requests.RequestException as exc:
            raise RetryableTransportFailure(f"request failed: {exc}") from exc
        if response.status_code == 429:
            raise RetryableTransportFailure("rate limited (429)", rate_limited=True)
        if response.status_code >= 500:
            raise RetryableTransportFailure(f"server error ({response.status_code})")
        if response.status_code >= 400:
            raise TransportError(f"request rejected ({response.status_code}): {response.text[:200]}")
        try:
            return response.json()
        except ValueError as exc:
            raise TransportError("response is not JSON") from exc


class ScriptedTransport:
    """Deterministic in-process backend driven by responder callables.

    `chat_responder(profile, exchange) -> str` and
    `image_responder(profile, caption) -> bytes`. Responders are expected to
    be pure functions of their inputs (plus any frozen seed), which is what
    makes whole pipeline runs reproducible and resumable.
    """

    def __init__(
        self,
        chat_responder: Callable[[BackendProfile, ChatExchange], str] | None = None,
        image_responder: Callable[[BackendProfile, str], bytes] | None = None,
    ):
        self.chat_responder = chat_responder
        self.image_responder = image_responder

    def chat(self, profile, exchange, resolve_image) -> str:
        if self.chat_responder is None:
            raise TransportError("no chat responder scripted")
        return self.chat_responder(profile, exchange)

    def generate_image(self, profile, caption, size) -> bytes:
        if self.image_responder is None:
            raise TransportError("no image responder scripted")
        return self.image_responder(profile, caption)
