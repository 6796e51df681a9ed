"""Backend profile and request types for the three model roles."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class BackendRole(str, Enum):
    LM = "lm"          # text model driving generation and refinement
    VLM = "vlm"        # vision-language critic
    IMAGE = "image"    # text-to-image generator


class BackendKind(str, Enum):
    HTTP_CHAT = "http_chat"
    HTTP_IMAGE = "http_image"
    SCRIPTED = "scripted"


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    backoff_base_ms: int = 250
    backoff_cap_ms: int = 8000

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        if self.backoff_base_ms < 0 or self.backoff_cap_ms < 0:
            raise ValueError("backoff values must be non-negative")

    def delay_ms(self, failed_attempts: int) -> int:
        """Exponential backoff, capped: base * 2^(failures-1)."""
        raw = self.backoff_base_ms * (2 ** max(0, failed_attempts - 1))
        return min(raw, self.backoff_cap_ms)


@dataclass(frozen=True)
class BackendProfile:
    role: BackendRole
    kind: BackendKind
    model_name: str
    endpoint_url: str | None = None
    auth_env_var: str | None = None
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    rate_limit_rpm: int = 0  # 0 disables rate limiting
    script: str | None = None  # responder name for scripted backends

    def __post_init__(self):
        if self.kind in (BackendKind.HTTP_CHAT, BackendKind.HTTP_IMAGE) and not self.endpoint_url:
            raise ValueError(f"{self.kind.value} backend needs an endpoint_url")
        if self.kind is BackendKind.SCRIPTED and not self.script:
            raise ValueError("scripted backend needs a script name")
        if self.rate_limit_rpm < 0:
            raise ValueError("rate_limit_rpm must be non-negative")

    @property
    def limiter_key(self) -> str:
        return f"{self.endpoint_url or 'scripted'}::{self.model_name}"


@dataclass(frozen=True)
class GenParams:
    temperature: float = 0.7
    max_tokens: int = 1024
    seed: int | None = None


@dataclass(frozen=True)
class ChatPart:
    """One user-content part: plain text or a content-addressed image."""

    text: str | None = None
    image_ref: str | None = None

    def __post_init__(self):
        if (self.text is None) == (self.image_ref is None):
            raise ValueError("a chat part holds exactly one of text or image_ref")


@dataclass(frozen=True)
class ChatExchange:
    user_parts: tuple[ChatPart, ...]
    system_text: str | None = None
    params: GenParams = field(default_factory=GenParams)
    # Free-form label recorded in the audit log (e.g. "t2.qr.suggest");
    # scripted backends may use it, HTTP transports never send it.
    tag: str | None = None

    def __post_init__(self):
        if not self.user_parts:
            raise ValueError("an exchange needs at least one user part")

    @property
    def has_image(self) -> bool:
        return any(p.image_ref is not None for p in self.user_parts)

    def text_content(self) -> str:
        return "\n".join(p.text for p in self.user_parts if p.text is not None)


def text_exchange(
    prompt: str,
    params: GenParams | None = None,
    system_text: str | None = None,
    tag: str | None = None,
) -> ChatExchange:
    return ChatExchange(
        user_parts=(ChatPart(text=prompt),),
        system_text=system_text,
        params=params or GenParams(),
        tag=tag,
    )
