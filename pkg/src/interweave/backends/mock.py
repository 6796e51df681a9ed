"""Deterministic scripted responders for offline runs and tests.

The canned chat responder is a pure function of (seed, request): it never
keeps state, so interrupted runs resume onto identical transcripts. Call
kinds are recognized from the exchange tag set by the pipeline (falling
back to distinctive phrases from the default prompt texts), which lets one
responder serve every stage.
"""

from __future__ import annotations

import hashlib
import json
import re

from .profiles import BackendProfile, ChatExchange
from .transports import ScriptedTransport

_KIND_MARKERS = (
    ("qr.generate", "I am building a question-answer dataset."),
    ("qr.suggest", "The first step is to imitate human needs"),
    ("qr.refine", "The following is the original question generated by an LLM"),
    ("ar.generate", "you should generate an answer and a description of the image"),
    ("ar.suggest", "Do you think the combination of this answer and image description"),
    ("ar.refine", "You are tasked with improving the output of a model output"),
    ("ir.suggest", "You now need to evaluate the quality of the image description and the image"),
    ("ir.refine", "Please regenerate the image description according to these suggestions"),
    ("judge", "You are an experienced, fair and impartial judge"),
)


_KNOWN_KINDS = frozenset(kind for kind, _ in _KIND_MARKERS)


def classify_request(exchange: ChatExchange) -> str:
    """Map an exchange to a call kind like 'qr.suggest' or 'judge'.

    Tags look like "t2.ar.suggest" (possibly with ".retry"/".shorten"
    suffixes); unknown tags fall back to matching distinctive phrases from
    the default prompt texts.
    """
    if exchange.tag:
        if exchange.tag.startswith("judge"):
            return "judge"
        segments = exchange.tag.split(".")
        for left, right in zip(segments, segments[1:]):
            if f"{left}.{right}" in _KNOWN_KINDS:
                return f"{left}.{right}"
            if left in ("qr", "ar", "ir") and right == "critique":
                return f"{left}.suggest"
    text = exchange.text_content()
    for kind, marker in _KIND_MARKERS:
        if marker in text:
            return kind
    return "unknown"


def _digest(*parts: str) -> str:
    return hashlib.sha256("\x1f".join(parts).encode("utf-8")).hexdigest()


_TOPIC_RE = re.compile(r"The topic of this dataset item is \((.+?)\)\.")


class CannedChatResponder:
    """Plausible, deterministic responses for every pipeline call kind.

    accept_mode:
      "always"  critics accept immediately (zero refinements everywhere)
      "never"   critics always suggest (every stage exhausts its budget)
      "hash"    accept decided by a seed-derived coin per call (~1/2)
    """

    def __init__(self, seed: int = 0, accept_mode: str = "hash"):
        if accept_mode not in ("always", "never", "hash"):
            raise ValueError(f"unknown accept_mode: {accept_mode}")
        self.seed = seed
        self.accept_mode = accept_mode

    def __call__(self, profile: BackendProfile, exchange: ChatExchange) -> str:
        kind = classify_request(exchange)
        text = exchange.text_content()
        h = _digest(str(self.seed), kind, text)[:10]

        if kind == "qr.generate":
            topic = self._topic(text)
            return f"Could you tell me something interesting about {topic} and draw a picture of it? [q-{h}]"
        if kind == "qr.refine":
            return f"What does it really look like? Please describe it and sketch it for me. [q-{h}]"
        if kind == "ar.generate":
            return (
                f"answer: Here is a clear explanation touching the key visual elements. [a-{h}]\n"
                f"caption: A detailed scene highlighting the subject from a wide angle. [c-{h}]"
            )
        if kind == "ar.refine":
            return (
                f"answer: A sharper explanation with the requested fixes applied. [a-{h}]\n"
                f"caption: A reworked scene with richer, complementary detail. [c-{h}]"
            )
        if kind == "ir.refine":
            return f"A regenerated scene description with the suggested adjustments. [c-{h}]"
        if kind in ("qr.suggest", "ar.suggest", "ir.suggest"):
            if self._accepts(h):
                return "None"
            if kind == "ar.suggest":
                return json.dumps(
                    {
                        "answer_suggestions": f"Tighten the wording and cover every asked element. [s-{h}]",
                        "caption_suggestions": f"Add one complementary visual detail. [s-{h}]",
                    }
                )
            return json.dumps({"suggestions": f"Make it more natural and specific. [s-{h}]"})
        if kind == "judge":
            nums = [int(c, 16) % 6 for c in _digest(str(self.seed), "scores", text)[:4]]
            return (
                f"[Text Content Completeness: {nums[0]}; Image Content Completeness: {nums[1]}; "
                f"Image Quality: {nums[2]}; Image-Text Synergy: {nums[3]}]"
            )
        return f"Understood. [r-{h}]"

    def _accepts(self, h: str) -> bool:
        if self.accept_mode == "always":
            return True
        if self.accept_mode == "never":
            return False
        return int(h, 16) % 2 == 0

    @staticmethod
    def _topic(text: str) -> str:
        m = _TOPIC_RE.search(text)
        return m.group(1) if m else "this topic"


def canned_image_responder(seed: int = 0):
    """Fixed fake image bytes per caption; same caption, same bytes, same ref."""

    def responder(profile: BackendProfile, caption: str) -> bytes:
        return b"MOCKIMG\x00" + _digest(str(seed), caption).encode("ascii")

    return responder


class QueueResponder:
    """Replays a scripted list of responses in order (tests' workhorse)."""

    def __init__(self, responses, *, cycle_last: bool = False):
        self.responses = list(responses)
        self.cycle_last = cycle_last
        self.calls: list[ChatExchange] = []

    def __call__(self, profile: BackendProfile, exchange: ChatExchange) -> str:
        self.calls.append(exchange)
        if not self.responses:
            raise AssertionError("queue responder ran out of scripted responses")
        if len(self.responses) == 1 and self.cycle_last:
            return self.responses[0]
        return self.responses.pop(0)


def scripted_transport(
    seed: int = 0,
    accept_mode: str = "hash",
    chat_responder=None,
    image_responder=None,
) -> ScriptedTransport:
    """Convenience wiring for a fully offline backend set."""
    return ScriptedTransport(
        chat_responder=chat_responder or CannedChatResponder(seed, accept_mode),
        image_responder=image_responder or canned_image_responder(seed),
    )


BUILTIN_SCRIPTS = {
    "canned": "hash",
    "always-accept": "always",
    "never-accept": "never",
}


def transport_for_script(script: str, seed: int) -> ScriptedTransport:
    """Resolve a manifest `script:` name to a ready transport."""
    if script not in BUILTIN_SCRIPTS:
        raise ValueError(f"unknown scripted backend: {script!r} (choose from {sorted(BUILTIN_SCRIPTS)})")
    return scripted_transport(seed=seed, accept_mode=BUILTIN_SCRIPTS[script])
