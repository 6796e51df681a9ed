from __future__ import annotations

import pytest

from interweave.backends import (
    BackendKind,
    BackendProfile,
    BackendRole,
    Gateway,
    ScriptedTransport,
    canned_image_responder,
    classify_request,
)
from interweave.corpus import BlobStore
from interweave.pipeline import RefinementPipeline, RefinementPolicy

LM = BackendProfile(BackendRole.LM, BackendKind.SCRIPTED, "mock-lm", script="canned")
VLM = BackendProfile(BackendRole.VLM, BackendKind.SCRIPTED, "mock-vlm", script="canned")
IMAGE = BackendProfile(BackendRole.IMAGE, BackendKind.SCRIPTED, "mock-image", script="canned")


class KindQueueResponder:
    """Scripted responses keyed by call kind ('qr.suggest', 'judge', ...).

    Each kind holds a queue; the last entry is repeated once a queue runs
    dry so fixed transcripts stay short.
    """

    def __init__(self, scripts: dict[str, list[str]]):
        self.scripts = {kind: list(queue) for kind, queue in scripts.items()}
        self.calls: list[tuple[str, str]] = []  # (kind, prompt text)

    def __call__(self, profile, exchange) -> str:
        kind = classify_request(exchange)
        self.calls.append((kind, exchange.text_content()))
        queue = self.scripts.get(kind)
        if not queue:
            raise AssertionError(f"no scripted response for kind {kind!r} (tag={exchange.tag})")
        return queue.pop(0) if len(queue) > 1 else queue[0]

    def calls_for(self, kind: str) -> list[str]:
        return [text for k, text in self.calls if k == kind]


@pytest.fixture
def blob_store(tmp_path):
    return BlobStore(tmp_path / "blobs")


@pytest.fixture
def make_gateway(blob_store):
    def factory(chat_responder=None, image_responder=None, **kwargs) -> Gateway:
        transport = ScriptedTransport(
            chat_responder=chat_responder,
            image_responder=image_responder or canned_image_responder(seed=0),
        )
        return Gateway(transport, blob_store=blob_store, **kwargs)

    return factory


@pytest.fixture
def make_pipeline(make_gateway):
    def factory(scripts: dict[str, list[str]], policy: RefinementPolicy | None = None, **kwargs):
        responder = KindQueueResponder(scripts)
        gateway = make_gateway(chat_responder=responder)
        pipeline = RefinementPipeline(
            gateway=gateway,
            lm=LM,
            vlm=VLM,
            image_gen=IMAGE,
            policy=policy or RefinementPolicy(),
            **kwargs,
        )
        return pipeline, responder

    return factory
