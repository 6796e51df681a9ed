from __future__ import annotations

import re

import pytest

from interweave.backends import (
    CannedChatResponder,
    Gateway,
    ScriptedTransport,
    canned_image_responder,
)
from interweave.corpus import BlobStore, WorkSampler, packaged_hierarchy, packaged_templates
from interweave.model import QuestionTemplate, TopicPath
from interweave.pipeline import (
    GenerationConfig,
    GenerationRunner,
    RefinementPipeline,
    RunInterrupted,
    run_conversation,
)
from interweave.prompts import serialize_history
from tests.conftest import IMAGE, LM, VLM

TOPIC = TopicPath("Plants", "Ornamental Plants", "Tulip")
TEMPLATE = QuestionTemplate("tmpl-001", "What does *** look like? Draw it.")

TWO_LINES = "answer: Tulips are cup-shaped spring flowers.\ncaption: A field of red tulips."


def build_pipeline(blob_root, seed=11, accept_mode="hash", wrap_chat=None, audit_log=None):
    chat = CannedChatResponder(seed=seed, accept_mode=accept_mode)
    if wrap_chat is not None:
        chat = wrap_chat(chat)
    transport = ScriptedTransport(
        chat_responder=chat, image_responder=canned_image_responder(seed=seed)
    )
    gateway = Gateway(transport, blob_store=BlobStore(blob_root), audit_log=audit_log)
    return RefinementPipeline(gateway=gateway, lm=LM, vlm=VLM, image_gen=IMAGE)


class TestRunConversation:
    def test_single_turn_all_accept(self, tmp_path):
        pipeline = build_pipeline(tmp_path / "blobs", accept_mode="always")
        conv = run_conversation(pipeline, TOPIC, TEMPLATE, 1, "conv-0")
        assert len(conv.turns) == 1
        assert conv.failure is None
        turn = conv.turns[0]
        assert set(turn.traces) == {"qr", "ar", "ir"}
        assert all(trace.refinement_count == 0 for trace in turn.traces.values())

    def test_turn_three_prompts_thread_exactly_prior_turns(self, tmp_path):
        pipeline = build_pipeline(tmp_path / "blobs", accept_mode="always")
        conv = run_conversation(pipeline, TOPIC, TEMPLATE, 3, "conv-0")
        assert len(conv.turns) == 3

        expected_history = serialize_history(conv.turns[:2])
        entries = pipeline.gateway.audit.entries()
        turn3 = [e for e in entries if e["tag"] and e["tag"].startswith("t3.")]
        assert turn3, "no turn-3 calls were audited"

        history_kinds = {"qr.generate", "qr.suggest", "ar.generate", "ar.suggest", "ir.critique"}
        for entry in turn3:
            if entry["kind"] == "http_image" or entry["tag"].startswith("t3.image"):
                continue
            prompt = "\n".join(
                part["text"] for part in entry["request"]["parts"] if "text" in part
            )
            kind = ".".join(entry["tag"].split(".")[1:3])
            turn_markers = set(re.findall(r"^Turn (\d+):$", prompt, flags=re.MULTILINE))
            if kind in history_kinds:
                assert expected_history in prompt, f"{entry['tag']} lacks the history block"
                assert turn_markers == {"1", "2"}, f"{entry['tag']} markers: {turn_markers}"
            else:
                # refinement prompts carry only content and suggestion
                assert turn_markers == set(), f"{entry['tag']} unexpectedly carries history"

    def test_history_blocks_absent_on_first_turn(self, tmp_path):
        pipeline = build_pipeline(tmp_path / "blobs", accept_mode="always")
        run_conversation(pipeline, TOPIC, TEMPLATE, 1, "conv-0")
        for entry in pipeline.gateway.audit.entries():
            if entry["tag"].startswith("t1.image"):
                continue
            prompt = "\n".join(p["text"] for p in entry["request"]["parts"] if "text" in p)
            assert "Conversation history:" not in prompt

    def test_failure_at_turn_two_keeps_turn_one(self, make_pipeline):
        pipeline, _ = make_pipeline(
            {
                "qr.generate": ["Describe a tulip and sketch it?"],
                "qr.suggest": ["None"],
                # valid pair for turn 1, then persistent junk for turn 2
                "ar.generate": [TWO_LINES, "junk", "junk"],
                "ar.suggest": ["None"],
                "ir.suggest": ["None"],
            }
        )
        conv = run_conversation(pipeline, TOPIC, TEMPLATE, 3, "conv-0")
        assert len(conv.turns) == 1
        assert conv.failure is not None
        assert "turn 2 ar failed" in conv.failure

    def test_fresh_template_sampled_per_follow_up_turn(self, tmp_path):
        pipeline = build_pipeline(tmp_path / "blobs", accept_mode="always")
        sampled = []

        def template_for_turn(turn):
            template = QuestionTemplate(f"tmpl-t{turn}", f"Turn {turn} asks about ***.")
            sampled.append(template.id)
            return template

        run_conversation(pipeline, TOPIC, TEMPLATE, 3, "conv-0", template_for_turn)
        assert sampled == ["tmpl-t2", "tmpl-t3"]


class _InterruptAfter:
    def __init__(self, inner, calls):
        self.inner = inner
        self.remaining = calls

    def __call__(self, profile, exchange):
        if self.remaining <= 0:
            raise RunInterrupted()
        self.remaining -= 1
        return self.inner(profile, exchange)


def run_batch(tmp_path, name, interrupt_after=None, conversations=8, workers=2, seed=23):
    out_dir = tmp_path / name
    wrap = (lambda chat: _InterruptAfter(chat, interrupt_after)) if interrupt_after else None
    pipeline = build_pipeline(tmp_path / f"{name}-blobs", seed=seed, wrap_chat=wrap)
    sampler = WorkSampler(packaged_hierarchy(), packaged_templates(), seed)
    runner = GenerationRunner(
        pipeline,
        sampler,
        GenerationConfig(
            run_id="batch", seed=seed, conversations=conversations,
            turn_budget=2, workers=workers,
        ),
        out_dir,
    )
    summary = runner.run()
    return out_dir, summary


class TestGenerationRunner:
    def test_two_runs_byte_identical(self, tmp_path):
        dir_a, _ = run_batch(tmp_path, "a")
        dir_b, _ = run_batch(tmp_path, "b")
        assert (dir_a / "dataset.jsonl").read_bytes() == (dir_b / "dataset.jsonl").read_bytes()

    def test_interrupt_and_resume_matches_uninterrupted(self, tmp_path):
        reference_dir, _ = run_batch(tmp_path, "ref")
        reference = (reference_dir / "dataset.jsonl").read_bytes()

        out_dir, summary = run_batch(tmp_path, "resumable", interrupt_after=37, workers=1)
        assert summary.interrupted
        partial = (out_dir / "dataset.jsonl").read_bytes()
        assert len(partial) < len(reference)

        # resume with a fresh, uninterrupted pipeline against the same dir
        pipeline = build_pipeline(tmp_path / "resumable-blobs-2", seed=23)
        sampler = WorkSampler(packaged_hierarchy(), packaged_templates(), 23)
        runner = GenerationRunner(
            pipeline,
            sampler,
            GenerationConfig(run_id="batch", seed=23, conversations=8, turn_budget=2, workers=1),
            out_dir,
        )
        summary2 = runner.run()
        assert not summary2.interrupted
        assert (out_dir / "dataset.jsonl").read_bytes() == reference
        assert not list((out_dir / "state").iterdir())

    def test_mismatched_config_rejected(self, tmp_path):
        out_dir, _ = run_batch(tmp_path, "locked", conversations=2)
        pipeline = build_pipeline(tmp_path / "other-blobs", seed=99)
        sampler = WorkSampler(packaged_hierarchy(), packaged_templates(), 99)
        runner = GenerationRunner(
            pipeline,
            sampler,
            GenerationConfig(run_id="batch", seed=99, conversations=2, turn_budget=2),
            out_dir,
        )
        from interweave.errors import ManifestError

        with pytest.raises(ManifestError):
            runner.run()

    def test_summary_counts(self, tmp_path):
        _, summary = run_batch(tmp_path, "counts", conversations=4, workers=1)
        assert summary.completed == 4
        assert summary.failed == 0
        assert set(summary.mean_refinements) == {"qr", "ar", "ir"}
