from __future__ import annotations

import itertools
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from interweave.errors import CaptionTooLongError, OutOfRangeError
from interweave.model import (
    Conversation,
    RefinementStep,
    RefinementTrace,
    ScoreRecord,
    ScoreVector,
    Stage,
    Termination,
    TopicPath,
    Turn,
    JudgeKind,
    QuestionTemplate,
    validate_score_vector,
    word_count,
)


class TestScoreVector:
    def test_rubric_bounds(self):
        assert validate_score_vector(5, 5, 5, 5).as_tuple() == (5, 5, 5, 5)
        assert validate_score_vector(0, 0, 0, 0).as_tuple() == (0, 0, 0, 0)

    def test_out_of_range_names_dimension(self):
        with pytest.raises(OutOfRangeError) as err:
            validate_score_vector(3, 6, 2, 1)
        assert err.value.dimension == "icc"
        assert err.value.value == 6

    def test_accepts_all_valid_tuples(self):
        for combo in itertools.product(range(6), repeat=4):
            assert validate_score_vector(*combo).as_tuple() == combo

    @given(st.tuples(st.integers(-3, 9), st.integers(-3, 9), st.integers(-3, 9), st.integers(-3, 9)))
    def test_rejects_exactly_out_of_bounds(self, combo):
        valid = all(0 <= v <= 5 for v in combo)
        if valid:
            assert validate_score_vector(*combo).as_tuple() == combo
        else:
            with pytest.raises(OutOfRangeError):
                validate_score_vector(*combo)

    def test_non_integers_rejected(self):
        with pytest.raises(OutOfRangeError):
            validate_score_vector(4.0, 4, 4, 4)
        with pytest.raises(OutOfRangeError):
            validate_score_vector(True, 4, 4, 4)


class TestWordCount:
    def test_empty(self):
        assert word_count("") == 0

    def test_simple(self):
        assert word_count("a red fox") == 3

    def test_mixed_whitespace(self):
        assert word_count("  two\t words \n") == 2

    @given(st.text(max_size=200))
    def test_matches_unicode_whitespace_run_oracle(self, text):
        tokens = [t for t in re.split(r"\s+", text.strip()) if t]
        assert word_count(text) == len(tokens)


def make_trace(stage=Stage.QR, n_steps=0, termination=Termination.EVALUATOR_ACCEPTED):
    steps = tuple(
        RefinementStep(f"v{i}", f"suggestion {i}", f"v{i+1}") for i in range(n_steps)
    )
    return RefinementTrace(stage, steps, termination)


def make_turn(index=1, caption="a short caption", **kwargs):
    return Turn(
        index=index,
        question=kwargs.get("question", f"Question {index}?"),
        answer=kwargs.get("answer", f"Answer {index}."),
        temp_caption="temp caption",
        final_caption=caption,
        image_ref=kwargs.get("image_ref", "sha256:" + "0" * 64),
        traces={
            Stage.QR.value: make_trace(Stage.QR),
            Stage.AR.value: make_trace(Stage.AR, 1),
            Stage.IR.value: make_trace(Stage.IR, 2, Termination.BUDGET_EXHAUSTED),
        },
    )


class TestTurn:
    def test_caption_word_limit_enforced(self):
        with pytest.raises(CaptionTooLongError):
            make_turn(caption=" ".join(["word"] * 66))

    def test_caption_at_limit_ok(self):
        turn = make_turn(caption=" ".join(["word"] * 65))
        assert word_count(turn.final_caption) == 65

    def test_index_one_based(self):
        with pytest.raises(ValueError):
            make_turn(index=0)


class TestConversation:
    def test_history_is_strict_prefix(self):
        conv = Conversation(
            id="c1",
            topic=TopicPath("Animals", "Birds", "Owl"),
            template_id="tmpl-000",
            turns=(make_turn(1), make_turn(2), make_turn(3)),
            turn_budget=3,
        )
        assert [t.index for t in conv.history(3)] == [1, 2]
        assert conv.history(1) == ()

    def test_turn_indices_contiguous(self):
        with pytest.raises(ValueError):
            Conversation(
                id="c1",
                topic=TopicPath("Animals", "Birds", "Owl"),
                template_id="tmpl-000",
                turns=(make_turn(1), make_turn(3)),
                turn_budget=3,
            )

    def test_budget_cap(self):
        with pytest.raises(ValueError):
            Conversation(
                id="c1",
                topic=TopicPath("Animals", "Birds", "Owl"),
                template_id="tmpl-000",
                turns=(make_turn(1), make_turn(2)),
                turn_budget=1,
            )

    def test_json_round_trip(self):
        conv = Conversation(
            id="c-42",
            topic=TopicPath("Food", "Beverages", "Tea"),
            template_id="tmpl-007",
            turns=(make_turn(1), make_turn(2)),
            turn_budget=3,
            failure="turn 3 ar failed: boom",
        )
        assert Conversation.from_json(conv.to_json()) == conv

    @given(
        st.lists(
            st.tuples(st.text(min_size=1, max_size=20), st.integers(0, 3)),
            min_size=0,
            max_size=3,
        )
    )
    def test_round_trip_with_varied_traces(self, turn_specs):
        turns = []
        for i, (text, n_steps) in enumerate(turn_specs, start=1):
            turns.append(
                Turn(
                    index=i,
                    question=f"q {text} {i}",
                    answer=f"a {text}",
                    temp_caption=text,
                    final_caption=f"caption {i}",
                    image_ref=None,
                    traces={Stage.IR.value: make_trace(Stage.IR, n_steps)},
                )
            )
        conv = Conversation(
            id="c",
            topic=TopicPath("D", "C", "T"),
            template_id="t",
            turns=tuple(turns),
            turn_budget=max(len(turns), 1),
        )
        assert Conversation.from_json(conv.to_json()) == conv


class TestScoreRecord:
    def test_round_trip(self):
        record = ScoreRecord("s1", "judge-x", JudgeKind.MODEL, ScoreVector(4, 5, 3, 4),
                             "2024-01-01T00:00:00Z")
        assert ScoreRecord.from_dict(record.as_dict()) == record


class TestTemplatesAndTopics:
    def test_template_requires_placeholder(self):
        QuestionTemplate("t0", "Tell me about ***.")
        with pytest.raises(ValueError):
            QuestionTemplate("t1", "Tell me about something.")

    def test_topic_path_segments_non_empty(self):
        with pytest.raises(ValueError):
            TopicPath("Animals", "", "Owl")
