from __future__ import annotations

import itertools
import json
import random

import pytest

from interweave.errors import (
    EmptyResponseError,
    FormatError,
    MissingSlotError,
    OutOfRangeError,
    UnknownSlotError,
)
from interweave.model import ScoreVector, Stage, Termination, Turn
from interweave.model import RefinementTrace
from interweave.prompts import (
    AR_GENERATE,
    IR_SUGGEST,
    JSON_FORMATS,
    JUDGE_SCORE,
    QR_GENERATE,
    QR_SUGGEST,
    PromptCatalog,
    PromptKind,
    Phase,
    PromptStage,
    format_judge_scores,
    parse_answer_caption,
    parse_judge_scores,
    parse_suggestion,
    render_prompt,
    rubric_text,
    serialize_history,
)


class TestRenderPrompt:
    def test_qr_generate_carries_topic_and_template(self):
        text = render_prompt(
            QR_GENERATE, {"topic": "Giant panda", "ques_temp": "Do you know ***?"}
        )
        assert "Giant panda" in text
        assert "Do you know ***?" in text
        assert "should not exceed 50 words" in text

    def test_missing_slot_rejected(self):
        with pytest.raises(MissingSlotError) as err:
            render_prompt(AR_GENERATE, {})
        assert err.value.name == "final_q"

    def test_unknown_slot_rejected(self):
        with pytest.raises(UnknownSlotError):
            render_prompt(
                QR_GENERATE,
                {"topic": "x", "ques_temp": "y ***", "bogus": "z"},
            )

    def test_judge_prompt_contains_rubric_and_format_line(self):
        text = render_prompt(JUDGE_SCORE, {"rubric": rubric_text(), "payload": "<chatbegin>x<chatend>"})
        assert "fair and impartial judge" in text
        assert "No text appears" in text and "No image appears" in text
        assert (
            "[Text Content Completeness: *; Image Content Completeness: *; "
            "Image Quality: *; Image-Text Synergy: *]" in text
        )

    def test_rendering_is_pure(self):
        slots = {"topic": "Oak tree", "ques_temp": "Describe ***."}
        assert render_prompt(QR_GENERATE, slots) == render_prompt(QR_GENERATE, slots)

    def test_judge_kind_only_scores(self):
        with pytest.raises(ValueError):
            PromptKind(PromptStage.JUDGE, Phase.GENERATE)
        with pytest.raises(ValueError):
            PromptKind(PromptStage.QR, Phase.SCORE)

    def test_history_prepended(self):
        turn = Turn(
            index=1,
            question="What do owls eat?",
            answer="Mostly small mammals.",
            temp_caption="t",
            final_caption="An owl hunting at night.",
            image_ref=None,
            traces={},
        )
        text = render_prompt(
            QR_SUGGEST,
            {"topic": "Owl", "old_q": "q?", "json_format": JSON_FORMATS[PromptStage.QR]},
            history=[turn],
        )
        assert text.startswith("Conversation history:")
        assert "Turn 1:" in text and "What do owls eat?" in text
        assert "An owl hunting at night." in text

    def test_override_directory(self, tmp_path):
        (tmp_path / "qr_generate.txt").write_text("Ask about {topic} using {ques_temp}.")
        catalog = PromptCatalog(override_dir=tmp_path)
        out = catalog.render(QR_GENERATE, {"topic": "A", "ques_temp": "B ***"})
        assert out == "Ask about A using B ***."

    def test_slot_values_with_braces_inserted_verbatim(self):
        text = render_prompt(
            IR_SUGGEST,
            {
                "final_q": "q",
                "final_a": "a",
                "old_c": "c",
                "json_format": JSON_FORMATS[PromptStage.IR],
            },
        )
        assert '{"suggestions":' in text


class TestSerializeHistory:
    def test_numbered_blocks(self):
        turns = [
            Turn(index=i, question=f"q{i}", answer=f"a{i}", temp_caption="t",
                 final_caption=f"c{i}", image_ref=None,
                 traces={Stage.QR.value: RefinementTrace(Stage.QR, (), Termination.EVALUATOR_ACCEPTED)})
            for i in (1, 2)
        ]
        text = serialize_history(turns)
        assert "Turn 1:\nQ: q1\nA: a1\nImage caption: c1" in text
        assert "Turn 2:" in text


class TestParseAnswerCaption:
    def test_canonical(self):
        pair = parse_answer_caption(
            "answer: Pandas eat bamboo.\ncaption: A panda chewing bamboo."
        )
        assert pair.answer == "Pandas eat bamboo."
        assert pair.caption == "A panda chewing bamboo."
        assert not pair.caption_over_limit

    def test_marker_order_enforced(self):
        with pytest.raises(FormatError) as err:
            parse_answer_caption("caption: x\nanswer: y")
        assert "before" in err.value.reason

    def test_whitespace_and_case_noise(self):
        pair = parse_answer_caption("Answer:  A \n\ncaption:\tB")
        assert (pair.answer, pair.caption) == ("A", "B")

    def test_missing_markers(self):
        with pytest.raises(FormatError):
            parse_answer_caption("some text without markers")
        with pytest.raises(FormatError):
            parse_answer_caption("answer: only an answer here")

    def test_multiline_answer(self):
        pair = parse_answer_caption("answer: line one\nline two\ncaption: cap")
        assert pair.answer == "line one\nline two"

    def test_over_limit_flag(self):
        caption = " ".join(["word"] * 66)
        pair = parse_answer_caption(f"answer: a\ncaption: {caption}")
        assert pair.caption_over_limit

    def test_fuzz_valid_layouts(self):
        rng = random.Random(20240715)
        cases = 0
        for _ in range(1000):
            answer = " ".join(rng.choices(["alpha", "beta", "gamma", "delta"], k=rng.randint(1, 6)))
            caption = " ".join(rng.choices(["red", "fox", "night", "scene"], k=rng.randint(1, 8)))
            a_mark = rng.choice(["answer:", "Answer:", "ANSWER:", "answer :"])
            c_mark = rng.choice(["caption:", "Caption:", "CAPTION:", "caption :"])
            lead = rng.choice(["", " ", "\t", "   "])
            gap = rng.choice(["\n", "\n\n", "\n \n"])
            sep = rng.choice([" ", "  ", "\t"])
            raw = f"{lead}{a_mark}{sep}{answer}{gap}{lead}{c_mark}{sep}{caption}{rng.choice(['', chr(10)])}"
            pair = parse_answer_caption(raw)
            assert pair.answer == answer
            assert pair.caption == caption
            cases += 1
        assert cases == 1000


ACCEPT_SPELLINGS = [
    "None",
    "none",
    "NONE",
    " None ",
    "None.",
    "none.\n",
    '"None"',
    "'none'",
    "`None`",
    "None!",
    "none;",
    "None:",
    "\tnone\t",
    "None,",
    "NoNe",
    '"None".',
    "“None”",
    "‘none’",
    "None\n\n",
    "  NONE.  ",
]


class TestParseSuggestion:
    @pytest.mark.parametrize("raw", ACCEPT_SPELLINGS)
    def test_accept_spellings(self, raw):
        assert parse_suggestion(raw).accepted

    def test_plain_suggestion_passthrough(self):
        outcome = parse_suggestion("Make the question shorter.")
        assert not outcome.accepted
        assert outcome.text == "Make the question shorter."

    def test_structured_single_field(self):
        outcome = parse_suggestion('{"suggestions": "Trim the wording."}')
        assert not outcome.accepted
        assert outcome.text == "Trim the wording."

    def test_structured_two_fields(self):
        raw = json.dumps(
            {"answer_suggestions": "Add detail.", "caption_suggestions": "Name the scene."}
        )
        outcome = parse_suggestion(raw)
        assert not outcome.accepted
        assert "answer_suggestions: Add detail." in outcome.text
        assert "caption_suggestions: Name the scene." in outcome.text

    def test_structured_all_empty_is_accept(self):
        assert parse_suggestion('{"suggestions": ""}').accepted
        assert parse_suggestion('{"suggestions": "None"}').accepted

    def test_fenced_json(self):
        assert not parse_suggestion('```json\n{"suggestions": "x"}\n```').accepted

    def test_empty_raises(self):
        with pytest.raises(EmptyResponseError):
            parse_suggestion("   \n ")

    def test_sentence_containing_none_is_not_accept(self):
        outcome = parse_suggestion("None of the elements match; rewrite the caption.")
        assert not outcome.accepted


class TestParseJudgeScores:
    def test_canonical(self):
        raw = (
            "[Text Content Completeness: 4; Image Content Completeness: 5; "
            "Image Quality: 3; Image-Text Synergy: 4]"
        )
        assert parse_judge_scores(raw).as_tuple() == (4, 5, 3, 4)

    def test_prose_tolerated(self):
        raw = (
            "After careful review of both modalities,\n"
            "[Text Content Completeness: 2; Image Content Completeness: 0; "
            "Image Quality: 1; Image-Text Synergy: 0]\nThanks!"
        )
        assert parse_judge_scores(raw).as_tuple() == (2, 0, 1, 0)

    def test_out_of_range(self):
        raw = (
            "[Text Content Completeness: 3; Image Content Completeness: 6; "
            "Image Quality: 2; Image-Text Synergy: 1]"
        )
        with pytest.raises(OutOfRangeError) as err:
            parse_judge_scores(raw)
        assert err.value.dimension == "icc"

    def test_two_blocks_ambiguous(self):
        block = format_judge_scores(ScoreVector(1, 1, 1, 1))
        with pytest.raises(FormatError) as err:
            parse_judge_scores(block + "\n" + block)
        assert "ambiguous" in err.value.reason

    def test_no_block(self):
        with pytest.raises(FormatError):
            parse_judge_scores("I would rate this rather highly overall.")

    def test_non_integer_scores_rejected(self):
        raw = (
            "[Text Content Completeness: 4.5; Image Content Completeness: 5; "
            "Image Quality: 3; Image-Text Synergy: 4]"
        )
        with pytest.raises(FormatError):
            parse_judge_scores(raw)

    def test_round_trip_all_vectors(self):
        for combo in itertools.product(range(6), repeat=4):
            vector = ScoreVector(*combo)
            assert parse_judge_scores(format_judge_scores(vector)) == vector

    def test_fuzz_corpus(self):
        rng = random.Random(987123)
        labels = [
            "Text Content Completeness",
            "Image Content Completeness",
            "Image Quality",
            "Image-Text Synergy",
        ]
        for _ in range(500):
            scores = [rng.randint(0, 5) for _ in range(4)]
            spaced = rng.choice(["", " ", "  "])
            cased = rng.choice([str.lower, str.upper, lambda s: s])
            block = "[" + ";".join(
                f"{spaced}{cased(label)}{spaced}:{spaced}{value}"
                for label, value in zip(labels, scores)
            ) + "]"
            prefix = rng.choice(["", "My assessment follows.\n", "Scores: "])
            suffix = rng.choice(["", "\nDone.", " (final)"])
            mutation = rng.randrange(5)
            if mutation == 0:
                # valid as constructed
                assert parse_judge_scores(prefix + block + suffix).as_tuple() == tuple(scores)
            elif mutation == 1:
                # out-of-range value in one dimension
                position = rng.randrange(4)
                scores[position] = rng.choice([-1, 6, 9])
                bad = "[" + "; ".join(
                    f"{label}: {value}" for label, value in zip(labels, scores)
                ) + "]"
                with pytest.raises(OutOfRangeError):
                    parse_judge_scores(bad)
            elif mutation == 2:
                # a label dropped entirely
                kept = rng.sample(range(4), 3)
                bad = "[" + "; ".join(
                    f"{labels[i]}: {scores[i]}" for i in sorted(kept)
                ) + "]"
                with pytest.raises(FormatError):
                    parse_judge_scores(prefix + bad + suffix)
            elif mutation == 3:
                # duplicated block
                two = prefix + block + "\n" + block
                with pytest.raises(FormatError):
                    parse_judge_scores(two)
            else:
                # no block at all
                with pytest.raises(FormatError):
                    parse_judge_scores(prefix + "no scores here" + suffix)
