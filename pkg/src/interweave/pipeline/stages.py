"""The three cascaded refinement stages and per-turn composition.

Per turn: question refinement produces the final question; answer
refinement produces the answer plus a temporary caption; image refinement
regenerates an image per caption version until the critic accepts. History
(prior completed turns) threads into the generate and evaluate prompts;
apply-refinement prompts only ever see the content and the suggestion.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..backends import BackendProfile, Gateway, GenParams, text_exchange
from ..errors import CaptionTooLongError, FormatError, QuestionTooLongError, StageError
from ..model import (
    CAPTION_WORD_LIMIT,
    QUESTION_WORD_LIMIT,
    QuestionTemplate,
    RefinementTrace,
    Stage,
    Termination,
    TopicPath,
    Turn,
    word_count,
)
from ..prompts import (
    AR_GENERATE,
    AR_REFINE,
    AR_SUGGEST,
    IR_REFINE,
    IR_SUGGEST,
    JSON_FORMATS,
    QR_GENERATE,
    QR_REFINE,
    QR_SUGGEST,
    AnswerCaption,
    PromptCatalog,
    PromptKind,
    PromptStage,
    parse_answer_caption,
    parse_suggestion,
)
from .refine import RefinementPolicy, StageContext, refine

SHORTEN_SUGGESTION = (
    "The image description exceeds the 65-word limit. Shorten it to at most "
    "65 words while keeping the key visual elements."
)

FLAG_QUESTION_OVER_LIMIT = "question_over_50_words"
FLAG_CAPTION_OVER_LIMIT = "caption_over_65_words"
FLAG_CAPTION_SHORTENED = "caption_shortened"


@dataclass
class RefinementPipeline:
    """Drives QR, AR and IR against the configured model backends."""

    gateway: Gateway
    lm: BackendProfile
    vlm: BackendProfile
    image_gen: BackendProfile
    policy: RefinementPolicy = field(default_factory=RefinementPolicy)
    catalog: PromptCatalog = field(default_factory=PromptCatalog)
    gen_params: GenParams = field(default_factory=lambda: GenParams(temperature=0.7))
    eval_params: GenParams = field(default_factory=lambda: GenParams(temperature=0.0))
    # Over-length questions are flagged by default; strict mode rejects them.
    strict_question_length: bool = False

    # -- shared helpers ------------------------------------------------------

    def _chat(self, prompt: str, tag: str, params: GenParams) -> str:
        return self.gateway.complete_text(
            self.lm, text_exchange(prompt, params=params, tag=tag)
        ).strip()

    def _chat_parsed(self, prompt: str, tag: str, params: GenParams, parser: Callable):
        """One automatic re-prompt on a malformed response before giving up."""
        raw = self.gateway.complete_text(self.lm, text_exchange(prompt, params=params, tag=tag))
        try:
            return parser(raw), 0
        except FormatError:
            raw = self.gateway.complete_text(
                self.lm, text_exchange(prompt, params=params, tag=f"{tag}.retry")
            )
            return parser(raw), 1

    def _render(self, kind: PromptKind, slots: dict, history: Sequence[Turn] = ()) -> str:
        return self.catalog.render(kind, slots, history=history or None)

    # -- question refinement -------------------------------------------------

    def run_qr(
        self,
        template: QuestionTemplate,
        topic: TopicPath,
        history: Sequence[Turn] = (),
        turn: int = 1,
    ) -> tuple[str, RefinementTrace]:
        tagbase = f"t{turn}.qr"
        prompt = self._render(
            QR_GENERATE,
            {"topic": topic.topic, "ques_temp": template.pattern},
            history,
        )
        question = self._chat(prompt, f"{tagbase}.generate", self.gen_params)

        def evaluate(q: str, _ctx):
            suggest_prompt = self._render(
                QR_SUGGEST,
                {
                    "topic": topic.topic,
                    "old_q": q,
                    "json_format": JSON_FORMATS[PromptStage.QR],
                },
                history,
            )
            raw = self.gateway.complete_text(
                self.lm, text_exchange(suggest_prompt, params=self.eval_params, tag=f"{tagbase}.suggest")
            )
            return parse_suggestion(raw)

        def apply(q: str, suggestion: str) -> str:
            refine_prompt = self._render(
                QR_REFINE, {"old_q": q, "mod_q_suggestion": suggestion}
            )
            return self._chat(refine_prompt, f"{tagbase}.refine", self.gen_params)

        ctx = StageContext(topic=topic, template=template, history=tuple(history))
        question, trace = refine(question, Stage.QR, ctx, self.policy.k_qr, evaluate, apply)

        if word_count(question) > QUESTION_WORD_LIMIT:
            if self.strict_question_length:
                raise StageError(
                    Stage.QR.value,
                    QuestionTooLongError(word_count(question), QUESTION_WORD_LIMIT),
                    trace,
                )
            trace = dataclasses.replace(trace, flags=trace.flags + (FLAG_QUESTION_OVER_LIMIT,))
        return question, trace

    # -- answer refinement -----------------------------------------------------

    def _answer_caption(
        self, prompt: str, tag: str, params: GenParams
    ) -> tuple[AnswerCaption, int]:
        """Parse an answer/caption pair, re-prompting once if the caption
        blows the word limit (the over-limit flag survives on the pair)."""
        pair, reprompts = self._chat_parsed(prompt, tag, params, parse_answer_caption)
        if pair.caption_over_limit and reprompts == 0:
            try:
                retry, _ = self._chat_parsed(
                    prompt, f"{tag}.shorten", params, parse_answer_caption
                )
            except FormatError:
                return pair, 1
            return (retry, 1) if not retry.caption_over_limit else (pair, 1)
        return pair, reprompts

    def run_ar(
        self,
        question: str,
        history: Sequence[Turn] = (),
        turn: int = 1,
    ) -> tuple[str, str, RefinementTrace]:
        tagbase = f"t{turn}.ar"
        prompt = self._render(AR_GENERATE, {"final_q": question}, history)
        try:
            pair, reprompts = self._answer_caption(prompt, f"{tagbase}.generate", self.gen_params)
        except FormatError as exc:
            raise StageError(
                Stage.AR.value, exc,
                RefinementTrace(Stage.AR, (), Termination.BUDGET_EXHAUSTED, flags=("aborted",)),
            ) from exc

        reprompt_box = [reprompts]

        def evaluate(p: AnswerCaption, _ctx):
            suggest_prompt = self._render(
                AR_SUGGEST,
                {
                    "final_q": question,
                    "old_ac": p.as_block(),
                    "json_format": JSON_FORMATS[PromptStage.AR],
                },
                history,
            )
            raw = self.gateway.complete_text(
                self.lm, text_exchange(suggest_prompt, params=self.eval_params, tag=f"{tagbase}.suggest")
            )
            return parse_suggestion(raw)

        def apply(p: AnswerCaption, suggestion: str) -> AnswerCaption:
            refine_prompt = self._render(
                AR_REFINE, {"old_ac": p.as_block(), "mod_ac_suggestion": suggestion}
            )
            refined, extra = self._answer_caption(refine_prompt, f"{tagbase}.refine", self.gen_params)
            reprompt_box[0] += extra
            return refined

        ctx = StageContext(history=tuple(history), question=question)
        pair, trace = refine(
            pair, Stage.AR, ctx, self.policy.k_ar, evaluate, apply,
            snapshot=lambda p: p.as_block(),
        )

        flags = trace.flags
        if pair.caption_over_limit:
            flags = flags + (FLAG_CAPTION_OVER_LIMIT,)
        trace = dataclasses.replace(trace, reprompts=reprompt_box[0], flags=flags)
        return pair.answer, pair.caption, trace

    # -- image refinement --------------------------------------------------------

    def _fit_caption(self, caption: str, tag: str, flags: list[str]) -> str:
        """Captions must fit the word limit before image generation; one
        shorten attempt through the refine prompt, then a hard error."""
        if word_count(caption) <= CAPTION_WORD_LIMIT:
            return caption
        prompt = self._render(
            IR_REFINE, {"old_c": caption, "mod_c_suggestion": SHORTEN_SUGGESTION}
        )
        shortened = self._chat(prompt, f"{tag}.shorten", self.gen_params)
        if word_count(shortened) > CAPTION_WORD_LIMIT:
            raise CaptionTooLongError(word_count(shortened), CAPTION_WORD_LIMIT)
        flags.append(FLAG_CAPTION_SHORTENED)
        return shortened

    def run_ir(
        self,
        question: str,
        answer: str,
        temp_caption: str,
        history: Sequence[Turn] = (),
        turn: int = 1,
    ) -> tuple[str, str, RefinementTrace]:
        tagbase = f"t{turn}.ir"
        flags: list[str] = []
        images: list[str] = []

        def ensure_image(caption: str) -> str:
            ref = self.gateway.generate_image(
                self.image_gen, caption, tag=f"t{turn}.image.generate"
            )
            images.append(ref)
            return ref

        def evaluate(caption: str, _ctx):
            image_ref = ensure_image(caption)
            critique_prompt = self._render(
                IR_SUGGEST,
                {
                    "final_q": question,
                    "final_a": answer,
                    "old_c": caption,
                    "json_format": JSON_FORMATS[PromptStage.IR],
                },
                history,
            )
            raw = self.gateway.critique_image(
                self.vlm, image_ref, [critique_prompt],
                params=self.eval_params, tag=f"{tagbase}.critique",
            )
            return parse_suggestion(raw)

        def apply(caption: str, suggestion: str) -> str:
            refine_prompt = self._render(
                IR_REFINE, {"old_c": caption, "mod_c_suggestion": suggestion}
            )
            refined = self._chat(refine_prompt, f"{tagbase}.refine", self.gen_params)
            return self._fit_caption(refined, f"{tagbase}.refine", flags)

        try:
            caption = self._fit_caption(temp_caption, f"{tagbase}.init", flags)
        except CaptionTooLongError as exc:
            raise StageError(
                Stage.IR.value, exc,
                RefinementTrace(Stage.IR, (), Termination.BUDGET_EXHAUSTED, flags=("aborted",)),
            ) from exc

        ctx = StageContext(history=tuple(history), question=question, answer=answer)
        caption, trace = refine(caption, Stage.IR, ctx, self.policy.k_ir, evaluate, apply)

        # The final caption always gets its own image: either the critic
        # accepted the last generated one, or the budget ran out right after
        # a refinement (or k_ir is zero) and the refined caption still needs
        # rendering. One generation per caption version, no regenerations.
        if len(images) == trace.refinement_count:
            ensure_image(caption)

        trace = dataclasses.replace(trace, flags=trace.flags + tuple(flags))
        return caption, images[-1], trace

    # -- one full turn ---------------------------------------------------------

    def run_turn(
        self,
        topic: TopicPath,
        template: QuestionTemplate,
        history: Sequence[Turn] = (),
        turn: int = 1,
    ) -> Turn:
        question, qr_trace = self.run_qr(template, topic, history, turn)
        answer, temp_caption, ar_trace = self.run_ar(question, history, turn)
        final_caption, image_ref, ir_trace = self.run_ir(
            question, answer, temp_caption, history, turn
        )
        return Turn(
            index=turn,
            question=question,
            answer=answer,
            temp_caption=temp_caption,
            final_caption=final_caption,
            image_ref=image_ref,
            traces={
                Stage.QR.value: qr_trace,
                Stage.AR.value: ar_trace,
                Stage.IR.value: ir_trace,
            },
        )
