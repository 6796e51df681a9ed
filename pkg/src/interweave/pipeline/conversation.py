"""Multi-turn conversation generation on top of the stage pipeline."""

from __future__ import annotations

from typing import Callable, Sequence

from ..errors import StageError
from ..model import Conversation, QuestionTemplate, TopicPath, Turn
from .stages import RefinementPipeline


def run_conversation(
    pipeline: RefinementPipeline,
    topic: TopicPath,
    template: QuestionTemplate,
    turn_budget: int,
    conversation_id: str,
    template_for_turn: Callable[[int], QuestionTemplate] | None = None,
    on_turn: Callable[[Sequence[Turn]], None] | None = None,
    initial_turns: Sequence[Turn] = (),
) -> Conversation:
    """Generate turns 1..turn_budget, threading completed turns as history.

    Follow-up turns keep the topic and draw a fresh template via
    `template_for_turn`. `on_turn` fires after every completed turn (the
    runner uses it to checkpoint); `initial_turns` lets an interrupted
    conversation resume behind its last checkpoint. A stage failure stops
    the conversation; completed turns are kept and the failure is recorded
    on the returned value.
    """
    turns: list[Turn] = list(initial_turns)
    failure = None
    for index in range(len(turns) + 1, turn_budget + 1):
        turn_template = template
        if index > 1 and template_for_turn is not None:
            turn_template = template_for_turn(index)
        try:
            turn = pipeline.run_turn(topic, turn_template, history=tuple(turns), turn=index)
        except StageError as exc:
            failure = f"turn {index} {exc.stage} failed: {exc.cause}"
            break
        turns.append(turn)
        if on_turn is not None:
            on_turn(tuple(turns))

    return Conversation(
        id=conversation_id,
        topic=topic,
        template_id=template.id,
        turns=tuple(turns),
        turn_budget=turn_budget,
        failure=failure,
    )
