"""Generic iterative refinement operator.

One loop shape serves every stage: evaluate the current content against
its context; stop on the accept sentinel; otherwise apply the suggestion
and repeat, up to `k_max` applied refinements. On budget exhaustion the
last candidate is kept, never rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

from ..errors import InterweaveError, StageError
from ..model import RefinementStep, RefinementTrace, Stage, Termination
from ..prompts import SuggestionOutcome


@dataclass(frozen=True)
class RefinementPolicy:
    """Per-stage caps on applied refinements."""

    k_qr: int = 3
    k_ar: int = 3
    k_ir: int = 3

    def __post_init__(self):
        for name in ("k_qr", "k_ar", "k_ir"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def cap(self, stage: Stage) -> int:
        return {Stage.QR: self.k_qr, Stage.AR: self.k_ar, Stage.IR: self.k_ir}[stage]

    def as_dict(self) -> dict[str, int]:
        return {"qr": self.k_qr, "ar": self.k_ar, "ir": self.k_ir}


@dataclass(frozen=True)
class StageContext:
    """Inputs a stage evaluator judges against (varies by stage)."""

    topic: Any = None
    template: Any = None
    history: Sequence = ()
    question: str | None = None
    answer: str | None = None


def refine(
    x0: Any,
    stage: Stage,
    ctx: StageContext | None,
    k_max: int,
    evaluate: Callable[[Any, StageContext | None], SuggestionOutcome],
    apply: Callable[[Any, str], Any],
    snapshot: Callable[[Any], str] = str,
) -> tuple[Any, RefinementTrace]:
    """Run the evaluate/apply loop and record each applied refinement.

    With k_max = 0 no evaluation happens at all; otherwise the loop stops at
    the first accept or once k_max suggestions have been applied (a trailing
    evaluation after the last allowed refinement is never issued). Backend
    and parse failures propagate as StageError with the partial trace, whose
    flags mark it aborted.
    """
    x = x0
    steps: list[RefinementStep] = []
    termination = Termination.BUDGET_EXHAUSTED
    try:
        for _ in range(k_max):
            outcome = evaluate(x, ctx)
            if outcome.accepted:
                termination = Termination.EVALUATOR_ACCEPTED
                break
            refined = apply(x, outcome.text)
            steps.append(RefinementStep(snapshot(x), outcome.text, snapshot(refined)))
            x = refined
    except InterweaveError as exc:
        partial = RefinementTrace(
            stage, tuple(steps), Termination.BUDGET_EXHAUSTED, flags=("aborted",)
        )
        raise StageError(stage.value, exc, partial) from exc
    return x, RefinementTrace(stage, tuple(steps), termination)
