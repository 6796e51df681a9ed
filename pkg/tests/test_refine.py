from __future__ import annotations

import random

import pytest

from interweave.errors import StageError, TransportError
from interweave.model import Stage, Termination
from interweave.pipeline import StageContext, refine
from interweave.prompts import SuggestionOutcome


def scripted_evaluator(outcomes):
    queue = list(outcomes)

    def evaluate(x, ctx):
        return queue.pop(0)

    return evaluate


def suffix_apply(x, suggestion):
    return x + "+1"


ACCEPT = SuggestionOutcome.accept()
SUGGEST = SuggestionOutcome.suggest("improve it")


class TestRefineLoop:
    def test_immediate_accept(self):
        final, trace = refine("x0", Stage.QR, None, 3, scripted_evaluator([ACCEPT]), suffix_apply)
        assert final == "x0"
        assert trace.refinement_count == 0
        assert trace.termination is Termination.EVALUATOR_ACCEPTED

    def test_budget_cap(self):
        final, trace = refine(
            "x0", Stage.QR, None, 3,
            scripted_evaluator([SUGGEST, SUGGEST, SUGGEST, SUGGEST]), suffix_apply,
        )
        assert final == "x0+1+1+1"
        assert trace.refinement_count == 3
        assert trace.termination is Termination.BUDGET_EXHAUSTED

    def test_suggest_then_accept(self):
        final, trace = refine(
            "x0", Stage.AR, None, 3, scripted_evaluator([SUGGEST, ACCEPT]), suffix_apply
        )
        assert final == "x0+1"
        assert trace.refinement_count == 1
        assert trace.steps[0].input_snapshot == "x0"
        assert trace.steps[0].output_snapshot == "x0+1"
        assert trace.termination is Termination.EVALUATOR_ACCEPTED

    def test_zero_budget_never_evaluates(self):
        def explode(x, ctx):
            raise AssertionError("evaluator must not run with k_max=0")

        final, trace = refine("x0", Stage.IR, None, 0, explode, suffix_apply)
        assert final == "x0"
        assert trace.refinement_count == 0
        assert trace.termination is Termination.BUDGET_EXHAUSTED

    def test_error_carries_partial_trace(self):
        outcomes = [SUGGEST, TransportError("backend down")]

        def evaluate(x, ctx):
            item = outcomes.pop(0)
            if isinstance(item, Exception):
                raise item
            return item

        with pytest.raises(StageError) as err:
            refine("x0", Stage.QR, None, 5, evaluate, suffix_apply)
        assert err.value.trace.refinement_count == 1
        assert "aborted" in err.value.trace.flags

    def test_context_passed_through(self):
        seen = []

        def evaluate(x, ctx):
            seen.append(ctx)
            return ACCEPT

        ctx = StageContext(topic="t", question="q")
        refine("x", Stage.QR, ctx, 2, evaluate, suffix_apply)
        assert seen == [ctx]

    def test_randomized_scripts_contract(self):
        # The same property sweep the acceptance suite runs, kept here so a
        # regression localizes to the loop rather than the whole suite.
        rng = random.Random(1234)
        for _ in range(200):
            k_max = rng.randint(0, 5)
            script = [rng.random() < 0.4 for _ in range(10)]  # True = accept
            outcomes = [ACCEPT if accept else SUGGEST for accept in script]
            consumed = []

            def evaluate(x, ctx):
                consumed.append(True)
                return outcomes[len(consumed) - 1]

            final, trace = refine("s", Stage.IR, None, k_max, evaluate, suffix_apply)
            first_accept = script.index(True) if True in script else None

            assert trace.refinement_count <= k_max
            if first_accept is not None and first_accept < k_max:
                # stops at the first accept
                assert trace.termination is Termination.EVALUATOR_ACCEPTED
                assert trace.refinement_count == first_accept
                assert len(consumed) == first_accept + 1
            else:
                assert trace.termination is Termination.BUDGET_EXHAUSTED
                assert trace.refinement_count == k_max
                assert len(consumed) == k_max
            assert final == "s" + "+1" * trace.refinement_count
