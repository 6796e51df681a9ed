from .harness import JudgeHarness, JudgeRunResult, render_judge_payload
from .outputs import GeneratorOutput, load_generator_outputs, write_generator_outputs

__all__ = [
    "GeneratorOutput",
    "JudgeHarness",
    "JudgeRunResult",
    "load_generator_outputs",
    "render_judge_payload",
    "write_generator_outputs",
]
