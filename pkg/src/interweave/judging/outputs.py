"""Generator outputs: the samples a judge scores."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

from ..model import dumps_canonical, iter_jsonl


@dataclass(frozen=True)
class GeneratorOutput:
    """One generator response to one benchmark question.

    Either modality may be absent ("null"); the judge prompt explicitly
    handles missing text or missing images.
    """

    sample_id: str
    question: str
    generator_id: str
    answer_text: str | None = None
    image_ref: str | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "sample_id": self.sample_id,
            "question": self.question,
            "generator_id": self.generator_id,
            "answer_text": self.answer_text,
            "image_ref": self.image_ref,
        }

    @classmethod
    def from_dict(cls, data) -> "GeneratorOutput":
        return cls(
            sample_id=data["sample_id"],
            question=data["question"],
            generator_id=data["generator_id"],
            answer_text=data.get("answer_text"),
            image_ref=data.get("image_ref"),
        )


def load_generator_outputs(path: str | Path) -> list[GeneratorOutput]:
    return [
        GeneratorOutput.from_dict(d) for d in iter_jsonl(Path(path).read_text(encoding="utf-8"))
    ]


def write_generator_outputs(outputs: Iterable[GeneratorOutput], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for output in outputs:
            handle.write(dumps_canonical(output.as_dict()) + "\n")
