"""Question template registry and seeded work-item sampling."""

from __future__ import annotations

import hashlib
import random
from importlib import resources
from pathlib import Path
from typing import Sequence

from ..errors import EmptyRegistryError
from ..model import QuestionTemplate, TopicPath
from .hierarchy import TopicHierarchy


def templates_from_lines(lines: Sequence[str]) -> tuple[QuestionTemplate, ...]:
    templates = []
    for line in lines:
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        templates.append(QuestionTemplate(id=f"tmpl-{len(templates):03d}", pattern=text))
    return tuple(templates)


def load_templates(path: str | Path) -> tuple[QuestionTemplate, ...]:
    with open(path, encoding="utf-8") as handle:
        return templates_from_lines(handle.readlines())


def packaged_templates() -> tuple[QuestionTemplate, ...]:
    ref = resources.files(__package__).joinpath("fixtures/question_templates.txt")
    return templates_from_lines(ref.read_text(encoding="utf-8").splitlines())


def derive_seed(master_seed: int, *parts) -> int:
    """Stable child seed from a master seed and a structured key.

    Hash-derived rather than sequential so any work item can be regenerated
    in isolation (resume, spot-checks) without replaying the whole stream.
    """
    key = ":".join([str(master_seed), *map(str, parts)])
    return int.from_bytes(hashlib.sha256(key.encode("utf-8")).digest()[:8], "big")


class WorkSampler:
    """Uniform, seed-deterministic draws of (topic leaf, question template)."""

    def __init__(self, hierarchy: TopicHierarchy, templates: Sequence[QuestionTemplate], seed: int):
        self.leaves = hierarchy.leaves()
        self.templates = tuple(templates)
        if not self.leaves or not self.templates:
            raise EmptyRegistryError("both topic and template registries must be non-empty")
        self.seed = seed

    def draw(self, index: int) -> tuple[TopicPath, QuestionTemplate]:
        """The index-th work item; a pure function of (seed, index)."""
        rng = random.Random(derive_seed(self.seed, "work", index))
        return rng.choice(self.leaves), rng.choice(self.templates)

    def template_for_turn(self, index: int, turn: int) -> QuestionTemplate:
        """Fresh template per follow-up turn, same determinism contract."""
        rng = random.Random(derive_seed(self.seed, "turn-template", index, turn))
        return rng.choice(self.templates)


def sample_work_item(
    hierarchy: TopicHierarchy,
    templates: Sequence[QuestionTemplate],
    rng_seed: int,
    index: int = 0,
) -> tuple[TopicPath, QuestionTemplate]:
    return WorkSampler(hierarchy, templates, rng_seed).draw(index)
