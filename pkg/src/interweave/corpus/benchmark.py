"""Benchmark assembly and dataset splitting."""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Sequence, TypeVar

from ..errors import DuplicateNameError, InsufficientPoolError
from ..model import TopicPath, dumps_canonical, iter_jsonl

T = TypeVar("T")


class QuestionSource(str, Enum):
    HUMAN_AUTHORED = "human"
    PIPELINE_GENERATED = "generated"


@dataclass(frozen=True)
class BenchmarkQuestion:
    id: str
    text: str
    source: QuestionSource
    topic: TopicPath | None = None


@dataclass(frozen=True)
class BenchmarkSet:
    questions: tuple[BenchmarkQuestion, ...]

    def __post_init__(self):
        seen = set()
        for q in self.questions:
            if q.id in seen:
                raise DuplicateNameError(f"benchmark/{q.id}")
            seen.add(q.id)

    def source_counts(self) -> dict[str, int]:
        counts = {source.value: 0 for source in QuestionSource}
        for q in self.questions:
            counts[q.source.value] += 1
        return counts

    def __len__(self) -> int:
        return len(self.questions)


def _qid(source: QuestionSource, index: int, width: int = 4) -> str:
    return f"bench-{source.value}-{index:0{width}d}"


def assemble_benchmark(
    human_questions: Sequence[str],
    generated_pool: Sequence[str | tuple[str, TopicPath]],
    n_generated: int,
) -> BenchmarkSet:
    """Fixed evaluation suite: all curated human questions followed by the
    first `n_generated` pool questions, with stable ids in input order."""
    if len(generated_pool) < n_generated:
        raise InsufficientPoolError(len(generated_pool), n_generated)

    questions = [
        BenchmarkQuestion(_qid(QuestionSource.HUMAN_AUTHORED, i), text.strip(),
                          QuestionSource.HUMAN_AUTHORED)
        for i, text in enumerate(human_questions)
    ]
    for i, item in enumerate(generated_pool[:n_generated]):
        text, topic = item if isinstance(item, tuple) else (item, None)
        questions.append(
            BenchmarkQuestion(_qid(QuestionSource.PIPELINE_GENERATED, i), text.strip(),
                              QuestionSource.PIPELINE_GENERATED, topic)
        )
    return BenchmarkSet(tuple(questions))


def write_benchmark(benchmark: BenchmarkSet, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for q in benchmark.questions:
            payload: dict[str, Any] = {"id": q.id, "text": q.text, "source": q.source.value}
            if q.topic is not None:
                payload["topic"] = {
                    "domain": q.topic.domain,
                    "category": q.topic.category,
                    "topic": q.topic.topic,
                }
            handle.write(dumps_canonical(payload) + "\n")


def read_benchmark(path: str | Path) -> BenchmarkSet:
    questions = []
    for data in iter_jsonl(Path(path).read_text(encoding="utf-8")):
        topic = data.get("topic")
        questions.append(
            BenchmarkQuestion(
                id=data["id"],
                text=data["text"],
                source=QuestionSource(data["source"]),
                topic=TopicPath(topic["domain"], topic["category"], topic["topic"]) if topic else None,
            )
        )
    return BenchmarkSet(tuple(questions))


def split_records(records: Sequence[T], train_fraction: float, seed: int) -> tuple[list[T], list[T]]:
    """Disjoint, exhaustive, seed-deterministic split.

    Train size is round-half-up of N * fraction; membership comes from a
    seeded shuffle of the indices.
    """
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must be strictly between 0 and 1")
    indices = list(range(len(records)))
    random.Random(seed).shuffle(indices)
    n_train = int(len(records) * train_fraction + 0.5)
    train_idx = sorted(indices[:n_train])
    test_idx = sorted(indices[n_train:])
    return [records[i] for i in train_idx], [records[i] for i in test_idx]
