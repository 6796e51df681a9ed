"""Resumable batch generation over a pool of worker threads.

Layout under the output directory:

    manifest.json   resolved run configuration (guards against mixed resumes)
    dataset.jsonl   one completed conversation record per line, in index order
    state/          per-conversation turn checkpoints while in flight
    blobs/          content-addressed images (owned by the caller's store)
    audit.jsonl     backend call journal (owned by the caller's gateway)

Records are appended strictly in conversation-index order, so a dataset
interrupted anywhere and resumed finishes byte-identical to an
uninterrupted run (scripted backends are stateless functions of seed and
request, which makes regenerating an in-flight conversation safe).
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from ..corpus import DatasetRecord, DatasetWriter, WorkSampler, iter_dataset_dicts, write_json_atomic
from ..errors import ManifestError
from ..model import Conversation, Stage, Turn
from .conversation import run_conversation
from .stages import RefinementPipeline


class RunInterrupted(Exception):
    """Signals an orderly stop: checkpoints stay, nothing is marked failed."""


@dataclass(frozen=True)
class GenerationConfig:
    run_id: str
    seed: int
    conversations: int
    turn_budget: int = 3
    workers: int = 1

    def snapshot(self, pipeline: RefinementPipeline) -> dict:
        return {
            "run_id": self.run_id,
            "seed": self.seed,
            "conversations": self.conversations,
            "turn_budget": self.turn_budget,
            "policy": pipeline.policy.as_dict(),
            "models": {
                "lm": pipeline.lm.model_name,
                "vlm": pipeline.vlm.model_name,
                "image": pipeline.image_gen.model_name,
            },
        }


@dataclass
class GenerationSummary:
    completed: int = 0
    failed: int = 0
    interrupted: bool = False
    mean_refinements: dict = field(default_factory=dict)
    dataset_path: str = ""

    def as_dict(self) -> dict:
        return {
            "completed": self.completed,
            "failed": self.failed,
            "interrupted": self.interrupted,
            "mean_refinements": self.mean_refinements,
            "dataset_path": self.dataset_path,
        }


class _OrderedDatasetWriter:
    """Buffers out-of-order completions; only ever appends index N when all
    indices below N are already on disk."""

    def __init__(self, path: Path, next_index: int, on_written=None):
        self.writer = DatasetWriter(path)
        self.next_index = next_index
        self.pending: dict[int, DatasetRecord] = {}
        self.on_written = on_written
        self._lock = threading.Lock()

    def submit(self, index: int, record: DatasetRecord) -> None:
        with self._lock:
            self.pending[index] = record
            while self.next_index in self.pending:
                rec = self.pending.pop(self.next_index)
                self.writer.append(rec)
                if self.on_written is not None:
                    self.on_written(self.next_index)
                self.next_index += 1

    def close(self) -> None:
        self.writer.close()


class GenerationRunner:
    def __init__(
        self,
        pipeline: RefinementPipeline,
        sampler: WorkSampler,
        config: GenerationConfig,
        output_dir: str | Path,
    ):
        self.pipeline = pipeline
        self.sampler = sampler
        self.config = config
        self.output_dir = Path(output_dir)
        self.dataset_path = self.output_dir / "dataset.jsonl"
        self.state_dir = self.output_dir / "state"
        self.manifest_path = self.output_dir / "manifest.json"

    # -- setup / resume -------------------------------------------------------

    def _check_manifest(self, force: bool) -> None:
        snapshot = self.config.snapshot(self.pipeline)
        if self.manifest_path.exists() and not force:
            existing = json.loads(self.manifest_path.read_text(encoding="utf-8"))
            if existing != snapshot:
                raise ManifestError(
                    f"output dir {self.output_dir} holds a run with a different "
                    "configuration; pass force=True to overwrite"
                )
        write_json_atomic(self.manifest_path, snapshot)

    def _done_indices(self) -> set[int]:
        done = set()
        for raw in iter_dataset_dicts(self.dataset_path):
            done.add(raw["provenance"]["conv_index"])
        return done

    def _state_path(self, index: int) -> Path:
        return self.state_dir / f"conv_{index:05d}.json"

    def _load_state(self, index: int) -> tuple[Turn, ...]:
        path = self._state_path(index)
        if not path.exists():
            return ()
        data = json.loads(path.read_text(encoding="utf-8"))
        return tuple(Turn.from_dict(t) for t in data["turns"])

    def _save_state(self, index: int, turns: Sequence[Turn]) -> None:
        write_json_atomic(self._state_path(index), {"turns": [t.as_dict() for t in turns]})

    # -- execution -------------------------------------------------------------

    def _generate_one(self, index: int) -> DatasetRecord:
        topic, template = self.sampler.draw(index)
        conversation = run_conversation(
            self.pipeline,
            topic=topic,
            template=template,
            turn_budget=self.config.turn_budget,
            conversation_id=f"{self.config.run_id}-{index:05d}",
            template_for_turn=lambda t: self.sampler.template_for_turn(index, t),
            on_turn=lambda turns: self._save_state(index, turns),
            initial_turns=self._load_state(index),
        )
        return DatasetRecord(
            conversation=conversation,
            run_id=self.config.run_id,
            conv_index=index,
            seed=self.config.seed,
            models=self.config.snapshot(self.pipeline)["models"],
            policy=self.pipeline.policy.as_dict(),
        )

    def run(self, force: bool = False) -> GenerationSummary:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self._check_manifest(force)

        done = self._done_indices()
        if done and max(done) + 1 != len(done):
            raise ManifestError("dataset file has index gaps; it was not written by this runner")
        todo = [i for i in range(self.config.conversations) if i not in done]

        writer = _OrderedDatasetWriter(
            self.dataset_path,
            next_index=len(done),
            on_written=lambda idx: self._state_path(idx).unlink(missing_ok=True),
        )
        interrupted = False

        def job(index: int) -> None:
            record = self._generate_one(index)
            writer.submit(index, record)

        try:
            if self.config.workers <= 1:
                for index in todo:
                    job(index)
            else:
                with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                    futures = {pool.submit(job, i): i for i in todo}
                    for future in futures:
                        future.result()
        except (RunInterrupted, KeyboardInterrupt):
            interrupted = True
        finally:
            writer.close()

        return self._summarize(interrupted)

    def _summarize(self, interrupted: bool) -> GenerationSummary:
        summary = GenerationSummary(interrupted=interrupted, dataset_path=str(self.dataset_path))
        totals = {stage.value: [0, 0] for stage in Stage}  # refinements, turns
        for raw in iter_dataset_dicts(self.dataset_path):
            conv = Conversation.from_dict(raw["conversation"])
            if conv.failure:
                summary.failed += 1
            else:
                summary.completed += 1
            for turn in conv.turns:
                for stage_name, trace in turn.traces.items():
                    totals[stage_name][0] += trace.refinement_count
                    totals[stage_name][1] += 1
        summary.mean_refinements = {
            stage: (counts[0] / counts[1] if counts[1] else 0.0)
            for stage, counts in totals.items()
        }
        return summary
