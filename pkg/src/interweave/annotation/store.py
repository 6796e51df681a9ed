"""Annotation task store: assignment, dual scoring, discussion, export.

State machine per task:

    PENDING -> SCORED* -> RESOLVED            (all assignees agree exactly)
                       -> IN_DISCUSSION -> RESOLVED   (any disagreement)

Every mutation appends one event to a JSONL log and the full state is
rebuilt by replaying it on startup, which keeps the discussion protocol
auditable and the service crash-safe. Short-lived scoring leases (kept in
memory only) stop two annotators from being handed the same task at the
same moment.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from ..errors import (
    AlreadyResolvedError,
    InvalidTaskStateError,
    NotAssignedError,
    NotInDiscussionError,
    UnknownAnnotatorError,
)
from ..judging import GeneratorOutput
from ..model import JudgeKind, ScoreRecord, ScoreVector


class TaskState(str, Enum):
    PENDING = "pending"
    SCORED = "scored"
    IN_DISCUSSION = "in_discussion"
    RESOLVED = "resolved"


@dataclass
class AnnotationTask:
    task_id: str
    sample: GeneratorOutput
    assigned_to: tuple[str, ...]
    state: TaskState = TaskState.PENDING
    scores: dict[str, ScoreVector] = field(default_factory=dict)
    final: ScoreVector | None = None
    resolved_by: tuple[str, ...] = ()
    resolved_at: str | None = None


class AnnotationStore:
    def __init__(
        self,
        event_log_path: str | Path,
        annotators: Iterable[str],
        assignees_per_task: int = 2,
        lease_ttl_s: float = 600.0,
        clock=time.monotonic,
        wall_clock=None,
    ):
        if assignees_per_task < 1:
            raise ValueError("assignees_per_task must be at least 1")
        self.event_log_path = Path(event_log_path)
        self.event_log_path.parent.mkdir(parents=True, exist_ok=True)
        self.annotators = tuple(annotators)
        self.assignees_per_task = assignees_per_task
        self.lease_ttl_s = lease_ttl_s
        self.clock = clock
        self.wall_clock = wall_clock or (lambda: time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()))
        self.tasks: dict[str, AnnotationTask] = {}
        self._order: list[str] = []
        self._leases: dict[str, tuple[str, float]] = {}  # task_id -> (annotator, expiry)
        self._lock = threading.RLock()
        self._replay()
        self._handle = open(self.event_log_path, "a", encoding="utf-8")

    # -- event log -------------------------------------------------------------

    def _replay(self) -> None:
        if not self.event_log_path.exists():
            return
        for line in self.event_log_path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                event = json.loads(line)
            except json.JSONDecodeError:
                continue  # torn final line
            self._apply(event)

    def _apply(self, event: dict) -> None:
        kind = event["event"]
        if kind == "task_created":
            sample = GeneratorOutput.from_dict(event["sample"])
            task = AnnotationTask(
                task_id=event["task_id"],
                sample=sample,
                assigned_to=tuple(event["assigned_to"]),
            )
            self.tasks[task.task_id] = task
            self._order.append(task.task_id)
        elif kind == "score_submitted":
            task = self.tasks[event["task_id"]]
            task.scores[event["annotator_id"]] = ScoreVector(**event["scores"])
            task.state = TaskState(event["state"])
            if event.get("final"):
                task.final = ScoreVector(**event["final"])
                task.resolved_by = task.assigned_to
        elif kind == "task_resolved":
            task = self.tasks[event["task_id"]]
            task.final = ScoreVector(**event["final"])
            task.resolved_by = tuple(event["resolver_ids"])
            task.state = TaskState.RESOLVED
        if event.get("final") and event.get("at"):
            self.tasks[event["task_id"]].resolved_at = event["at"]

    def _emit(self, event: dict) -> None:
        event = {**event, "at": self.wall_clock()}
        self._apply(event)
        self._handle.write(json.dumps(event, ensure_ascii=False) + "\n")
        self._handle.flush()

    # -- task loading ------------------------------------------------------------

    def load_tasks(self, samples: Iterable[GeneratorOutput]) -> int:
        """Create one task per sample, assigning annotators round-robin.
        Samples already known (by task id) are skipped, so reloading the
        same file after a restart is a no-op."""
        if not self.annotators:
            raise ValueError("no annotators registered")
        created = 0
        with self._lock:
            position = len(self._order)
            for sample in samples:
                task_id = f"task-{sample.sample_id}"
                if task_id in self.tasks:
                    continue
                n = len(self.annotators)
                assignees = tuple(
                    self.annotators[(position + offset) % n]
                    for offset in range(min(self.assignees_per_task, n))
                )
                self._emit(
                    {
                        "event": "task_created",
                        "task_id": task_id,
                        "sample": sample.as_dict(),
                        "assigned_to": list(assignees),
                    }
                )
                position += 1
                created += 1
        return created

    # -- workflow ---------------------------------------------------------------

    def _check_annotator(self, annotator_id: str) -> None:
        if annotator_id not in self.annotators:
            raise UnknownAnnotatorError(annotator_id)

    def _lease_holder(self, task_id: str) -> str | None:
        lease = self._leases.get(task_id)
        if lease is None:
            return None
        holder, expiry = lease
        if self.clock() >= expiry:
            del self._leases[task_id]
            return None
        return holder

    def next_task(self, annotator_id: str) -> AnnotationTask | None:
        """First task this annotator still has to score, leasing it so a
        concurrent poll by someone else gets a different task."""
        self._check_annotator(annotator_id)
        with self._lock:
            for task_id in self._order:
                task = self.tasks[task_id]
                if task.state in (TaskState.RESOLVED, TaskState.IN_DISCUSSION):
                    continue
                if annotator_id not in task.assigned_to or annotator_id in task.scores:
                    continue
                holder = self._lease_holder(task_id)
                if holder is not None and holder != annotator_id:
                    continue
                self._leases[task_id] = (annotator_id, self.clock() + self.lease_ttl_s)
                return task
        return None

    def submit_score(self, annotator_id: str, task_id: str, scores: ScoreVector) -> TaskState:
        self._check_annotator(annotator_id)
        with self._lock:
            task = self._get(task_id)
            if task.state is TaskState.RESOLVED:
                raise AlreadyResolvedError(task_id)
            if task.state is TaskState.IN_DISCUSSION:
                raise InvalidTaskStateError(task_id, task.state.value, "score")
            if annotator_id not in task.assigned_to:
                raise NotAssignedError(task_id, annotator_id)

            pending_scores = dict(task.scores)
            pending_scores[annotator_id] = scores
            if len(pending_scores) == len(task.assigned_to):
                vectors = set(v.as_tuple() for v in pending_scores.values())
                if len(vectors) == 1:
                    state, final = TaskState.RESOLVED, scores
                else:
                    state, final = TaskState.IN_DISCUSSION, None
            else:
                state, final = TaskState.SCORED, None

            self._emit(
                {
                    "event": "score_submitted",
                    "task_id": task_id,
                    "annotator_id": annotator_id,
                    "scores": scores.as_dict(),
                    "state": state.value,
                    "final": final.as_dict() if final else None,
                }
            )
            self._leases.pop(task_id, None)
            return state

    def resolve_discussion(
        self, task_id: str, final: ScoreVector, resolver_ids: Iterable[str]
    ) -> TaskState:
        resolver_ids = tuple(resolver_ids)
        with self._lock:
            task = self._get(task_id)
            if task.state is not TaskState.IN_DISCUSSION:
                raise NotInDiscussionError(task_id, task.state.value)
            missing = set(task.assigned_to) - set(resolver_ids)
            if missing:
                raise NotAssignedError(task_id, ",".join(sorted(missing)))
            self._emit(
                {
                    "event": "task_resolved",
                    "task_id": task_id,
                    "final": final.as_dict(),
                    "resolver_ids": list(resolver_ids),
                }
            )
            return TaskState.RESOLVED

    # -- queries / export ----------------------------------------------------------

    def _get(self, task_id: str) -> AnnotationTask:
        task = self.tasks.get(task_id)
        if task is None:
            raise KeyError(task_id)
        return task

    def get_task(self, task_id: str) -> AnnotationTask:
        with self._lock:
            return self._get(task_id)

    def list_tasks(self, state: TaskState | None = None) -> list[AnnotationTask]:
        with self._lock:
            tasks = [self.tasks[tid] for tid in self._order]
        if state is not None:
            tasks = [t for t in tasks if t.state is state]
        return tasks

    def counts(self) -> Mapping[str, int]:
        counts = {state.value: 0 for state in TaskState}
        for task in self.list_tasks():
            counts[task.state.value] += 1
        return counts

    def export_records(self, judge_id: str = "human-panel") -> list[ScoreRecord]:
        """One record per resolved task, deterministically ordered by sample."""
        with self._lock:
            resolved = [t for t in self.tasks.values() if t.state is TaskState.RESOLVED]
        return [
            ScoreRecord(
                sample_id=task.sample.sample_id,
                judge_id=judge_id,
                judge_kind=JudgeKind.HUMAN,
                scores=task.final,
                timestamp=task.resolved_at or "1970-01-01T00:00:00Z",
            )
            for task in sorted(resolved, key=lambda t: t.sample.sample_id)
        ]

    def close(self) -> None:
        self._handle.close()
