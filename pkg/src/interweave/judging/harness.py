"""Drive a chat backend as a four-dimension judge over generator outputs.

Each sample is judged independently (no chat history carries across
samples). The rendered prompt wraps the Q&A payload in <chatbegin> /
<chatend> delimiters; a missing modality is rendered as the literal string
"null". Score parsing gets one automatic re-prompt before the sample is
recorded as failed. Progress is checkpointed per sample, so a killed run
resumes where it stopped and never re-judges completed samples.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

from ..backends import BackendProfile, BackendRole, ChatExchange, ChatPart, Gateway, GenParams
from ..errors import FormatError, InterweaveError
from ..model import JudgeKind, ScoreRecord
from ..prompts import JUDGE_SCORE, PromptCatalog, parse_judge_scores, rubric_text
from .outputs import GeneratorOutput


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def render_judge_payload(output: GeneratorOutput) -> str:
    answer = output.answer_text if output.answer_text is not None else "null"
    image = "(image attached)" if output.image_ref is not None else "null"
    return (
        "<chatbegin>\n"
        f"Question: {output.question}\n"
        f"Answer text: {answer}\n"
        f"Answer image: {image}\n"
        "<chatend>"
    )


@dataclass
class JudgeRunResult:
    records: list[ScoreRecord] = field(default_factory=list)
    failures: dict[str, str] = field(default_factory=dict)
    skipped_resume: int = 0
    diagnostics: list[str] = field(default_factory=list)

    def report(self) -> dict:
        return {
            "scored": len(self.records),
            "failed": len(self.failures),
            "skipped_resume": self.skipped_resume,
            "diagnostics": list(self.diagnostics),
        }


class JudgeHarness:
    def __init__(
        self,
        gateway: Gateway,
        judge: BackendProfile,
        catalog: PromptCatalog | None = None,
        params: GenParams | None = None,
        clock: Callable[[], str] = _utc_now_iso,
    ):
        self.gateway = gateway
        self.judge = judge
        self.catalog = catalog or PromptCatalog()
        self.params = params or GenParams(temperature=0.0)
        self.clock = clock

    def _exchange(self, output: GeneratorOutput, tag: str) -> ChatExchange:
        prompt = self.catalog.render(
            JUDGE_SCORE, {"rubric": rubric_text(), "payload": render_judge_payload(output)}
        )
        parts: list[ChatPart] = [ChatPart(text=prompt)]
        if output.image_ref is not None and self.judge.role is BackendRole.VLM:
            parts.append(ChatPart(image_ref=output.image_ref))
        return ChatExchange(user_parts=tuple(parts), params=self.params, tag=tag)

    def judge_sample(self, output: GeneratorOutput) -> ScoreRecord:
        tag = f"judge.{output.sample_id}"
        raw = self.gateway.complete_text(self.judge, self._exchange(output, tag))
        try:
            scores = parse_judge_scores(raw)
        except FormatError:
            raw = self.gateway.complete_text(self.judge, self._exchange(output, f"{tag}.retry"))
            scores = parse_judge_scores(raw)
        return ScoreRecord(
            sample_id=output.sample_id,
            judge_id=self.judge.model_name,
            judge_kind=JudgeKind.MODEL,
            scores=scores,
            timestamp=self.clock(),
        )

    def judge_run(
        self,
        outputs: Sequence[GeneratorOutput],
        concurrency: int = 1,
        checkpoint_path: str | Path | None = None,
        retry_failures: bool = False,
    ) -> JudgeRunResult:
        result = JudgeRunResult()
        checkpoint = _Checkpoint(checkpoint_path) if checkpoint_path else None

        todo: list[GeneratorOutput] = []
        for output in outputs:
            entry = checkpoint.lookup(output.sample_id) if checkpoint else None
            if entry is None or (retry_failures and not entry["ok"]):
                todo.append(output)
                continue
            result.skipped_resume += 1
            if entry["ok"]:
                result.records.append(ScoreRecord.from_dict(entry["record"]))
            else:
                result.failures[output.sample_id] = entry["error"]

        lock = threading.Lock()

        def work(output: GeneratorOutput) -> None:
            try:
                record = self.judge_sample(output)
            except InterweaveError as exc:
                with lock:
                    result.failures[output.sample_id] = str(exc)
                    if checkpoint:
                        checkpoint.append(
                            {"sample_id": output.sample_id, "ok": False, "error": str(exc)}
                        )
                return
            with lock:
                result.records.append(record)
                if checkpoint:
                    checkpoint.append(
                        {"sample_id": output.sample_id, "ok": True, "record": record.as_dict()}
                    )
                if output.image_ref is None and record.scores.icc > 0:
                    result.diagnostics.append(
                        f"{output.sample_id}: judge scored ICC={record.scores.icc} "
                        "with no image in the sample"
                    )

        if concurrency <= 1:
            for output in todo:
                work(output)
        else:
            with ThreadPoolExecutor(max_workers=concurrency) as pool:
                list(pool.map(work, todo))

        result.records.sort(key=lambda r: r.sample_id)
        if checkpoint:
            checkpoint.close()
        return result


class _Checkpoint:
    """Append-only JSONL of per-sample outcomes keyed by sample_id."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._entries: dict[str, dict] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    continue  # torn final line from a crash
                self._entries[entry["sample_id"]] = entry
        self._handle = open(self.path, "a", encoding="utf-8")

    def lookup(self, sample_id: str) -> dict | None:
        return self._entries.get(sample_id)

    def append(self, entry: dict) -> None:
        self._entries[entry["sample_id"]] = entry
        self._handle.write(json.dumps(entry, ensure_ascii=False) + "\n")
        self._handle.flush()

    def close(self) -> None:
        self._handle.close()
