"""Dataset persistence: one conversation per JSONL line plus a run manifest.

The writer appends line-atomically (single write + flush + fsync per
record) and repairs a torn final line left by a crash before appending
again, so earlier records are never corrupted.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Mapping

from ..model import Conversation, dumps_canonical


@dataclass(frozen=True)
class DatasetRecord:
    """A conversation plus the provenance needed to regenerate it."""

    conversation: Conversation
    run_id: str
    conv_index: int
    seed: int
    models: Mapping[str, str]  # role -> model name
    policy: Mapping[str, int]  # stage -> iteration cap

    def as_dict(self) -> dict[str, Any]:
        return {
            "conversation": self.conversation.as_dict(),
            "provenance": {
                "run_id": self.run_id,
                "conv_index": self.conv_index,
                "seed": self.seed,
                "models": dict(self.models),
                "policy": dict(self.policy),
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DatasetRecord":
        prov = data["provenance"]
        return cls(
            conversation=Conversation.from_dict(data["conversation"]),
            run_id=prov["run_id"],
            conv_index=prov["conv_index"],
            seed=prov["seed"],
            models=prov["models"],
            policy=prov["policy"],
        )


def repair_trailing_partial_line(path: Path) -> bool:
    """Drop a torn final line (no trailing newline) after a crash."""
    if not path.exists():
        return False
    data = path.read_bytes()
    if not data or data.endswith(b"\n"):
        return False
    cut = data.rfind(b"\n")
    with open(path, "r+b") as handle:
        handle.truncate(cut + 1 if cut >= 0 else 0)
    return True


class DatasetWriter:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        repair_trailing_partial_line(self.path)
        self._handle = open(self.path, "a", encoding="utf-8")

    def append(self, record: DatasetRecord | Mapping[str, Any]) -> None:
        payload = record.as_dict() if isinstance(record, DatasetRecord) else record
        self._handle.write(dumps_canonical(payload) + "\n")
        self._handle.flush()
        os.fsync(self._handle.fileno())

    def close(self) -> None:
        self._handle.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_dataset(path: str | Path) -> Iterator[DatasetRecord]:
    for raw in iter_dataset_dicts(path):
        yield DatasetRecord.from_dict(raw)


def iter_dataset_dicts(path: str | Path) -> Iterator[dict]:
    path = Path(path)
    if not path.exists():
        return
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().split("\n")
    # A torn final line (crash mid-append) is skipped; anything malformed
    # earlier is a real error.
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError:
            if i == len(lines) - 1:
                return
            raise


def write_json_atomic(path: str | Path, payload: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False), encoding="utf-8")
    os.replace(tmp, path)
