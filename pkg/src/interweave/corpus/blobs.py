"""Content-addressed blob store for generated images.

References are `sha256:<hex>` strings computed from the bytes, so a blob's
identity is independent of where it is stored, repeated puts are idempotent,
and refined images that happen to be identical dedupe for free.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

from ..errors import ImageUnresolvableError

REF_PREFIX = "sha256:"


def blob_ref(data: bytes) -> str:
    return REF_PREFIX + hashlib.sha256(data).hexdigest()


class BlobStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, ref: str) -> Path:
        if not ref.startswith(REF_PREFIX):
            raise ImageUnresolvableError(ref)
        digest = ref[len(REF_PREFIX):]
        if not digest or any(c not in "0123456789abcdef" for c in digest):
            raise ImageUnresolvableError(ref)
        return self.root / digest

    def put(self, data: bytes) -> str:
        ref = blob_ref(data)
        path = self._path(ref)
        if not path.exists():
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, path)
        return ref

    def get(self, ref: str) -> bytes:
        path = self._path(ref)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise ImageUnresolvableError(ref) from None

    def exists(self, ref: str) -> bool:
        try:
            return self._path(ref).exists()
        except ImageUnresolvableError:
            return False

    def refs(self) -> list[str]:
        return sorted(REF_PREFIX + p.name for p in self.root.iterdir() if not p.name.endswith(".tmp"))
