"""Single-file JSON snapshot store with a single-writer transactional contract.

All entity collections live in one JSON-serializable dict. Mutations go
through ``transaction()``, which serializes writers behind one lock and, for
file-backed stores, persists the whole state atomically (temp file + rename)
at commit. A failed commit rolls the in-memory state back to the snapshot
taken at transaction entry.

Memory-backed stores (``path=None``) skip snapshotting for speed; operations
are expected to validate before mutating, which the randomized-sequence
tests exercise.
"""

from __future__ import annotations

import copy
import json
import os
import threading
from contextlib import contextmanager
from pathlib import Path

from .errors import SchemaError, StoreIoError

SCHEMA_VERSION = 1

SNAPSHOT_NAME = "store.json"


def empty_state() -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "users": {},
        "credentials": {},
        "sessions": {},
        "questions": {},
        "level1": {},
        "level2": [],
        "comments": {},
        "votes": {},
        "manual_mappings": {},
        "unmapped_queue": {},
        "topics": {},
        "progress": {},
        "experiments": {},
        "assignments": {},
        "events": [],
    }


def canonical_bytes(state: dict) -> bytes:
    """Canonical snapshot encoding: sorted keys, fixed separators, UTF-8."""
    return (
        json.dumps(state, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"
    ).encode("utf-8")


class Store:
    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._lock = threading.RLock()
        self._depth = 0
        self._snapshot: dict | None = None
        if self.path is not None and self.path.exists():
            self.state = self._load_file(self.path)
        else:
            self.state = empty_state()

    @staticmethod
    def _load_file(path: Path) -> dict:
        try:
            raw = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StoreIoError(f"cannot read snapshot: {exc}") from exc
        try:
            state = json.loads(raw)
        except ValueError as exc:
            raise SchemaError(f"snapshot is not valid JSON: {exc}") from exc
        if not isinstance(state, dict):
            raise SchemaError("snapshot root must be an object")
        version = state.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}")
        return state

    @contextmanager
    def transaction(self):
        """Atomic mutation scope. Nested calls join the outermost transaction."""
        with self._lock:
            self._depth += 1
            if self._depth == 1 and self.path is not None:
                self._snapshot = copy.deepcopy(self.state)
            try:
                yield self.state
                if self._depth == 1:
                    self.persist()
            except BaseException:
                if self._depth == 1 and self._snapshot is not None:
                    self.state = self._snapshot
                raise
            finally:
                self._depth -= 1
                if self._depth == 0:
                    self._snapshot = None

    @contextmanager
    def read(self):
        """Read scope; serialized against writers so readers never see a
        half-applied transaction."""
        with self._lock:
            yield self.state

    def persist(self) -> None:
        """Write the canonical snapshot atomically (temp file, then rename)."""
        if self.path is None:
            return
        data = canonical_bytes(self.state)
        tmp = self.path.with_name(self.path.name + ".tmp")
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(tmp, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.path)
        except OSError as exc:
            raise StoreIoError(f"persist failed: {exc}") from exc
