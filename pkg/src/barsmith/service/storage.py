"""Document-store abstraction with in-memory and on-disk backends.

The on-disk layout is one JSON document per entity plus raw MIDI blobs;
anything with the same interface (a real document database included) can be
swapped in behind `DocumentStore`.
"""

from __future__ import annotations

import json
import os
import threading
from abc import ABC, abstractmethod
from pathlib import Path

from ..errors import StorageError

COLLECTIONS = ("sessions", "batches", "outputs")


class DocumentStore(ABC):
    @abstractmethod
    def put(self, collection: str, entity_id: str, doc: dict) -> None: ...

    @abstractmethod
    def get(self, collection: str, entity_id: str) -> dict | None: ...

    @abstractmethod
    def ids(self, collection: str) -> list[str]: ...

    @abstractmethod
    def put_blob(self, name: str, data: bytes) -> None: ...

    @abstractmethod
    def get_blob(self, name: str) -> bytes | None: ...


class MemoryDocumentStore(DocumentStore):
    def __init__(self):
        self._docs: dict[str, dict[str, dict]] = {c: {} for c in COLLECTIONS}
        self._blobs: dict[str, bytes] = {}
        self._lock = threading.Lock()

    def put(self, collection: str, entity_id: str, doc: dict) -> None:
        with self._lock:
            self._docs[collection][entity_id] = json.loads(json.dumps(doc))

    def get(self, collection: str, entity_id: str) -> dict | None:
        with self._lock:
            doc = self._docs[collection].get(entity_id)
            return json.loads(json.dumps(doc)) if doc is not None else None

    def ids(self, collection: str) -> list[str]:
        with self._lock:
            return sorted(self._docs[collection])

    def put_blob(self, name: str, data: bytes) -> None:
        with self._lock:
            self._blobs[name] = bytes(data)

    def get_blob(self, name: str) -> bytes | None:
        with self._lock:
            return self._blobs.get(name)


class DiskDocumentStore(DocumentStore):
    """One JSON file per document; writes are atomic (tmp file + rename)."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            for collection in COLLECTIONS:
                (self.root / collection).mkdir(parents=True, exist_ok=True)
            (self.root / "blobs").mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot prepare storage root {root}: {exc}") from exc

    def _doc_path(self, collection: str, entity_id: str) -> Path:
        if collection not in COLLECTIONS:
            raise StorageError(f"unknown collection {collection!r}")
        safe = entity_id.replace("/", "_")
        return self.root / collection / f"{safe}.json"

    def _write_atomic(self, path: Path, data: bytes) -> None:
        tmp = path.with_suffix(".tmp")
        try:
            tmp.write_bytes(data)
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageError(f"write failed for {path}: {exc}") from exc

    def put(self, collection: str, entity_id: str, doc: dict) -> None:
        payload = json.dumps(doc, indent=1).encode()
        self._write_atomic(self._doc_path(collection, entity_id), payload)

    def get(self, collection: str, entity_id: str) -> dict | None:
        path = self._doc_path(collection, entity_id)
        try:
            return json.loads(path.read_text())
        except FileNotFoundError:
            return None
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageError(f"read failed for {path}: {exc}") from exc

    def ids(self, collection: str) -> list[str]:
        if collection not in COLLECTIONS:
            raise StorageError(f"unknown collection {collection!r}")
        return sorted(p.stem for p in (self.root / collection).glob("*.json"))

    def put_blob(self, name: str, data: bytes) -> None:
        self._write_atomic(self.root / "blobs" / name.replace("/", "_"), data)

    def get_blob(self, name: str) -> bytes | None:
        path = self.root / "blobs" / name.replace("/", "_")
        try:
            return path.read_bytes()
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise StorageError(f"read failed for {path}: {exc}") from exc


def open_store(storage_root: str | None) -> DocumentStore:
    if storage_root:
        return DiskDocumentStore(storage_root)
    return MemoryDocumentStore()
