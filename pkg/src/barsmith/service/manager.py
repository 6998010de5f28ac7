"""Session and batch orchestration behind the REST layer.

Per-session piece mutations are serialized by a session lock; batches run on
a thread pool and publish status transitions to the event bus. A failed
batch persists no outputs.
"""

from __future__ import annotations

import logging
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

from ..errors import (
    BatchNotFound,
    GeneratorFailure,
    OutputNotFound,
    SessionNotFound,
)
from ..generation.engine import generate
from ..generation.markov import ContextMarkovGenerator
from ..generation.params import GenerationRequest
from ..midi.smf import parse_smf, write_smf
from ..playback.schedule import schedule
from ..playback.stream import Player
from ..ranking.rank import rank_outputs
from ..score.docs import piece_from_doc, piece_to_doc
from ..score.piece import (
    Piece,
    add_track,
    delete_track,
    edit_track_metadata,
    piece_to_midifile,
    segment_bars,
)
from .config import AppConfig
from .events import EventBus
from .storage import DocumentStore, open_store
from .subprocess_gen import SubprocessGeneratorPool

logger = logging.getLogger(__name__)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _new_id() -> str:
    return uuid.uuid4().hex


class SessionService:
    def __init__(self, config: AppConfig | None = None, store: DocumentStore | None = None):
        self.config = config or AppConfig()
        self.store = store if store is not None else open_store(self.config.storage_root)
        self.events = EventBus()
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._players: dict[str, Player] = {}
        self._executor = ThreadPoolExecutor(
            max_workers=max(1, self.config.max_parallel_batches),
            thread_name_prefix="batch",
        )
        if self.config.generator_command:
            self.generator = SubprocessGeneratorPool(
                self.config.generator_command,
                size=self.config.generator_pool_size,
                timeout=self.config.step_timeout_seconds,
            )
        else:
            self.generator = ContextMarkovGenerator()

    def close(self) -> None:
        self._executor.shutdown(wait=True)
        for player in self._players.values():
            player.stop()
        closer = getattr(self.generator, "close", None)
        if closer:
            closer()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    # -- sessions -----------------------------------------------------------

    def create_session(self, midi_bytes: bytes, parent_output: str | None = None) -> dict:
        piece = segment_bars(parse_smf(midi_bytes))  # raises MidiError on bad input
        session_id = _new_id()
        self.store.put_blob(f"seed-{session_id}.mid", midi_bytes)
        doc = {
            "id": session_id,
            "created_at": _now(),
            "parent_output": parent_output,
            "piece": piece_to_doc(piece),
        }
        self.store.put("sessions", session_id, doc)
        return doc

    def get_session(self, session_id: str) -> dict:
        doc = self.store.get("sessions", session_id)
        if doc is None:
            raise SessionNotFound(session_id)
        return doc

    def session_piece(self, session_id: str) -> Piece:
        return piece_from_doc(self.get_session(session_id)["piece"])

    def _update_piece(self, session_id: str, piece: Piece) -> dict:
        doc = self.get_session(session_id)
        doc["piece"] = piece_to_doc(piece)
        self.store.put("sessions", session_id, doc)
        return doc

    # -- track edits --------------------------------------------------------

    def patch_track(self, session_id: str, index: int, **updates) -> dict:
        with self._lock_for(session_id):
            piece = edit_track_metadata(self.session_piece(session_id), index, **updates)
            return self._update_piece(session_id, piece)["piece"]

    def create_track(self, session_id: str, **fields) -> dict:
        with self._lock_for(session_id):
            piece = add_track(self.session_piece(session_id), **fields)
            return self._update_piece(session_id, piece)["piece"]

    def remove_track(self, session_id: str, index: int) -> dict:
        with self._lock_for(session_id):
            piece = delete_track(self.session_piece(session_id), index)
            return self._update_piece(session_id, piece)["piece"]

    # -- generation ---------------------------------------------------------

    def request_generation(self, session_id: str, request: GenerationRequest, request_doc: dict) -> dict:
        with self._lock_for(session_id):
            piece = self.session_piece(session_id)
            request.validate_against(piece)
            batch_id = _new_id()
            doc = {
                "id": batch_id,
                "session_id": session_id,
                "status": "pending",
                "created_at": _now(),
                "request": request_doc,
                "outputs": [],
                "timing_seconds": None,
                "error": None,
                "failed_step": None,
            }
            self.store.put("batches", batch_id, doc)
        self._executor.submit(self._run_batch, batch_id, session_id, request)
        return doc

    def _set_batch(self, batch_id: str, **updates) -> dict:
        doc = self.store.get("batches", batch_id)
        doc.update(updates)
        self.store.put("batches", batch_id, doc)
        self.events.publish(
            doc["session_id"],
            {"event": "batch", "batch_id": batch_id, "status": doc["status"]},
        )
        return doc

    def _run_batch(self, batch_id: str, session_id: str, request: GenerationRequest) -> None:
        started = time.monotonic()
        self._set_batch(batch_id, status="running")
        try:
            piece = self.session_piece(session_id)
            outputs = generate(request, piece, self.generator)
            candidates = []
            output_ids = []
            for item in outputs:
                output_id = _new_id()
                output_ids.append(output_id)
                candidates.append((output_id, item.piece))
            ranked = rank_outputs(piece, candidates)
            by_id = {e.output_id: e for e in ranked.entries}
            summaries = []
            for output_id, item in zip(output_ids, outputs):
                entry = by_id[output_id]
                self.store.put(
                    "outputs",
                    output_id,
                    {
                        "id": output_id,
                        "batch_id": batch_id,
                        "session_id": session_id,
                        "seed": item.seed,
                        "distance": entry.distance,
                        "rank": entry.rank,
                        "piece": piece_to_doc(item.piece),
                    },
                )
                summaries.append(
                    {
                        "id": output_id,
                        "seed": item.seed,
                        "distance": entry.distance,
                        "rank": entry.rank,
                    }
                )
            summaries.sort(key=lambda s: s["rank"])
            self._set_batch(
                batch_id,
                status="done",
                outputs=summaries,
                timing_seconds=time.monotonic() - started,
            )
        except Exception as exc:
            logger.exception("batch %s failed", batch_id)
            failed_step = exc.step_index if isinstance(exc, GeneratorFailure) else None
            self._set_batch(
                batch_id,
                status="failed",
                error=str(exc),
                failed_step=failed_step,
                timing_seconds=time.monotonic() - started,
            )

    def get_batch(self, batch_id: str) -> dict:
        doc = self.store.get("batches", batch_id)
        if doc is None:
            raise BatchNotFound(batch_id)
        return doc

    def get_ranking(self, batch_id: str, threshold: float | None = None) -> dict:
        doc = self.get_batch(batch_id)
        entries = [
            {"output_id": s["id"], "distance": s["distance"], "rank": s["rank"]}
            for s in doc["outputs"]
        ]
        if threshold is not None:
            entries = [e for e in entries if e["distance"] <= threshold]
        return {"batch_id": batch_id, "threshold": threshold, "entries": entries}

    # -- outputs ------------------------------------------------------------

    def get_output(self, output_id: str) -> dict:
        doc = self.store.get("outputs", output_id)
        if doc is None:
            raise OutputNotFound(output_id)
        return doc

    def promote_output(self, output_id: str) -> dict:
        output = self.get_output(output_id)
        midi = self.export_output_midi(output_id)
        return self.create_session(midi, parent_output=output_id)

    def export_output_midi(self, output_id: str) -> bytes:
        piece = piece_from_doc(self.get_output(output_id)["piece"])
        return write_smf(piece_to_midifile(piece))

    def export_session_midi(self, session_id: str) -> bytes:
        return write_smf(piece_to_midifile(self.session_piece(session_id)))

    # -- playback -----------------------------------------------------------

    def start_playback(
        self,
        session_id: str,
        tempo_override: int | None = None,
        output_id: str | None = None,
    ) -> int:
        if output_id is not None:
            piece = piece_from_doc(self.get_output(output_id)["piece"])
        else:
            piece = self.session_piece(session_id)
        events = schedule(piece, tempo_override)

        bus = self.events

        class BusSink:
            def send(self, event):
                bus.publish(session_id, {"event": "playback", **event.to_doc()})

        with self._lock_for(session_id):
            player = self._players.setdefault(session_id, Player())
            player.start(events, BusSink())
        return len(events)

    def stop_playback(self, session_id: str) -> None:
        player = self._players.get(session_id)
        if player is not None:
            player.stop()
