"""External-generator client: line-delimited JSON over a child's std streams.

Protocol (one JSON document per line):

  child -> parent, on start:   {"type": "hello", "name", "version",
                                "protocol_version": 1}
  parent -> child, per step:   {"type": "generate", "protocol_version": 1,
                                "seed", "temperature", "ppq", "bars",
                                "tracks", "cells", "targets", "constraints"}
  child -> parent, per step:   {"type": "result", "cells": {"t:b": [notes]}}
                               or {"type": "error", "message"}

`cells` in the request carries every window cell with its notes; entries for
target cells hold the pre-generation content. A step that exceeds the
timeout gets its child killed and surfaces as GeneratorFailure.
"""

from __future__ import annotations

import json
import queue
import shlex
import subprocess
import threading
from dataclasses import dataclass

import random

from ..errors import GeneratorFailure
from ..generation.generator import EffectiveTrackConstraints, WindowView
from ..midi.notes import NoteEvent
from ..score.docs import note_from_doc, note_to_doc
from ..score.piece import Cell

PROTOCOL_VERSION = 1


def cell_key(cell: Cell) -> str:
    return f"{cell[0]}:{cell[1]}"


def parse_cell_key(key: str) -> Cell:
    t, b = key.split(":")
    return (int(t), int(b))


def encode_request(
    window: WindowView,
    constraints: dict[int, EffectiveTrackConstraints],
    temperature: float,
    seed: int,
) -> dict:
    return {
        "type": "generate",
        "protocol_version": PROTOCOL_VERSION,
        "seed": seed,
        "temperature": temperature,
        "ppq": window.ppq,
        "bars": [
            {
                "index": b.index,
                "start": b.start,
                "end": b.end,
                "numerator": b.numerator,
                "denominator": b.denominator,
            }
            for b in window.bars
        ],
        "tracks": [
            {
                "index": i,
                "name": t.name,
                "channel": t.channel,
                "program": t.program,
                "is_percussion": t.is_percussion,
            }
            for i, t in enumerate(window.tracks)
        ],
        "cells": [
            {
                "track": t,
                "bar": b,
                "context": (t, b) in window.context_cells,
                "notes": [note_to_doc(n) for n in notes],
            }
            for (t, b), notes in sorted(window.notes.items())
        ],
        "targets": [list(c) for c in window.target_cells],
        "constraints": {
            str(i): {
                "program": c.program,
                "is_percussion": c.is_percussion,
                "density": c.density,
                "polyphony": list(c.polyphony),
                "duration_classes": [d.label for d in c.duration_classes],
                "duration_ticks": list(c.duration_ticks),
            }
            for i, c in constraints.items()
        },
    }


def decode_result(doc: dict) -> dict[Cell, list[NoteEvent]]:
    cells = doc.get("cells", {})
    return {
        parse_cell_key(key): [note_from_doc(n) for n in notes]
        for key, notes in cells.items()
    }


class _LineReader(threading.Thread):
    """Reads child stdout lines into a queue so reads can time out."""

    def __init__(self, pipe):
        super().__init__(daemon=True)
        self.pipe = pipe
        self.lines: queue.Queue[str | None] = queue.Queue()
        self.start()

    def run(self):
        try:
            for line in self.pipe:
                self.lines.put(line)
        except ValueError:
            pass  # pipe closed
        self.lines.put(None)

    def read(self, timeout: float) -> str | None:
        try:
            return self.lines.get(timeout=timeout)
        except queue.Empty:
            raise TimeoutError from None


class SubprocessGenerator:
    """One child process; exclusive to one step at a time."""

    def __init__(self, command: str, timeout: float = 120.0):
        self.command = command
        self.timeout = timeout
        self.name = "external"
        self.version = "?"
        self._lock = threading.Lock()
        self._process: subprocess.Popen | None = None
        self._reader: _LineReader | None = None

    def _ensure_started(self) -> None:
        if self._process is not None and self._process.poll() is None:
            return
        self._process = subprocess.Popen(
            shlex.split(self.command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self._reader = _LineReader(self._process.stdout)
        try:
            line = self._reader.read(self.timeout)
        except TimeoutError:
            self.kill()
            raise GeneratorFailure("generator handshake timed out")
        if line is None:
            self.kill()
            raise GeneratorFailure("generator exited before handshake")
        try:
            hello = json.loads(line)
        except json.JSONDecodeError as exc:
            self.kill()
            raise GeneratorFailure(f"bad handshake line: {exc}")
        if hello.get("type") != "hello":
            self.kill()
            raise GeneratorFailure(f"unexpected handshake {hello!r}")
        if hello.get("protocol_version") != PROTOCOL_VERSION:
            self.kill()
            raise GeneratorFailure(
                f"protocol version mismatch: {hello.get('protocol_version')}"
            )
        self.name = str(hello.get("name", "external"))
        self.version = str(hello.get("version", "?"))

    def kill(self) -> None:
        process = self._process
        if process is not None and process.poll() is None:
            process.kill()
            process.wait()
        self._process = None
        self._reader = None

    def close(self) -> None:
        with self._lock:
            process = self._process
            if process is not None and process.poll() is None:
                try:
                    process.stdin.close()
                    process.wait(timeout=2)
                except (OSError, subprocess.TimeoutExpired):
                    process.kill()
            self._process = None
            self._reader = None

    def generate_cells(
        self,
        window: WindowView,
        constraints: dict[int, EffectiveTrackConstraints],
        temperature: float,
        rng: random.Random,
    ) -> dict[Cell, list[NoteEvent]]:
        seed = rng.getrandbits(64)
        request = encode_request(window, constraints, temperature, seed)
        with self._lock:
            self._ensure_started()
            process = self._process
            assert process is not None and self._reader is not None
            try:
                process.stdin.write(json.dumps(request) + "\n")
                process.stdin.flush()
            except (OSError, BrokenPipeError) as exc:
                self.kill()
                raise GeneratorFailure(f"generator pipe broke: {exc}")
            try:
                line = self._reader.read(self.timeout)
            except TimeoutError:
                self.kill()
                raise GeneratorFailure(
                    f"generator timed out after {self.timeout:.0f} s"
                )
            if line is None:
                self.kill()
                raise GeneratorFailure("generator process died mid-step")
            try:
                response = json.loads(line)
            except json.JSONDecodeError as exc:
                self.kill()
                raise GeneratorFailure(f"bad generator response: {exc}")
        if response.get("type") == "error":
            raise GeneratorFailure(str(response.get("message", "unknown error")))
        if response.get("type") != "result":
            raise GeneratorFailure(f"unexpected response {response.get('type')!r}")
        return decode_result(response)


@dataclass
class _PoolSlot:
    generator: SubprocessGenerator
    busy: bool = False


class SubprocessGeneratorPool:
    """Generator facade over N exclusive child processes."""

    name = "external-pool"
    version = "?"

    def __init__(self, command: str, size: int = 1, timeout: float = 120.0):
        self._slots = [
            _PoolSlot(SubprocessGenerator(command, timeout)) for _ in range(max(1, size))
        ]
        self._available = threading.Semaphore(max(1, size))
        self._lock = threading.Lock()

    def _acquire(self) -> _PoolSlot:
        self._available.acquire()
        with self._lock:
            for slot in self._slots:
                if not slot.busy:
                    slot.busy = True
                    return slot
        raise GeneratorFailure("pool accounting error")  # pragma: no cover

    def _release(self, slot: _PoolSlot) -> None:
        with self._lock:
            slot.busy = False
        self._available.release()

    def generate_cells(self, window, constraints, temperature, rng):
        slot = self._acquire()
        try:
            return slot.generator.generate_cells(window, constraints, temperature, rng)
        finally:
            self._release(slot)

    def close(self) -> None:
        for slot in self._slots:
            slot.generator.close()
