"""Deliver a schedule to a sink in real time, with clean stop semantics."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Protocol

from ..errors import FeatureUnavailable, SinkClosed
from .schedule import EventKind, ScheduledEvent


class EventSink(Protocol):
    def send(self, event: ScheduledEvent) -> None:
        """Deliver one event; raise SinkClosed if the sink is gone."""
        ...


@dataclass
class RecordingSink:
    """Test sink: records (wall-clock seconds, event) pairs."""

    records: list[tuple[float, ScheduledEvent]] = field(default_factory=list)

    def send(self, event: ScheduledEvent) -> None:
        self.records.append((time.monotonic(), event))


class MidiPortSink:
    """Optional OS MIDI output ("Barsmith Out"); needs python-rtmidi."""

    PORT_NAME = "Barsmith Out"

    def __init__(self):
        try:
            import rtmidi  # type: ignore
        except ImportError as exc:
            raise FeatureUnavailable(
                "OS MIDI output requires the python-rtmidi package"
            ) from exc
        self._out = rtmidi.MidiOut()
        self._out.open_virtual_port(self.PORT_NAME)

    def send(self, event: ScheduledEvent) -> None:
        status = {
            EventKind.NOTE_ON: 0x90,
            EventKind.NOTE_OFF: 0x80,
            EventKind.PROGRAM_CHANGE: 0xC0,
        }.get(event.kind)
        if status is None:
            return
        message = [status | event.channel, event.pitch]
        if event.kind is not EventKind.PROGRAM_CHANGE:
            message.append(event.velocity)
        self._out.send_message(message)


def stream(
    schedule: list[ScheduledEvent],
    sink: EventSink,
    stop: threading.Event | None = None,
    clock=time.monotonic,
    sleep=time.sleep,
) -> None:
    """Play a schedule against a sink.

    Events go out in order at their scheduled offsets from the start instant.
    On stop or sink closure, note-offs for every sounding note are flushed
    (best effort) so nothing is left stuck.
    """
    if stop is None:
        stop = threading.Event()
    start = clock()
    sounding: set[tuple[int, int]] = set()

    def flush_sounding() -> None:
        for channel, pitch in sorted(sounding):
            try:
                sink.send(ScheduledEvent(0.0, EventKind.NOTE_OFF, channel, pitch, 0))
            except SinkClosed:
                break
        sounding.clear()

    for event in schedule:
        if stop.is_set():
            flush_sounding()
            return
        target = start + event.at_ms / 1000.0
        while True:
            now = clock()
            if now >= target:
                break
            # event-wait until just before the deadline, then spin the
            # last 2 ms; scheduler wakeup latency alone can exceed the
            # delivery tolerance
            remaining = target - now
            if remaining > 0.002:
                if stop.wait(min(0.01, remaining - 0.002)):
                    flush_sounding()
                    return
        try:
            sink.send(event)
        except SinkClosed:
            flush_sounding()
            return
        if event.kind is EventKind.NOTE_ON:
            sounding.add((event.channel, event.pitch))
        elif event.kind is EventKind.NOTE_OFF:
            sounding.discard((event.channel, event.pitch))
    flush_sounding()


class Player:
    """One active playback per owner; starting a new one stops the previous."""

    def __init__(self):
        self._lock = threading.Lock()
        self._stop: threading.Event | None = None
        self._thread: threading.Thread | None = None

    def start(self, schedule: list[ScheduledEvent], sink: EventSink) -> None:
        with self._lock:
            self._halt_locked()
            stop = threading.Event()
            thread = threading.Thread(
                target=stream, args=(schedule, sink, stop), daemon=True
            )
            self._stop = stop
            self._thread = thread
            thread.start()

    def stop(self) -> None:
        with self._lock:
            self._halt_locked()

    def _halt_locked(self) -> None:
        if self._stop is not None:
            self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
        self._stop = None
        self._thread = None

    @property
    def playing(self) -> bool:
        thread = self._thread
        return thread is not None and thread.is_alive()
