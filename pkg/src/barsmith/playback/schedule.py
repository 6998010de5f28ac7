"""Turn a piece into a millisecond-timed event schedule."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..midi.timing import tick_to_seconds
from ..score.instruments import PERCUSSION_CHANNEL
from ..score.piece import Piece


class EventKind(str, Enum):
    NOTE_ON = "note_on"
    NOTE_OFF = "note_off"
    PROGRAM_CHANGE = "program_change"
    END = "end"


@dataclass(frozen=True)
class ScheduledEvent:
    at_ms: float
    kind: EventKind
    channel: int = 0
    pitch: int = 0  # carries the GM program for PROGRAM_CHANGE events
    velocity: int = 0

    def to_doc(self) -> dict:
        return {
            "at_ms": round(self.at_ms, 3),
            "kind": self.kind.value,
            "channel": self.channel,
            "pitch": self.pitch,
            "velocity": self.velocity,
        }


_KIND_ORDER = {
    EventKind.PROGRAM_CHANGE: 0,
    EventKind.NOTE_OFF: 1,
    EventKind.NOTE_ON: 2,
    EventKind.END: 3,
}


def schedule(piece: Piece, tempo_override: int | None = None) -> list[ScheduledEvent]:
    """Pure schedule computation.

    Timing integrates the piece's tempo map, or is linear at `tempo_override`
    BPM when given. Program changes for every track are emitted at time zero;
    note-offs precede note-ons at equal times; the final event is END.
    """

    def to_ms(tick: int) -> float:
        if tempo_override is not None:
            return tick / piece.ppq * 60_000.0 / tempo_override
        return tick_to_seconds(piece.tempo_map, tick, piece.ppq) * 1000.0

    events: list[ScheduledEvent] = []
    for track in piece.tracks:
        channel = PERCUSSION_CHANNEL if track.is_percussion else track.channel
        events.append(
            ScheduledEvent(0.0, EventKind.PROGRAM_CHANGE, channel, track.program, 0)
        )
        for note in track.notes:
            events.append(
                ScheduledEvent(
                    to_ms(note.onset), EventKind.NOTE_ON, channel, note.pitch, note.velocity
                )
            )
            events.append(
                ScheduledEvent(to_ms(note.end), EventKind.NOTE_OFF, channel, note.pitch, 0)
            )

    events.sort(key=lambda e: (e.at_ms, _KIND_ORDER[e.kind], e.channel, e.pitch))
    last_ms = events[-1].at_ms if events else 0.0
    events.append(ScheduledEvent(last_ms, EventKind.END))
    return events
