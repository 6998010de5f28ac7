"""Paired note events on top of the raw SMF stream."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..errors import InvariantViolation
from .smf import NOTE_OFF, NOTE_ON, ChannelEvent, RawTrack


@dataclass(frozen=True, order=True)
class NoteEvent:
    """A note with tick timing. Ordering is the canonical score order."""

    onset: int
    pitch: int
    duration: int
    velocity: int
    channel: int = 0

    def __post_init__(self):
        if self.onset < 0:
            raise InvariantViolation(f"onset {self.onset} < 0")
        if self.duration <= 0:
            raise InvariantViolation(f"duration {self.duration} <= 0")
        if not 0 <= self.pitch <= 127:
            raise InvariantViolation(f"pitch {self.pitch} out of range")
        if not 1 <= self.velocity <= 127:
            raise InvariantViolation(f"velocity {self.velocity} out of range")
        if not 0 <= self.channel <= 15:
            raise InvariantViolation(f"channel {self.channel} out of range")

    @property
    def end(self) -> int:
        return self.onset + self.duration


def pair_notes(
    track: RawTrack, warnings: list[str] | None = None
) -> list[NoteEvent]:
    """Pair note-on/note-off events into NoteEvents.

    Note-on with velocity 0 counts as note-off. Overlapping same-pitch notes
    pair first-in-first-out. Note-ons left open at End-of-Track are closed at
    the EoT tick; durations are floored at 1 tick. Orphan note-offs are
    dropped and reported through `warnings`.
    """
    if warnings is None:
        warnings = []
    open_notes: dict[tuple[int, int], deque[tuple[int, int]]] = {}
    notes: list[NoteEvent] = []
    orphan_offs = 0

    def close(key: tuple[int, int], off_tick: int) -> bool:
        queue = open_notes.get(key)
        if not queue:
            return False
        onset, velocity = queue.popleft()
        channel, pitch = key
        notes.append(
            NoteEvent(onset, pitch, max(1, off_tick - onset), velocity, channel)
        )
        return True

    end_tick = 0
    for tick, event in track.absolute():
        end_tick = tick
        if not isinstance(event, ChannelEvent):
            continue
        key = (event.channel, event.data1)
        if event.kind == NOTE_ON and event.data2 > 0:
            open_notes.setdefault(key, deque()).append((tick, event.data2))
        elif event.kind == NOTE_OFF or (event.kind == NOTE_ON and event.data2 == 0):
            if not close(key, tick):
                orphan_offs += 1

    dangling = 0
    for key, queue in sorted(open_notes.items()):
        while queue:
            dangling += 1
            close(key, end_tick)

    if orphan_offs:
        warnings.append(f"dropped {orphan_offs} unmatched note-off events")
    if dangling:
        warnings.append(f"closed {dangling} unterminated notes at End-of-Track")

    notes.sort()
    return notes
