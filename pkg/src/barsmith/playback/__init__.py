"""Playback scheduling and live event streaming."""

from .schedule import EventKind, ScheduledEvent, schedule
from .stream import EventSink, MidiPortSink, Player, RecordingSink, stream

__all__ = [
    "EventKind",
    "EventSink",
    "MidiPortSink",
    "Player",
    "RecordingSink",
    "ScheduledEvent",
    "schedule",
    "stream",
]
