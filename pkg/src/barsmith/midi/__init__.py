"""Lossless Standard MIDI File model: parse, write, pair, and time."""

from .notes import NoteEvent, pair_notes
from .smf import (
    ChannelEvent,
    Event,
    MetaEvent,
    RawMidiFile,
    RawTrack,
    SysexEvent,
    parse_smf,
    write_smf,
)
from .timing import TempoMap, bpm_to_us_per_quarter, tick_to_seconds, us_per_quarter_to_bpm

__all__ = [
    "ChannelEvent",
    "Event",
    "MetaEvent",
    "NoteEvent",
    "RawMidiFile",
    "RawTrack",
    "SysexEvent",
    "TempoMap",
    "bpm_to_us_per_quarter",
    "pair_notes",
    "parse_smf",
    "tick_to_seconds",
    "us_per_quarter_to_bpm",
    "write_smf",
]
