"""Canonical document (JSON-shaped dict) serialization for Piece values."""

from __future__ import annotations

from ..errors import InvariantViolation
from ..midi.notes import NoteEvent
from ..midi.timing import TempoMap
from .piece import Bar, Piece, Track


def note_to_doc(note: NoteEvent) -> dict:
    return {
        "onset": note.onset,
        "duration": note.duration,
        "pitch": note.pitch,
        "velocity": note.velocity,
        "channel": note.channel,
    }


def note_from_doc(doc: dict) -> NoteEvent:
    return NoteEvent(
        onset=int(doc["onset"]),
        duration=int(doc["duration"]),
        pitch=int(doc["pitch"]),
        velocity=int(doc["velocity"]),
        channel=int(doc.get("channel", 0)),
    )


def piece_to_doc(piece: Piece) -> dict:
    return {
        "ppq": piece.ppq,
        "tempo_map": {
            "tempos": [list(t) for t in piece.tempo_map.tempos],
            "time_signatures": [list(s) for s in piece.tempo_map.time_signatures],
        },
        "bars": [
            {
                "index": b.index,
                "start": b.start,
                "end": b.end,
                "numerator": b.numerator,
                "denominator": b.denominator,
            }
            for b in piece.bars
        ],
        "tracks": [
            {
                "name": t.name,
                "channel": t.channel,
                "program": t.program,
                "is_percussion": t.is_percussion,
                "instrument_group": t.instrument_group,
                "notes": [note_to_doc(n) for n in t.notes],
            }
            for t in piece.tracks
        ],
    }


def piece_from_doc(doc: dict) -> Piece:
    try:
        tempo_map = TempoMap(
            tuple((int(t[0]), int(t[1])) for t in doc["tempo_map"]["tempos"]),
            tuple(
                (int(s[0]), int(s[1]), int(s[2]))
                for s in doc["tempo_map"]["time_signatures"]
            ),
        )
        bars = tuple(
            Bar(
                index=int(b["index"]),
                start=int(b["start"]),
                end=int(b["end"]),
                numerator=int(b["numerator"]),
                denominator=int(b["denominator"]),
            )
            for b in doc["bars"]
        )
        tracks = tuple(
            Track(
                name=str(t.get("name", "")),
                channel=int(t.get("channel", 0)),
                program=int(t.get("program", 0)),
                is_percussion=bool(t.get("is_percussion", False)),
                notes=tuple(sorted(note_from_doc(n) for n in t.get("notes", []))),
            )
            for t in doc["tracks"]
        )
        return Piece(ppq=int(doc["ppq"]), tempo_map=tempo_map, bars=bars, tracks=tracks)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvariantViolation(f"bad piece document: {exc}") from exc
