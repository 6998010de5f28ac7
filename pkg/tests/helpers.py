"""Shared builders for random-but-seeded MIDI files and pieces."""

from __future__ import annotations

import random

from barsmith.midi.notes import NoteEvent
from barsmith.midi.smf import (
    CHANNEL_PRESSURE,
    CONTROL_CHANGE,
    META_END_OF_TRACK,
    META_SET_TEMPO,
    META_TIME_SIGNATURE,
    META_TRACK_NAME,
    NOTE_OFF,
    NOTE_ON,
    PITCH_BEND,
    POLY_PRESSURE,
    PROGRAM_CHANGE,
    ChannelEvent,
    MetaEvent,
    RawMidiFile,
    RawTrack,
    SysexEvent,
)
from barsmith.midi.timing import TempoMap
from barsmith.score.piece import Bar, Piece, Track, bar_length_ticks

_TWO_BYTE_KINDS = (NOTE_OFF, NOTE_ON, POLY_PRESSURE, CONTROL_CHANGE, PITCH_BEND)


def random_event(rng: random.Random) -> ChannelEvent | MetaEvent | SysexEvent:
    delta = rng.randint(0, 2000)
    roll = rng.random()
    if roll < 0.75:
        kind = rng.choice(_TWO_BYTE_KINDS + (PROGRAM_CHANGE, CHANNEL_PRESSURE))
        data1 = rng.randint(0, 127)
        data2 = rng.randint(0, 127) if kind in _TWO_BYTE_KINDS else 0
        return ChannelEvent(delta, kind, rng.randint(0, 15), data1, data2)
    if roll < 0.92:
        meta_type = rng.choice(
            [META_TRACK_NAME, META_SET_TEMPO, META_TIME_SIGNATURE, 0x01, 0x7F]
        )
        if meta_type == META_SET_TEMPO:
            data = rng.randint(100_000, 2_000_000).to_bytes(3, "big")
        elif meta_type == META_TIME_SIGNATURE:
            data = bytes([rng.choice([2, 3, 4, 6]), rng.choice([1, 2, 3]), 24, 8])
        else:
            data = bytes(rng.randint(0, 255) for _ in range(rng.randint(0, 12)))
        return MetaEvent(delta, meta_type, data)
    data = bytes(rng.randint(0, 255) for _ in range(rng.randint(0, 12)))
    return SysexEvent(delta, rng.choice([0xF0, 0xF7]), data)


def random_midifile(rng: random.Random) -> RawMidiFile:
    fmt = rng.choice([0, 1])
    n_tracks = 1 if fmt == 0 else rng.randint(1, 4)
    tracks = []
    for _ in range(n_tracks):
        events = [random_event(rng) for _ in range(rng.randint(0, 40))]
        events.append(MetaEvent(rng.randint(0, 2000), META_END_OF_TRACK))
        tracks.append(RawTrack(tuple(events)))
    division = rng.choice([96, 120, 240, 480, 960])
    return RawMidiFile(fmt, division, tuple(tracks))


def make_bars(n_bars: int, ppq: int = 480, numerator: int = 4, denominator: int = 4):
    length = bar_length_ticks(numerator, denominator, ppq)
    return tuple(
        Bar(i, i * length, (i + 1) * length, numerator, denominator)
        for i in range(n_bars)
    )


def make_piece(
    n_tracks: int = 2,
    n_bars: int = 4,
    ppq: int = 480,
    notes_per_bar: int = 3,
    seed: int = 1,
    tempo_bpm: int = 120,
) -> Piece:
    """A deterministic piece with non-nested notes, safe to round-trip."""
    rng = random.Random(seed)
    bars = make_bars(n_bars, ppq)
    tracks = []
    for t in range(n_tracks):
        channel = t % 16
        if channel == 9:  # keep the melodic generator tests off the drum channel
            channel = 10
        notes = []
        for bar in bars:
            onsets = sorted(
                rng.sample(range(bar.start, bar.end, ppq // 4), k=min(notes_per_bar, 16))
            )
            for onset in onsets:
                pitch = rng.randint(48, 84)
                duration = rng.choice([ppq // 4, ppq // 2, ppq])
                duration = min(duration, bars[-1].end - onset)
                notes.append(NoteEvent(onset, pitch, max(1, duration), rng.randint(40, 110), channel))
        # same-pitch FIFO safety: drop notes nested inside an earlier one
        notes.sort()
        kept: list[NoteEvent] = []
        last_end: dict[int, int] = {}
        for note in notes:
            if note.pitch in last_end and note.end < last_end[note.pitch]:
                continue
            last_end[note.pitch] = note.end
            kept.append(note)
        tracks.append(
            Track(name=f"track {t}", channel=channel, program=(t * 7) % 128, notes=tuple(kept))
        )
    tempo_map = TempoMap(
        tempos=((0, round(60_000_000 / tempo_bpm)),),
        time_signatures=((0, 4, 4),),
    )
    return Piece(ppq=ppq, tempo_map=tempo_map, bars=bars, tracks=tuple(tracks))
