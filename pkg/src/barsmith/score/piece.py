"""The score model: a multi-track piece segmented into a grid of bars.

A Piece is an immutable value; every edit returns a new Piece. Notes belong
to the bar containing their onset; durations may sustain across bar
boundaries without being split.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import (
    IndexOutOfBounds,
    InvariantViolation,
    LastTrackDeletion,
    NoteOutsideCell,
)
from ..midi.notes import NoteEvent, pair_notes
from ..midi.smf import (
    META_END_OF_TRACK,
    META_SET_TEMPO,
    META_TIME_SIGNATURE,
    META_TRACK_NAME,
    NOTE_OFF,
    NOTE_ON,
    PROGRAM_CHANGE,
    ChannelEvent,
    Event,
    MetaEvent,
    RawMidiFile,
    RawTrack,
)
from ..midi.timing import DEFAULT_SIGNATURE, TempoMap
from .instruments import PERCUSSION_CHANNEL, group_of_program

Cell = tuple[int, int]  # (track_index, bar_index)


@dataclass(frozen=True)
class Bar:
    index: int
    start: int
    end: int  # exclusive
    numerator: int
    denominator: int

    def __post_init__(self):
        if self.end <= self.start:
            raise InvariantViolation(f"bar {self.index} has non-positive length")

    @property
    def length(self) -> int:
        return self.end - self.start

    def contains_onset(self, tick: int) -> bool:
        return self.start <= tick < self.end


@dataclass(frozen=True)
class Track:
    name: str = ""
    channel: int = 0
    program: int = 0
    is_percussion: bool = False
    notes: tuple[NoteEvent, ...] = ()

    def __post_init__(self):
        if not 0 <= self.channel <= 15:
            raise InvariantViolation(f"channel {self.channel} out of range")
        if not 0 <= self.program <= 127:
            raise InvariantViolation(f"program {self.program} out of range")
        if list(self.notes) != sorted(self.notes):
            raise InvariantViolation("track notes not in canonical order")

    @property
    def instrument_group(self) -> int:
        return group_of_program(self.program)


@dataclass(frozen=True)
class BarSelection:
    """The set of (track, bar) cells picked for generation."""

    cells: frozenset[Cell]

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset(self.cells))

    def __iter__(self):
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def validate(self, n_tracks: int, n_bars: int) -> None:
        for track, bar in self.cells:
            if not 0 <= track < n_tracks or not 0 <= bar < n_bars:
                raise IndexOutOfBounds(
                    f"cell ({track}, {bar}) outside {n_tracks}x{n_bars} grid"
                )

    def tracks(self) -> list[int]:
        return sorted({t for t, _ in self.cells})


@dataclass(frozen=True)
class Piece:
    ppq: int
    tempo_map: TempoMap = TempoMap()
    bars: tuple[Bar, ...] = ()
    tracks: tuple[Track, ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.ppq <= 0:
            raise InvariantViolation(f"ppq {self.ppq} <= 0")
        if not self.bars:
            raise InvariantViolation("piece must have at least one bar")
        if not self.tracks:
            raise InvariantViolation("piece must have at least one track")
        if self.bars[0].start != 0:
            raise InvariantViolation("first bar must start at tick 0")
        for prev, cur in zip(self.bars, self.bars[1:]):
            if cur.start != prev.end:
                raise InvariantViolation("bars must be contiguous")
            if cur.index != prev.index + 1:
                raise InvariantViolation("bar indices must be sequential")

    @property
    def n_tracks(self) -> int:
        return len(self.tracks)

    @property
    def n_bars(self) -> int:
        return len(self.bars)

    @property
    def end_tick(self) -> int:
        return self.bars[-1].end

    def bar_of_tick(self, tick: int) -> int:
        """Index of the bar containing `tick` (clamped to the last bar)."""
        for bar in self.bars:
            if bar.contains_onset(tick):
                return bar.index
        return self.n_bars - 1

    def check_cell(self, cell: Cell) -> None:
        track, bar = cell
        if not 0 <= track < self.n_tracks or not 0 <= bar < self.n_bars:
            raise IndexOutOfBounds(
                f"cell ({track}, {bar}) outside {self.n_tracks}x{self.n_bars} grid"
            )


def bar_length_ticks(numerator: int, denominator: int, ppq: int) -> int:
    """Ticks in one bar: numerator x (4/denominator) quarters."""
    length = numerator * 4 * ppq / denominator
    ticks = int(length)
    if ticks != length:
        ticks = max(1, round(length))
    return max(1, ticks)


def _build_bars(
    signatures: list[tuple[int, int, int]],
    content_end: int,
    ppq: int,
    warnings: list[str],
) -> tuple[Bar, ...]:
    """Lay out contiguous bars; signature changes snap to bar boundaries."""
    pending = sorted(signatures)
    current = DEFAULT_SIGNATURE
    bars: list[Bar] = []
    start = 0
    while start < content_end or not bars:
        while pending and pending[0][0] <= start:
            tick, num, den = pending.pop(0)
            if tick != start:
                warnings.append(
                    f"time signature at tick {tick} snapped to bar boundary {start}"
                )
            current = (num, den)
        num, den = current
        length = bar_length_ticks(num, den, ppq)
        bars.append(Bar(len(bars), start, start + length, num, den))
        start += length
    return tuple(bars)


def _track_metadata(raw: RawTrack) -> tuple[str, dict[int, int]]:
    """Extract the track name and the first program per channel."""
    name = ""
    programs: dict[int, int] = {}
    for _, event in raw.absolute():
        if isinstance(event, MetaEvent) and event.meta_type == META_TRACK_NAME and not name:
            name = event.data.decode("latin-1", errors="replace")
        elif isinstance(event, ChannelEvent) and event.kind == PROGRAM_CHANGE:
            programs.setdefault(event.channel, event.data1)
    return name, programs


def segment_bars(file: RawMidiFile, warnings: list[str] | None = None) -> Piece:
    """Segment a parsed MIDI file into a Piece.

    SMF tracks holding notes on several channels are split into one Piece
    track per channel (the format-0 convention). A Piece always has at least
    one bar and one track.
    """
    if warnings is None:
        warnings = []
    warnings.extend(file.warnings)

    tempos: dict[int, int] = {}
    signatures: dict[int, tuple[int, int]] = {}
    for raw in file.tracks:
        for tick, event in raw.absolute():
            if not isinstance(event, MetaEvent):
                continue
            if event.meta_type == META_SET_TEMPO and len(event.data) == 3:
                us = int.from_bytes(event.data, "big")
                if us > 0:
                    if tick in tempos and tempos[tick] != us:
                        warnings.append(f"conflicting tempo at tick {tick}; last wins")
                    tempos[tick] = us
            elif event.meta_type == META_TIME_SIGNATURE and len(event.data) >= 2:
                num, den_pow = event.data[0], event.data[1]
                if num > 0:
                    if tick in signatures and signatures[tick] != (num, 1 << den_pow):
                        warnings.append(
                            f"conflicting time signature at tick {tick}; last wins"
                        )
                    signatures[tick] = (num, 1 << den_pow)

    tempo_map = TempoMap(
        tuple(sorted(tempos.items())),
        tuple((t, num, den) for t, (num, den) in sorted(signatures.items())),
    )

    tracks: list[Track] = []
    content_end = 0
    for raw in file.tracks:
        name, programs = _track_metadata(raw)
        notes = pair_notes(raw, warnings)
        content_end = max(content_end, raw.end_tick())
        for note in notes:
            content_end = max(content_end, note.end)
        by_channel: dict[int, list[NoteEvent]] = {}
        for note in notes:
            by_channel.setdefault(note.channel, []).append(note)
        if not by_channel and programs:
            # a note-less track with a program change is a real (empty) part,
            # not a conductor track; keep it so edits survive round-trips
            channel = min(programs)
            by_channel[channel] = []
        split = len(by_channel) > 1
        for channel in sorted(by_channel):
            label = f"{name} ch{channel + 1}" if split and name else name
            tracks.append(
                Track(
                    name=label,
                    channel=channel,
                    program=programs.get(channel, 0),
                    is_percussion=channel == PERCUSSION_CHANNEL,
                    notes=tuple(sorted(by_channel[channel])),
                )
            )

    if not tracks:
        tracks.append(Track())

    bars = _build_bars(
        [(t, num, den) for t, (num, den) in sorted(signatures.items())],
        content_end,
        file.division,
        warnings,
    )

    return Piece(
        ppq=file.division,
        tempo_map=tempo_map,
        bars=bars,
        tracks=tuple(tracks),
        warnings=tuple(warnings),
    )


def notes_in_cell(piece: Piece, cell: Cell) -> list[NoteEvent]:
    """Notes whose onset lies in the half-open bar interval of `cell`."""
    piece.check_cell(cell)
    track_index, bar_index = cell
    bar = piece.bars[bar_index]
    return [n for n in piece.tracks[track_index].notes if bar.contains_onset(n.onset)]


def replace_cell_notes(piece: Piece, cell: Cell, notes: list[NoteEvent]) -> Piece:
    """Replace the notes of one cell; every other cell is untouched."""
    piece.check_cell(cell)
    track_index, bar_index = cell
    bar = piece.bars[bar_index]
    for note in notes:
        if not bar.contains_onset(note.onset):
            raise NoteOutsideCell(
                f"onset {note.onset} outside bar [{bar.start}, {bar.end})"
            )
    track = piece.tracks[track_index]
    kept = [n for n in track.notes if not bar.contains_onset(n.onset)]
    merged = tuple(sorted(kept + list(notes)))
    new_track = replace(track, notes=merged)
    new_tracks = piece.tracks[:track_index] + (new_track,) + piece.tracks[track_index + 1 :]
    return replace(piece, tracks=new_tracks)


def add_track(
    piece: Piece,
    name: str = "",
    channel: int = 0,
    program: int = 0,
    is_percussion: bool | None = None,
) -> Piece:
    """Append an empty track sharing the existing bar grid."""
    if is_percussion is None:
        is_percussion = channel == PERCUSSION_CHANNEL
    track = Track(name=name, channel=channel, program=program, is_percussion=is_percussion)
    return replace(piece, tracks=piece.tracks + (track,))


def delete_track(piece: Piece, index: int) -> Piece:
    if not 0 <= index < piece.n_tracks:
        raise IndexOutOfBounds(f"track {index} out of range")
    if piece.n_tracks == 1:
        raise LastTrackDeletion("a piece keeps at least one track")
    new_tracks = piece.tracks[:index] + piece.tracks[index + 1 :]
    return replace(piece, tracks=new_tracks)


def edit_track_metadata(
    piece: Piece,
    index: int,
    name: str | None = None,
    channel: int | None = None,
    program: int | None = None,
    is_percussion: bool | None = None,
) -> Piece:
    if not 0 <= index < piece.n_tracks:
        raise IndexOutOfBounds(f"track {index} out of range")
    track = piece.tracks[index]
    updates: dict = {}
    if name is not None:
        updates["name"] = name
    if channel is not None:
        updates["channel"] = channel
        updates["notes"] = tuple(
            sorted(replace(n, channel=channel) for n in track.notes)
        )
    if program is not None:
        updates["program"] = program
    if is_percussion is not None:
        updates["is_percussion"] = is_percussion
    elif channel is not None:
        updates["is_percussion"] = channel == PERCUSSION_CHANNEL
    new_track = replace(track, **updates)
    new_tracks = piece.tracks[:index] + (new_track,) + piece.tracks[index + 1 :]
    return replace(piece, tracks=new_tracks)


def piece_to_midifile(piece: Piece) -> RawMidiFile:
    """Export as a format-1 file: conductor track plus one track per Track."""
    end_tick = piece.end_tick

    conductor: list[tuple[int, int, Event]] = []
    for tick, us in piece.tempo_map.tempos:
        conductor.append((tick, 0, MetaEvent(0, META_SET_TEMPO, us.to_bytes(3, "big"))))
    for tick, num, den in piece.tempo_map.time_signatures:
        den_pow = max(0, den.bit_length() - 1)
        data = bytes([num, den_pow, 24, 8])
        conductor.append((tick, 1, MetaEvent(0, META_TIME_SIGNATURE, data)))
    tracks = [_events_to_track(conductor, end_tick)]

    for track in piece.tracks:
        timed: list[tuple[int, int, Event]] = []
        if track.name:
            timed.append(
                (0, 0, MetaEvent(0, META_TRACK_NAME, track.name.encode("latin-1", "replace")))
            )
        channel = PERCUSSION_CHANNEL if track.is_percussion else track.channel
        timed.append((0, 1, ChannelEvent(0, PROGRAM_CHANGE, channel, track.program)))
        for note in track.notes:
            # note-offs sort before note-ons at the same tick
            timed.append(
                (note.end, 2, ChannelEvent(0, NOTE_OFF, channel, note.pitch, 0))
            )
            timed.append(
                (note.onset, 3, ChannelEvent(0, NOTE_ON, channel, note.pitch, note.velocity))
            )
        track_end = max([end_tick] + [note.end for note in track.notes])
        tracks.append(_events_to_track(timed, track_end))

    return RawMidiFile(format=1, division=piece.ppq, tracks=tuple(tracks))


def _events_to_track(timed: list[tuple[int, int, Event]], end_tick: int) -> RawTrack:
    """Convert (tick, rank, event) triples to delta-timed events plus EoT."""
    def sort_key(item):
        tick, rank, event = item
        pitch = event.data1 if isinstance(event, ChannelEvent) else 0
        vel = event.data2 if isinstance(event, ChannelEvent) else 0
        return (tick, rank, pitch, vel)

    events: list[Event] = []
    cursor = 0
    for tick, _, event in sorted(timed, key=sort_key):
        events.append(replace(event, delta=tick - cursor))
        cursor = tick
    events.append(MetaEvent(max(0, end_tick - cursor), META_END_OF_TRACK))
    return RawTrack(tuple(events))
