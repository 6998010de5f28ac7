"""Standard MIDI File parsing and serialization (formats 0 and 1).

The event model is lossless: unknown meta and sysex payloads are kept as
opaque bytes so ``parse_smf(write_smf(f)) == f`` holds event for event.
The writer always emits explicit status bytes; the parser accepts running
status.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import (
    BadVarLen,
    InvariantViolation,
    MalformedEvent,
    MalformedHeader,
    TruncatedChunk,
    UnsupportedFormat,
)

HEADER_MAGIC = b"MThd"
TRACK_MAGIC = b"MTrk"

# Channel-message status nibbles.
NOTE_OFF = 0x80
NOTE_ON = 0x90
POLY_PRESSURE = 0xA0
CONTROL_CHANGE = 0xB0
PROGRAM_CHANGE = 0xC0
CHANNEL_PRESSURE = 0xD0
PITCH_BEND = 0xE0

# Meta types we interpret; everything else is carried opaquely.
META_TRACK_NAME = 0x03
META_END_OF_TRACK = 0x2F
META_SET_TEMPO = 0x51
META_TIME_SIGNATURE = 0x58

# Status kinds that carry a single data byte.
_ONE_BYTE_KINDS = (PROGRAM_CHANGE, CHANNEL_PRESSURE)

MAX_DELTA = 0x0FFFFFFF  # largest value a 4-byte varint can carry


@dataclass(frozen=True)
class ChannelEvent:
    """A voice message: note on/off, CC, program change, bend, pressure."""

    delta: int
    kind: int  # status nibble, e.g. NOTE_ON
    channel: int
    data1: int
    data2: int = 0  # unused for one-byte kinds

    @property
    def status(self) -> int:
        return self.kind | self.channel


@dataclass(frozen=True)
class MetaEvent:
    delta: int
    meta_type: int
    data: bytes = b""


@dataclass(frozen=True)
class SysexEvent:
    delta: int
    status: int  # 0xF0 or 0xF7
    data: bytes = b""


Event = ChannelEvent | MetaEvent | SysexEvent

END_OF_TRACK = MetaEvent(0, META_END_OF_TRACK)


@dataclass(frozen=True)
class RawTrack:
    events: tuple[Event, ...] = (END_OF_TRACK,)

    def end_tick(self) -> int:
        """Absolute tick of the final (End-of-Track) event."""
        return sum(e.delta for e in self.events)

    def absolute(self):
        """Yield (absolute_tick, event) pairs."""
        tick = 0
        for event in self.events:
            tick += event.delta
            yield tick, event


@dataclass(frozen=True)
class RawMidiFile:
    format: int
    division: int  # ticks per quarter note (PPQ)
    tracks: tuple[RawTrack, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)


class _Reader:
    """Cursor over a byte buffer that refuses to read past `limit`."""

    def __init__(self, data: bytes, start: int = 0, limit: int | None = None):
        self.data = data
        self.pos = start
        self.limit = len(data) if limit is None else limit

    def remaining(self) -> int:
        return self.limit - self.pos

    def u8(self) -> int:
        if self.pos >= self.limit:
            raise TruncatedChunk("unexpected end of chunk")
        b = self.data[self.pos]
        self.pos += 1
        return b

    def peek(self) -> int:
        if self.pos >= self.limit:
            raise TruncatedChunk("unexpected end of chunk")
        return self.data[self.pos]

    def take(self, n: int) -> bytes:
        if self.remaining() < n:
            raise TruncatedChunk(
                f"need {n} bytes, chunk has {self.remaining()} left"
            )
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return bytes(out)

    def u16(self) -> int:
        b = self.take(2)
        return (b[0] << 8) | b[1]

    def u32(self) -> int:
        b = self.take(4)
        return (b[0] << 24) | (b[1] << 16) | (b[2] << 8) | b[3]

    def varint(self) -> int:
        """SMF variable-length quantity; at most 4 bytes."""
        value = 0
        for i in range(4):
            b = self.u8()
            value = (value << 7) | (b & 0x7F)
            if not b & 0x80:
                return value
        raise BadVarLen("variable-length quantity exceeds 4 bytes")


def _parse_track(reader: _Reader, warnings: list[str]) -> RawTrack:
    events: list[Event] = []
    running_status: int | None = None
    saw_eot = False

    while reader.remaining() > 0:
        delta = reader.varint()
        first = reader.peek()

        if first < 0x80:
            if running_status is None:
                raise MalformedEvent(
                    f"data byte 0x{first:02X} with no running status"
                )
            status = running_status
        else:
            status = reader.u8()

        if status == 0xFF:
            running_status = None
            meta_type = reader.u8()
            length = reader.varint()
            data = reader.take(length)
            events.append(MetaEvent(delta, meta_type, data))
            if meta_type == META_END_OF_TRACK:
                saw_eot = True
                if reader.remaining() > 0:
                    warnings.append(
                        f"{reader.remaining()} bytes after End-of-Track ignored"
                    )
                    reader.pos = reader.limit
                break
        elif status in (0xF0, 0xF7):
            running_status = None
            length = reader.varint()
            data = reader.take(length)
            events.append(SysexEvent(delta, status, data))
        elif 0x80 <= status < 0xF0:
            kind = status & 0xF0
            channel = status & 0x0F
            data1 = reader.u8()
            if data1 >= 0x80:
                raise MalformedEvent(f"data byte 0x{data1:02X} out of range")
            if kind in _ONE_BYTE_KINDS:
                data2 = 0
            else:
                data2 = reader.u8()
                if data2 >= 0x80:
                    raise MalformedEvent(f"data byte 0x{data2:02X} out of range")
            events.append(ChannelEvent(delta, kind, channel, data1, data2))
            running_status = status
        else:
            raise MalformedEvent(f"unsupported status byte 0x{status:02X}")

    if not saw_eot:
        warnings.append("track missing End-of-Track; one appended")
        events.append(END_OF_TRACK)

    return RawTrack(tuple(events))


def parse_smf(data: bytes) -> RawMidiFile:
    """Parse SMF bytes into the lossless event model.

    Raises MalformedHeader, TruncatedChunk, BadVarLen, MalformedEvent, or
    UnsupportedFormat; never anything else, regardless of input.
    """
    if not data:
        raise MalformedHeader("empty input")
    if len(data) < 8 or data[:4] != HEADER_MAGIC:
        raise MalformedHeader('missing "MThd" header')

    warnings: list[str] = []
    reader = _Reader(data, 4)
    header_len = reader.u32()
    if header_len < 6:
        raise MalformedHeader(f"header length {header_len} < 6")
    if reader.remaining() < header_len:
        raise TruncatedChunk("header shorter than declared")
    fmt = reader.u16()
    n_tracks = reader.u16()
    division = reader.u16()
    if header_len > 6:
        warnings.append(f"{header_len - 6} extra header bytes skipped")
        reader.take(header_len - 6)

    if fmt not in (0, 1):
        raise UnsupportedFormat(f"SMF format {fmt} not supported")
    if division & 0x8000:
        raise UnsupportedFormat("SMPTE time division not supported")
    if division == 0:
        raise MalformedHeader("time division of 0 ticks per quarter")
    if fmt == 0 and n_tracks != 1:
        raise MalformedHeader(f"format 0 declares {n_tracks} tracks")

    tracks: list[RawTrack] = []
    while len(tracks) < n_tracks:
        if reader.remaining() < 8:
            raise TruncatedChunk(
                f"expected {n_tracks} tracks, found {len(tracks)}"
            )
        magic = reader.take(4)
        length = reader.u32()
        if reader.remaining() < length:
            raise TruncatedChunk("chunk shorter than declared")
        if magic != TRACK_MAGIC:
            # Alien chunk types are skipped per the SMF spec.
            warnings.append(f"skipped foreign chunk {magic!r}")
            reader.take(length)
            continue
        track_reader = _Reader(data, reader.pos, reader.pos + length)
        tracks.append(_parse_track(track_reader, warnings))
        reader.pos += length

    if reader.remaining() > 0:
        warnings.append(f"{reader.remaining()} trailing bytes ignored")

    return RawMidiFile(fmt, division, tuple(tracks), tuple(warnings))


def _write_varint(value: int, out: bytearray) -> None:
    if value < 0 or value > MAX_DELTA:
        raise InvariantViolation(f"delta {value} outside varint range")
    chunk = [value & 0x7F]
    value >>= 7
    while value:
        chunk.append((value & 0x7F) | 0x80)
        value >>= 7
    out.extend(reversed(chunk))


def _validate_event(event: Event, is_last: bool) -> None:
    if event.delta < 0:
        raise InvariantViolation("negative delta time")
    if isinstance(event, MetaEvent):
        if (event.meta_type == META_END_OF_TRACK) != is_last:
            raise InvariantViolation(
                "End-of-Track must be the final event of a track"
            )
        if not 0 <= event.meta_type <= 0xFF:
            raise InvariantViolation(f"meta type {event.meta_type} out of range")
    elif isinstance(event, SysexEvent):
        if event.status not in (0xF0, 0xF7):
            raise InvariantViolation(f"sysex status 0x{event.status:02X}")
        if is_last:
            raise InvariantViolation("track must end with End-of-Track")
    elif isinstance(event, ChannelEvent):
        if event.kind not in (
            NOTE_OFF,
            NOTE_ON,
            POLY_PRESSURE,
            CONTROL_CHANGE,
            PROGRAM_CHANGE,
            CHANNEL_PRESSURE,
            PITCH_BEND,
        ):
            raise InvariantViolation(f"bad channel event kind 0x{event.kind:02X}")
        if not 0 <= event.channel <= 15:
            raise InvariantViolation(f"channel {event.channel} out of range")
        if not 0 <= event.data1 < 0x80 or not 0 <= event.data2 < 0x80:
            raise InvariantViolation("channel event data byte out of range")
        if is_last:
            raise InvariantViolation("track must end with End-of-Track")
    else:
        raise InvariantViolation(f"unknown event type {type(event).__name__}")


def write_smf(file: RawMidiFile) -> bytes:
    """Serialize to SMF bytes. Every event carries an explicit status byte."""
    if file.format not in (0, 1):
        raise InvariantViolation(f"format {file.format} not writable")
    if file.format == 0 and len(file.tracks) != 1:
        raise InvariantViolation(
            f"format 0 requires exactly one track, got {len(file.tracks)}"
        )
    if not 1 <= file.division <= 0x7FFF:
        raise InvariantViolation(f"division {file.division} out of PPQ range")
    if not file.tracks:
        raise InvariantViolation("file has no tracks")

    out = bytearray()
    out += HEADER_MAGIC
    out += (6).to_bytes(4, "big")
    out += file.format.to_bytes(2, "big")
    out += len(file.tracks).to_bytes(2, "big")
    out += file.division.to_bytes(2, "big")

    for track in file.tracks:
        if not track.events:
            raise InvariantViolation("track with no events")
        body = bytearray()
        for i, event in enumerate(track.events):
            _validate_event(event, i == len(track.events) - 1)
            _write_varint(event.delta, body)
            if isinstance(event, ChannelEvent):
                body.append(event.status)
                body.append(event.data1)
                if event.kind not in _ONE_BYTE_KINDS:
                    body.append(event.data2)
            elif isinstance(event, MetaEvent):
                body.append(0xFF)
                body.append(event.meta_type)
                _write_varint(len(event.data), body)
                body += event.data
            else:
                body.append(event.status)
                _write_varint(len(event.data), body)
                body += event.data
        out += TRACK_MAGIC
        out += len(body).to_bytes(4, "big")
        out += body

    return bytes(out)
