"""Exception hierarchy shared across the engine and the service layer."""

from __future__ import annotations


class BarsmithError(Exception):
    """Base class for every error raised by this package."""


# --- MIDI file layer -------------------------------------------------------

class MidiError(BarsmithError):
    """Base class for Standard MIDI File parse/write errors."""


class MalformedHeader(MidiError):
    """Missing "MThd" magic, bad header length, or inconsistent header fields."""


class TruncatedChunk(MidiError):
    """A chunk declares more bytes than the input provides."""


class BadVarLen(MidiError):
    """A variable-length quantity ran past its 4-byte maximum."""


class UnsupportedFormat(MidiError):
    """SMF format 2 or SMPTE time division; both are rejected."""


class MalformedEvent(MidiError):
    """An event that cannot be decoded (stray data byte, bad status)."""


class InvariantViolation(BarsmithError):
    """A domain value violates its type invariants."""


# --- score / bar grid ------------------------------------------------------

class IndexOutOfBounds(BarsmithError):
    """Track or bar index outside the piece grid."""


class NoteOutsideCell(BarsmithError):
    """A note onset falls outside the cell it was assigned to."""


class LastTrackDeletion(BarsmithError):
    """Deleting the only remaining track of a piece."""


# --- generation ------------------------------------------------------------

class InvalidParams(BarsmithError):
    """A generation parameter is outside its documented range."""


class EmptySelection(BarsmithError):
    """A generation request selected no cells."""


class EmptyWeights(BarsmithError):
    """temperature_sample called with no candidates."""


class NonPositiveWeight(BarsmithError):
    """temperature_sample called with a weight <= 0."""


class PlanEmpty(BarsmithError):
    """The step plan regenerates nothing (e.g. percentage 0)."""


class GeneratorFailure(BarsmithError):
    """A generator implementation failed; carries the failing step index."""

    def __init__(self, message: str, step_index: int | None = None):
        super().__init__(message)
        self.step_index = step_index


# --- ranking ---------------------------------------------------------------

class DimensionMismatch(BarsmithError):
    """Feature vectors of incompatible shape (padding contract violated)."""


class EmptyCandidates(BarsmithError):
    """rank_outputs called with no candidates."""


# --- playback --------------------------------------------------------------

class SinkClosed(BarsmithError):
    """The playback sink refused an event; playback stops."""


class FeatureUnavailable(BarsmithError):
    """An optional feature (OS MIDI output) is not available in this build."""


# --- service ---------------------------------------------------------------

class StorageError(BarsmithError):
    """The document store failed to read or write."""


class NotFound(BarsmithError):
    """Base class for unknown-entity lookups."""


class SessionNotFound(NotFound):
    pass


class BatchNotFound(NotFound):
    pass


class OutputNotFound(NotFound):
    pass
