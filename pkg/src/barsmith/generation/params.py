"""Generation-control parameters: the global and per-track surfaces."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction

from .. import constants
from ..errors import InvalidParams
from ..score.instruments import program_for_group
from ..score.piece import BarSelection, Piece


class DurationClass(IntEnum):
    """Note-duration scale in Western notation order; ANY means unbounded."""

    ANY = 0
    THIRTY_SECOND = 1
    SIXTEENTH = 2
    EIGHTH = 3
    QUARTER = 4
    HALF = 5
    WHOLE = 6

    @property
    def label(self) -> str:
        return constants.DURATION_SCALE[self.value]

    @classmethod
    def from_label(cls, label: str) -> "DurationClass":
        try:
            return cls(constants.DURATION_SCALE.index(label.lower()))
        except ValueError:
            raise InvalidParams(
                f"duration {label!r} not in {list(constants.DURATION_SCALE)}"
            ) from None

    def ticks(self, ppq: int) -> int:
        """Length in ticks: ppq x 4 x fraction-of-a-whole. ANY has no length."""
        if self is DurationClass.ANY:
            raise InvalidParams("ANY has no tick length")
        fraction = _CLASS_FRACTIONS[self]
        return max(1, int(ppq * 4 * fraction))


_CLASS_FRACTIONS = {
    DurationClass.THIRTY_SECOND: Fraction(1, 32),
    DurationClass.SIXTEENTH: Fraction(1, 16),
    DurationClass.EIGHTH: Fraction(1, 8),
    DurationClass.QUARTER: Fraction(1, 4),
    DurationClass.HALF: Fraction(1, 2),
    DurationClass.WHOLE: Fraction(1, 1),
}

CONCRETE_CLASSES = tuple(c for c in DurationClass if c is not DurationClass.ANY)


def _check_range(name: str, value, lo, hi) -> None:
    if not lo <= value <= hi:
        raise InvalidParams(f"{name} must be within [{lo}, {hi}], got {value}")


@dataclass(frozen=True)
class GlobalParams:
    """Model-level generation parameters."""

    temperature: float = 1.0
    polyphony_hard_limit: int = 6
    percentage: int = 100
    model_dim: int = constants.MODEL_DIM_DEFAULT
    tracks_per_step: int = constants.TRACKS_PER_STEP_DEFAULT
    bars_per_step: int = constants.BARS_PER_STEP_DEFAULT
    max_steps: int = 0  # 0 = unlimited
    tempo: int = constants.TEMPO_DEFAULT

    def __post_init__(self):
        _check_range(
            "temperature",
            self.temperature,
            constants.TEMPERATURE_MIN,
            constants.TEMPERATURE_MAX,
        )
        _check_range(
            "polyphony_hard_limit",
            self.polyphony_hard_limit,
            constants.POLYPHONY_HARD_LIMIT_MIN,
            constants.POLYPHONY_HARD_LIMIT_MAX,
        )
        _check_range("percentage", self.percentage, 0, 100)
        _check_range("model_dim", self.model_dim, 1, 8)
        _check_range("tracks_per_step", self.tracks_per_step, 1, 8)
        _check_range("bars_per_step", self.bars_per_step, 1, 8)
        _check_range("max_steps", self.max_steps, 0, 8)
        if self.bars_per_step > self.model_dim:
            raise InvalidParams(
                f"bars_per_step {self.bars_per_step} exceeds model_dim {self.model_dim}"
            )
        if self.tempo <= 0:
            raise InvalidParams(f"tempo must be a positive BPM, got {self.tempo}")


@dataclass(frozen=True)
class TrackParams:
    """Track-level generation parameters.

    `instrument` is a GM program when `instrument_is_group` is False, or one
    of the 8 coarse groups when True. None keeps the track's current program.
    """

    instrument: int | None = None
    instrument_is_group: bool = False
    note_density: int = 0  # 0 = drawn at random per request
    polyphony_min: int = 0
    polyphony_max: int = 6
    duration_min: DurationClass = DurationClass.ANY
    duration_max: DurationClass = DurationClass.ANY

    def __post_init__(self):
        if self.instrument is not None:
            if self.instrument_is_group:
                _check_range("instrument group", self.instrument, 0, 7)
            else:
                _check_range("instrument program", self.instrument, 0, 127)
        _check_range("note_density", self.note_density, 0, 10)
        _check_range("polyphony_min", self.polyphony_min, 0, 6)
        _check_range("polyphony_max", self.polyphony_max, 0, 6)
        if self.polyphony_min > self.polyphony_max:
            raise InvalidParams(
                f"polyphony_min {self.polyphony_min} > polyphony_max {self.polyphony_max}"
            )
        # ANY is unbounded on whichever side it sits; order only binds
        # between two concrete classes
        if (
            self.duration_min is not DurationClass.ANY
            and self.duration_max is not DurationClass.ANY
            and self.duration_min > self.duration_max
        ):
            raise InvalidParams(
                f"duration range {self.duration_min.label} > {self.duration_max.label}"
            )

    def resolve_program(self, current: int) -> int:
        if self.instrument is None:
            return current
        if self.instrument_is_group:
            return program_for_group(self.instrument)
        return self.instrument

    def allowed_duration_classes(self) -> tuple[DurationClass, ...]:
        lo = self.duration_min
        hi = self.duration_max
        low_index = DurationClass.THIRTY_SECOND if lo is DurationClass.ANY else lo
        high_index = DurationClass.WHOLE if hi is DurationClass.ANY else hi
        return tuple(c for c in CONCRETE_CLASSES if low_index <= c <= high_index)


@dataclass(frozen=True)
class GenerationRequest:
    selection: BarSelection
    global_params: GlobalParams = field(default_factory=GlobalParams)
    per_track: dict[int, TrackParams] = field(default_factory=dict)
    batch_size: int = 1
    seed: int = 0

    def __post_init__(self):
        if len(self.selection) == 0:
            raise InvalidParams("selection must not be empty")
        if self.batch_size < constants.BATCH_SIZE_MIN:
            raise InvalidParams(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0 <= self.seed < 2**64:
            raise InvalidParams("seed must be an unsigned 64-bit integer")
        missing = [t for t in self.selection.tracks() if t not in self.per_track]
        if missing:
            raise InvalidParams(f"per_track params missing for tracks {missing}")

    def validate_against(self, piece: Piece) -> None:
        self.selection.validate(piece.n_tracks, piece.n_bars)
        for track_index in self.per_track:
            if not 0 <= track_index < piece.n_tracks:
                raise InvalidParams(f"per_track index {track_index} out of range")


def effective_polyphony(track: TrackParams, global_params: GlobalParams) -> tuple[int, int]:
    """Apply the hard-limit override to a track's polyphony range.

    The upper bound is capped by the global hard limit; the lower bound is
    clamped down so the range stays well-formed.
    """
    upper = min(track.polyphony_max, global_params.polyphony_hard_limit)
    lower = min(track.polyphony_min, upper)
    return lower, upper


def resolve_density(level: int, rng: random.Random) -> int:
    """Density 0 means "pick one at random"; anything else passes through."""
    _check_range("note_density", level, 0, 10)
    if level == 0:
        return rng.randint(1, 10)
    return level
