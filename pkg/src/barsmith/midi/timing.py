"""Tempo and time-signature maps, and tick-to-wall-clock conversion."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvariantViolation

DEFAULT_US_PER_QUARTER = 500_000  # 120 BPM
DEFAULT_SIGNATURE = (4, 4)


def bpm_to_us_per_quarter(bpm: float) -> int:
    if bpm <= 0:
        raise InvariantViolation(f"tempo {bpm} BPM must be positive")
    return round(60_000_000 / bpm)


def us_per_quarter_to_bpm(us: int) -> float:
    return 60_000_000 / us


@dataclass(frozen=True)
class TempoMap:
    """Tempo and time-signature change points, strictly ascending in tick."""

    tempos: tuple[tuple[int, int], ...] = ()  # (tick, microseconds per quarter)
    time_signatures: tuple[tuple[int, int, int], ...] = ()  # (tick, num, den)

    def __post_init__(self):
        for seq, label in ((self.tempos, "tempo"), (self.time_signatures, "signature")):
            last = -1
            for entry in seq:
                if entry[0] < 0:
                    raise InvariantViolation(f"{label} entry at negative tick")
                if entry[0] <= last:
                    raise InvariantViolation(f"{label} entries not strictly ascending")
                last = entry[0]
        for _, us in self.tempos:
            if us <= 0:
                raise InvariantViolation("non-positive tempo value")
        for _, num, den in self.time_signatures:
            if num <= 0 or den <= 0:
                raise InvariantViolation("non-positive time signature")

    def tempo_at(self, tick: int) -> int:
        """Microseconds per quarter in force at `tick` (default 120 BPM)."""
        current = DEFAULT_US_PER_QUARTER
        for t, us in self.tempos:
            if t > tick:
                break
            current = us
        return current

    def signature_at(self, tick: int) -> tuple[int, int]:
        current = DEFAULT_SIGNATURE
        for t, num, den in self.time_signatures:
            if t > tick:
                break
            current = (num, den)
        return current


def tick_to_seconds(tempo_map: TempoMap, tick: int, ppq: int) -> float:
    """Piecewise-linear integration of the tempo map up to `tick`."""
    if tick < 0:
        raise InvariantViolation(f"tick {tick} < 0")
    if ppq <= 0:
        raise InvariantViolation(f"ppq {ppq} <= 0")

    total_us = 0.0
    segment_start = 0
    current_us = DEFAULT_US_PER_QUARTER
    for t, us in tempo_map.tempos:
        if t >= tick:
            break
        if t > segment_start:
            total_us += (t - segment_start) * current_us / ppq
            segment_start = t
        current_us = us  # tempo events at tick 0 replace the default
    total_us += (tick - segment_start) * current_us / ppq
    return total_us / 1_000_000
