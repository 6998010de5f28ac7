"""Hard and soft constraint enforcement on generated notes."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import NoteOutsideCell
from ..midi.notes import NoteEvent
from ..score.piece import Bar
from .params import DurationClass, GlobalParams, TrackParams, effective_polyphony


@dataclass
class ConstraintReport:
    """What enforcement changed, plus soft-constraint deviations."""

    dropped_for_polyphony: list[NoteEvent] = field(default_factory=list)
    durations_clamped: int = 0
    density_target: int | None = None
    density_actual: int = 0
    polyphony_min_violations: int = 0  # onsets sounding below the soft minimum

    @property
    def density_deviation(self) -> int:
        if self.density_target is None:
            return 0
        return self.density_actual - self.density_target


def duration_bounds_ticks(track: TrackParams, ppq: int) -> tuple[int | None, int | None]:
    """Tick bounds of the allowed duration range; None means unbounded."""
    lo = None
    hi = None
    if track.duration_min is not DurationClass.ANY:
        lo = track.duration_min.ticks(ppq)
    if track.duration_max is not DurationClass.ANY:
        hi = track.duration_max.ticks(ppq)
    return lo, hi


def _cap_polyphony(
    notes: list[NoteEvent], limit: int, report: ConstraintReport
) -> list[NoteEvent]:
    """Sweep onsets in order, dropping overflow notes.

    Drop order at an overflow instant: latest onset first, then lowest
    velocity, then lowest pitch. Earlier (still sounding) notes always
    survive over the incoming chord.
    """
    kept: list[NoteEvent] = []
    active: list[NoteEvent] = []
    i = 0
    ordered = sorted(notes)
    while i < len(ordered):
        onset = ordered[i].onset
        chord = []
        while i < len(ordered) and ordered[i].onset == onset:
            chord.append(ordered[i])
            i += 1
        active = [n for n in active if n.end > onset]
        room = limit - len(active)
        if room < len(chord):
            # drop candidates first: lowest velocity, then lowest pitch
            chord.sort(key=lambda n: (n.velocity, n.pitch))
            drop = max(0, len(chord) - max(0, room))
            report.dropped_for_polyphony.extend(chord[:drop])
            chord = chord[drop:]
        kept.extend(chord)
        active.extend(chord)
    return sorted(kept)


def enforce_constraints(
    notes: list[NoteEvent],
    track: TrackParams,
    global_params: GlobalParams,
    bar: Bar,
    ppq: int,
    resolved_density: int | None = None,
    report: ConstraintReport | None = None,
) -> list[NoteEvent]:
    """Apply hard constraints to one cell's notes.

    Hard: the polyphony hard limit (by sweep) and the duration range (by
    clamping into [min, max] ticks). Soft: density and the polyphony minimum
    are measured into `report`, never enforced by mutation.
    """
    if report is None:
        report = ConstraintReport()
    for note in notes:
        if not bar.contains_onset(note.onset):
            raise NoteOutsideCell(
                f"onset {note.onset} outside bar [{bar.start}, {bar.end})"
            )

    lo, hi = duration_bounds_ticks(track, ppq)
    clamped: list[NoteEvent] = []
    for note in notes:
        duration = note.duration
        if lo is not None and duration < lo:
            duration = lo
        if hi is not None and duration > hi:
            duration = hi
        if duration != note.duration:
            report.durations_clamped += 1
            note = replace(note, duration=duration)
        clamped.append(note)

    result = _cap_polyphony(clamped, global_params.polyphony_hard_limit, report)

    poly_min, _ = effective_polyphony(track, global_params)
    if poly_min > 0:
        onsets = sorted({n.onset for n in result})
        for onset in onsets:
            sounding = sum(1 for n in result if n.onset <= onset < n.end)
            if sounding < poly_min:
                report.polyphony_min_violations += 1

    report.density_target = resolved_density
    report.density_actual = len(result)
    return result


def max_simultaneous(notes: list[NoteEvent]) -> int:
    """Sweep-line maximum of concurrently sounding notes (test oracle too)."""
    events: list[tuple[int, int]] = []
    for n in notes:
        events.append((n.onset, 1))
        events.append((n.end, -1))
    events.sort()
    level = peak = 0
    for _, delta in events:
        level += delta
        peak = max(peak, level)
    return peak
