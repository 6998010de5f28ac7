"""Per-track statistical features used for similarity ranking.

Each track contributes a 22-dimensional block: a 12-bin pitch-class
histogram, a 7-bin duration-class histogram, notes-per-bar mean and standard
deviation, and the time-weighted mean polyphony. Blocks concatenate in track
order; comparisons zero-pad to the larger track count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..generation.params import DurationClass
from ..score.piece import Piece, Track

TRACK_BLOCK_SIZE = 12 + 7 + 3


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]
    n_tracks: int

    def __len__(self) -> int:
        return len(self.values)


def _pitch_class_histogram(track: Track) -> list[float]:
    counts = [0.0] * 12
    for note in track.notes:
        counts[note.pitch % 12] += 1.0
    total = sum(counts)
    if total == 0:
        return counts
    return [c / total for c in counts]


def _duration_class_histogram(track: Track, ppq: int) -> list[float]:
    """Histogram over the 7-slot duration scale.

    Slot 0 (the "any" position) buckets durations shorter than halfway to a
    thirty-second note; other durations go to the nearest concrete class.
    """
    classes = [c for c in DurationClass if c is not DurationClass.ANY]
    ticks = [c.ticks(ppq) for c in classes]
    counts = [0.0] * 7
    for note in track.notes:
        if note.duration < ticks[0] / 2:
            counts[0] += 1.0
            continue
        best = min(range(len(ticks)), key=lambda i: abs(note.duration - ticks[i]))
        counts[1 + best] += 1.0
    total = sum(counts)
    if total == 0:
        return counts
    return [c / total for c in counts]


def _notes_per_bar(track: Track, piece: Piece) -> tuple[float, float]:
    counts = []
    for bar in piece.bars:
        counts.append(sum(1 for n in track.notes if bar.contains_onset(n.onset)))
    mean = sum(counts) / len(counts)
    variance = sum((c - mean) ** 2 for c in counts) / len(counts)
    return mean, math.sqrt(variance)


def _mean_polyphony(track: Track, piece: Piece) -> float:
    """Time-weighted average of simultaneously sounding notes over the piece."""
    span = piece.end_tick
    if span == 0 or not track.notes:
        return 0.0
    deltas: dict[int, int] = {}
    for note in track.notes:
        deltas[note.onset] = deltas.get(note.onset, 0) + 1
        deltas[min(note.end, span)] = deltas.get(min(note.end, span), 0) - 1
    level = 0
    previous = 0
    weighted = 0.0
    for tick in sorted(deltas):
        weighted += level * (tick - previous)
        level += deltas[tick]
        previous = tick
    weighted += level * (span - previous)
    return weighted / span


def extract_features(piece: Piece) -> FeatureVector:
    """Deterministic feature vector; an empty piece maps to all zeros."""
    values: list[float] = []
    for track in piece.tracks:
        values.extend(_pitch_class_histogram(track))
        values.extend(_duration_class_histogram(track, piece.ppq))
        mean, std = _notes_per_bar(track, piece)
        values.append(mean)
        values.append(std)
        values.append(_mean_polyphony(track, piece))
    return FeatureVector(tuple(values), piece.n_tracks)
