"""Built-in stochastic generator conditioned on the surrounding context.

Pitch choices come from an order-1 transition table estimated over the
context notes, so generated pitches never leave the context's pitch set.
With no context anywhere, it falls back to a pentatonic set around middle C.
Rhythm comes from a sixteenth-note occupancy grid estimated the same way.
"""

from __future__ import annotations

import random
from collections import Counter
from statistics import median

from ..midi.notes import NoteEvent
from ..score.piece import Cell
from .generator import EffectiveTrackConstraints, WindowView
from .sampling import temperature_sample

PENTATONIC_OFFSETS = (0, 2, 4, 7, 9)  # major pentatonic
FALLBACK_ROOT = 60  # middle C


def pentatonic_set(root: int) -> list[int]:
    return [min(127, max(0, root + o)) for o in PENTATONIC_OFFSETS]


class ContextMarkovGenerator:
    """Deterministic given (window, constraints, temperature, rng state)."""

    name = "context-markov"
    version = "1"

    def generate_cells(
        self,
        window: WindowView,
        constraints: dict[int, EffectiveTrackConstraints],
        temperature: float,
        rng: random.Random,
    ) -> dict[Cell, list[NoteEvent]]:
        out: dict[Cell, list[NoteEvent]] = {}
        for cell in sorted(window.target_cells):
            track_index, bar_index = cell
            spec = constraints[track_index]
            out[cell] = self._fill_cell(window, cell, spec, temperature, rng)
        return out

    def _model_for_track(self, window: WindowView, track_index: int):
        """(support, transitions, onset_grid_weights, velocities, last_pitch)."""
        own = window.context_notes(track_index)
        source = own if own else window.context_notes()
        if source:
            pitches = [n.pitch for n in source]
            support = sorted(set(pitches))
            transitions: dict[int, Counter] = {}
            ordered = sorted(source, key=lambda n: (n.onset, n.pitch))
            for prev, cur in zip(ordered, ordered[1:]):
                transitions.setdefault(prev.pitch, Counter())[cur.pitch] += 1
            frequency = Counter(pitches)
            velocities = [n.velocity for n in source]
        else:
            support = pentatonic_set(FALLBACK_ROOT)
            transitions = {}
            frequency = Counter(support)
            velocities = [80]
        return support, transitions, frequency, velocities

    def _grid_weights(
        self, window: WindowView, track_index: int, slots: int, ppq: int
    ) -> list[float]:
        """Occupancy of sixteenth-note slots among context onsets."""
        step = max(1, ppq // 4)
        counts = [1.0] * slots  # add-one smoothing keeps every slot reachable
        source = window.context_notes(track_index) or window.context_notes()
        for note in source:
            bar = None
            for b in window.bars:
                if b.contains_onset(note.onset):
                    bar = b
                    break
            if bar is None:
                continue
            slot = (note.onset - bar.start) // step
            if 0 <= slot < slots:
                counts[slot] += 1.0
        return counts

    def _fill_cell(
        self,
        window: WindowView,
        cell: Cell,
        spec: EffectiveTrackConstraints,
        temperature: float,
        rng: random.Random,
    ) -> list[NoteEvent]:
        track_index, bar_index = cell
        bar = window.bar(bar_index)
        ppq = window.ppq
        track = window.tracks[track_index]

        support, transitions, frequency, velocities = self._model_for_track(
            window, track_index
        )

        beats = (bar.end - bar.start) / ppq
        density_target = max(1, round(spec.density * beats / 2))
        count = max(1, density_target + rng.choice((-1, 0, 0, 1)))

        step = max(1, ppq // 4)
        slots = max(1, (bar.end - bar.start) // step)
        grid = self._grid_weights(window, track_index, slots, ppq)

        poly_lo = max(1, spec.polyphony[0])
        poly_hi = max(poly_lo, spec.polyphony[1])
        classes = spec.duration_classes or ()
        vel_center = round(median(velocities))

        # seed the chain with the last context pitch before this bar
        current: int | None = None
        for note in window.context_notes(track_index):
            if note.onset < bar.start:
                current = note.pitch
            else:
                break

        notes: list[NoteEvent] = []
        used_slots: set[int] = set()
        placed = 0
        while placed < count and len(used_slots) < slots:
            open_slots = [s for s in range(slots) if s not in used_slots]
            weights = [grid[s] for s in open_slots]
            slot = open_slots[temperature_sample(weights, temperature, rng)]
            used_slots.add(slot)
            onset = bar.start + slot * step

            chord_sizes = list(range(poly_lo, poly_hi + 1))
            size = chord_sizes[
                temperature_sample([1.0] * len(chord_sizes), temperature, rng)
            ]
            size = min(size, len(support))

            base = self._next_pitch(current, support, transitions, frequency, temperature, rng)
            chord = [base]
            pool = [p for p in support if p != base]
            while len(chord) < size and pool:
                weights = [float(frequency[p]) for p in pool]
                if not any(w > 0 for w in weights):
                    weights = [1.0] * len(pool)
                pick = pool.pop(temperature_sample(weights, temperature, rng))
                chord.append(pick)
            current = base

            for pitch in chord:
                if classes:
                    cls = classes[temperature_sample([1.0] * len(classes), temperature, rng)]
                    duration = cls.ticks(ppq)
                else:
                    duration = ppq
                velocity = min(127, max(1, vel_center + rng.randint(-8, 8)))
                notes.append(NoteEvent(onset, pitch, duration, velocity, track.channel))
                placed += 1

        notes.sort()
        return notes

    def _next_pitch(
        self,
        current: int | None,
        support: list[int],
        transitions: dict[int, Counter],
        frequency: Counter,
        temperature: float,
        rng: random.Random,
    ) -> int:
        row = transitions.get(current) if current is not None else None
        if row:
            choices = sorted(row)
            weights = [float(row[p]) for p in choices]
        else:
            choices = support
            weights = [float(frequency[p]) if frequency[p] > 0 else 1.0 for p in support]
        return choices[temperature_sample(weights, temperature, rng)]
