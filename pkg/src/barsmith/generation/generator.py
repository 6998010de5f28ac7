"""The pluggable generator contract and the window view passed to it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import random

from ..midi.notes import NoteEvent
from ..score.piece import Bar, Cell, Track
from .params import DurationClass


@dataclass(frozen=True)
class EffectiveTrackConstraints:
    """Fully-resolved per-track constraints handed to a generator step."""

    track_index: int
    program: int
    is_percussion: bool
    density: int  # resolved, 1-10
    polyphony: tuple[int, int]  # after the hard-limit override
    duration_classes: tuple[DurationClass, ...]
    duration_ticks: tuple[int | None, int | None]


@dataclass(frozen=True)
class WindowView:
    """What a generator sees for one step.

    `notes` covers every cell of the window and the left-context bars; target
    cells carry their pre-generation content so that preservation-style
    generators can echo it. `context_cells` is the read-only subset.
    """

    ppq: int
    bars: tuple[Bar, ...]
    tracks: tuple[Track, ...]  # metadata only; notes come from `notes`
    notes: dict[Cell, tuple[NoteEvent, ...]]
    target_cells: tuple[Cell, ...]
    context_cells: frozenset[Cell]

    def bar(self, index: int) -> Bar:
        for bar in self.bars:
            if bar.index == index:
                return bar
        raise KeyError(index)

    def context_notes(self, track_index: int | None = None) -> list[NoteEvent]:
        """Notes of the context cells, optionally restricted to one track."""
        out: list[NoteEvent] = []
        for (t, b), cell_notes in sorted(self.notes.items()):
            if (t, b) not in self.context_cells:
                continue
            if track_index is not None and t != track_index:
                continue
            out.extend(cell_notes)
        out.sort()
        return out


@runtime_checkable
class Generator(Protocol):
    """A bar-infilling model: fill the target cells given their context."""

    name: str
    version: str

    def generate_cells(
        self,
        window: WindowView,
        constraints: dict[int, EffectiveTrackConstraints],
        temperature: float,
        rng: random.Random,
    ) -> dict[Cell, list[NoteEvent]]:
        """Return notes for every target cell, onsets inside the cell."""
        ...
