"""Windowed step planning over the (track x bar) grid.

Selected tracks are partitioned into consecutive blocks of `tracks_per_step`.
For each block, a window of `model_dim` bars slides from the first selected
bar in strides of `bars_per_step`; the leading `bars_per_step` bars of each
window are the step's regeneration slots, the rest of the window (plus up to
`model_dim - bars_per_step` bars before it, and the other tracks' bars over
the window) is read-only context. Within a step, `percentage` picks how many
of the candidate cells actually regenerate: ceil(percentage/100 x candidates),
chosen uniformly via the request rng.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..errors import EmptySelection
from ..score.piece import BarSelection, Cell
from .params import GlobalParams


@dataclass(frozen=True)
class GenerationStep:
    index: int
    track_block: tuple[int, ...]
    window: tuple[int, int]  # [start, end) bar range, length <= model_dim
    target_cells: frozenset[Cell]
    context_cells: frozenset[Cell]


@dataclass(frozen=True)
class StepPlan:
    steps: tuple[GenerationStep, ...]
    unvisited: frozenset[Cell]  # selected cells no step regenerates

    @property
    def target_cells(self) -> frozenset[Cell]:
        out: set[Cell] = set()
        for step in self.steps:
            out |= step.target_cells
        return frozenset(out)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def plan_steps(
    selection: BarSelection,
    global_params: GlobalParams,
    n_tracks: int,
    n_bars: int,
    rng: random.Random,
) -> StepPlan:
    if len(selection) == 0:
        raise EmptySelection("no cells selected")
    selection.validate(n_tracks, n_bars)

    cells = selection.cells
    tracks = selection.tracks()
    blocks = [
        tuple(tracks[i : i + global_params.tracks_per_step])
        for i in range(0, len(tracks), global_params.tracks_per_step)
    ]
    bar_lo = min(b for _, b in cells)
    bar_hi = max(b for _, b in cells)

    steps: list[GenerationStep] = []
    left_context = global_params.model_dim - global_params.bars_per_step
    for block in blocks:
        start = bar_lo
        while start <= bar_hi:
            window = (start, min(start + global_params.model_dim, n_bars))
            step_bars = range(start, min(start + global_params.bars_per_step, n_bars))
            candidates = sorted(
                (t, b) for t in block for b in step_bars if (t, b) in cells
            )
            if candidates:
                k = _ceil_div(global_params.percentage * len(candidates), 100)
                targets = frozenset(rng.sample(candidates, k)) if k else frozenset()
                if targets:
                    context: set[Cell] = set()
                    for t in range(n_tracks):
                        for b in range(*window):
                            context.add((t, b))
                    for t in block:
                        for b in range(max(0, start - left_context), start):
                            context.add((t, b))
                    context -= targets
                    steps.append(
                        GenerationStep(
                            index=len(steps),
                            track_block=block,
                            window=window,
                            target_cells=targets,
                            context_cells=frozenset(context),
                        )
                    )
            start += global_params.bars_per_step

    if global_params.max_steps > 0:
        steps = steps[: global_params.max_steps]
        steps = [
            GenerationStep(i, s.track_block, s.window, s.target_cells, s.context_cells)
            for i, s in enumerate(steps)
        ]

    visited: set[Cell] = set()
    for step in steps:
        visited |= step.target_cells
    return StepPlan(tuple(steps), frozenset(cells - visited))
