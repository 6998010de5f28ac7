"""Batch generation: execute a step plan against a piece with a generator.

Each batch item runs from its own derived seed (SplitMix64 over seed+index),
so the whole batch is reproducible from (request, piece) while items stay
decorrelated. Steps run in plan order; later steps see earlier regenerated
content as context.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from ..errors import BarsmithError, GeneratorFailure, PlanEmpty
from ..midi.notes import NoteEvent
from ..midi.timing import TempoMap, bpm_to_us_per_quarter
from ..score.piece import Cell, Piece, notes_in_cell, replace_cell_notes
from .constraints import ConstraintReport, duration_bounds_ticks, enforce_constraints
from .generator import EffectiveTrackConstraints, Generator, WindowView
from .params import GenerationRequest, effective_polyphony, resolve_density
from .planner import GenerationStep, StepPlan, plan_steps
from .sampling import mix_seed


@dataclass(frozen=True)
class StepTraceEntry:
    step_index: int
    track_block: tuple[int, ...]
    window: tuple[int, int]
    target_cells: tuple[Cell, ...]
    constraints: dict[int, EffectiveTrackConstraints]
    reports: dict[Cell, ConstraintReport]


@dataclass(frozen=True)
class GeneratedOutput:
    piece: Piece
    seed: int  # the derived per-item seed
    step_trace: tuple[StepTraceEntry, ...]
    unvisited_cells: frozenset[Cell]


def _resolve_constraints(
    request: GenerationRequest, piece: Piece, rng: random.Random
) -> dict[int, EffectiveTrackConstraints]:
    """Resolve per-track constraints once per batch item (densities included)."""
    resolved: dict[int, EffectiveTrackConstraints] = {}
    for track_index in request.selection.tracks():
        params = request.per_track[track_index]
        track = piece.tracks[track_index]
        resolved[track_index] = EffectiveTrackConstraints(
            track_index=track_index,
            program=params.resolve_program(track.program),
            is_percussion=track.is_percussion,
            density=resolve_density(params.note_density, rng),
            polyphony=effective_polyphony(params, request.global_params),
            duration_classes=params.allowed_duration_classes(),
            duration_ticks=duration_bounds_ticks(params, piece.ppq),
        )
    return resolved


def _window_view(piece: Piece, step: GenerationStep) -> WindowView:
    bar_indices = {b for _, b in step.context_cells} | {b for _, b in step.target_cells}
    cells = set(step.context_cells) | set(step.target_cells)
    notes = {cell: tuple(notes_in_cell(piece, cell)) for cell in cells}
    return WindowView(
        ppq=piece.ppq,
        bars=tuple(piece.bars[b] for b in sorted(bar_indices)),
        tracks=tuple(replace(t, notes=()) for t in piece.tracks),
        notes=notes,
        target_cells=tuple(sorted(step.target_cells)),
        context_cells=step.context_cells,
    )


def _clip_to_piece_end(notes: list[NoteEvent], end_tick: int) -> list[NoteEvent]:
    """Generated sustains stop at the final barline so exports re-segment cleanly."""
    out = []
    for note in notes:
        if note.end > end_tick:
            note = replace(note, duration=max(1, end_tick - note.onset))
        out.append(note)
    return out


def _cap_track_polyphony(
    notes: tuple[NoteEvent, ...],
    is_mutable,
    limit: int,
) -> tuple[NoteEvent, ...]:
    """Whole-track sweep so cross-bar sustains respect the hard limit.

    Per-cell enforcement cannot see a note sustaining in from an earlier bar.
    At an overflow instant, incoming mutable notes are dropped first (lowest
    velocity, then lowest pitch); if immovable incoming notes still overflow,
    sustaining mutable notes are truncated at the instant. Context-only
    violations are left alone.
    """
    ordered = sorted(notes)
    out: list[NoteEvent] = []
    active: list[NoteEvent] = []
    i = 0
    while i < len(ordered):
        onset = ordered[i].onset
        chord: list[NoteEvent] = []
        while i < len(ordered) and ordered[i].onset == onset:
            chord.append(ordered[i])
            i += 1
        active = [n for n in active if n.end > onset]
        over = len(chord) - (limit - len(active))
        if over > 0:
            droppable = sorted(
                (n for n in chord if is_mutable(n)), key=lambda n: (n.velocity, n.pitch)
            )
            for note in droppable[: min(over, len(droppable))]:
                chord.remove(note)
                over -= 1
            if over > 0:
                sustaining = sorted(
                    (n for n in active if is_mutable(n)),
                    key=lambda n: (-n.onset, n.velocity, n.pitch),
                )
                for note in sustaining[: min(over, len(sustaining))]:
                    active.remove(note)
                    out.remove(note)
                    out.append(replace(note, duration=onset - note.onset))
                    over -= 1
        out.extend(chord)
        active.extend(chord)
    return tuple(sorted(out))


def _repair_same_pitch_nesting(
    piece: Piece, target_cells: frozenset[Cell]
) -> Piece:
    """Make each track's same-pitch intervals FIFO-writable.

    SMF note-off pairing cannot represent a note strictly nested inside
    another note of the same pitch and channel. Only generated notes (those
    in target cells) are truncated or dropped; context cells stay untouched.
    """
    tracks = list(piece.tracks)
    for track_index, track in enumerate(tracks):
        target_bars = {b for t, b in target_cells if t == track_index}
        if not target_bars:
            continue

        def mutable(note: NoteEvent) -> bool:
            return piece.bar_of_tick(note.onset) in target_bars

        by_pitch: dict[int, list[NoteEvent]] = {}
        for note in track.notes:
            by_pitch.setdefault(note.pitch, []).append(note)

        changed = False
        result: list[NoteEvent] = []
        for pitch, notes in by_pitch.items():
            notes = sorted(notes, key=lambda n: (n.onset, n.end))
            # truncate generated notes that strictly contain a later note
            for i, note in enumerate(notes):
                if not mutable(note):
                    continue
                later_ends = [
                    n.end for n in notes[i + 1 :] if n.onset > note.onset and n.end < note.end
                ]
                if later_ends:
                    notes[i] = replace(note, duration=min(later_ends) - note.onset)
                    changed = True
            # drop generated notes strictly nested inside an earlier note
            kept: list[NoteEvent] = []
            max_end = -1
            for note in sorted(notes, key=lambda n: (n.onset, n.end)):
                if note.end < max_end and mutable(note):
                    changed = True
                    continue
                max_end = max(max_end, note.end)
                kept.append(note)
            result.extend(kept)

        if changed:
            tracks[track_index] = replace(track, notes=tuple(sorted(result)))
    return replace(piece, tracks=tuple(tracks))


def _generate_one(
    request: GenerationRequest,
    piece: Piece,
    generator: Generator,
    index: int,
) -> GeneratedOutput:
    seed = mix_seed(request.seed, index)
    rng = random.Random(seed)
    plan = plan_steps(
        request.selection, request.global_params, piece.n_tracks, piece.n_bars, rng
    )
    constraints = _resolve_constraints(request, piece, rng)

    working = piece
    trace: list[StepTraceEntry] = []
    for step in plan.steps:
        view = _window_view(working, step)
        step_constraints = {t: constraints[t] for t in step.track_block}
        try:
            produced = generator.generate_cells(
                view, step_constraints, request.global_params.temperature, rng
            )
        except BarsmithError as exc:
            raise GeneratorFailure(
                f"generator failed at step {step.index}: {exc}", step.index
            ) from exc

        reports: dict[Cell, ConstraintReport] = {}
        for cell in sorted(step.target_cells):
            if cell not in produced:
                raise GeneratorFailure(
                    f"generator returned nothing for cell {cell} at step {step.index}",
                    step.index,
                )
            track_index, bar_index = cell
            report = ConstraintReport()
            try:
                cleaned = enforce_constraints(
                    list(produced[cell]),
                    request.per_track[track_index],
                    request.global_params,
                    working.bars[bar_index],
                    working.ppq,
                    resolved_density=constraints[track_index].density,
                    report=report,
                )
            except BarsmithError as exc:
                raise GeneratorFailure(
                    f"bad generator output for cell {cell}: {exc}", step.index
                ) from exc
            cleaned = _clip_to_piece_end(cleaned, working.end_tick)
            working = replace_cell_notes(working, cell, cleaned)
            reports[cell] = report

        generated_bars: dict[int, set[int]] = {}
        for entry in trace:
            for t, b in entry.target_cells:
                generated_bars.setdefault(t, set()).add(b)
        for t, b in step.target_cells:
            generated_bars.setdefault(t, set()).add(b)
        limit = request.global_params.polyphony_hard_limit
        for track_index in sorted({t for t, _ in step.target_cells}):
            bars = generated_bars[track_index]
            track = working.tracks[track_index]
            capped = _cap_track_polyphony(
                track.notes,
                lambda n: working.bar_of_tick(n.onset) in bars,
                limit,
            )
            if capped != track.notes:
                tracks = list(working.tracks)
                tracks[track_index] = replace(track, notes=capped)
                working = replace(working, tracks=tuple(tracks))

        trace.append(
            StepTraceEntry(
                step_index=step.index,
                track_block=step.track_block,
                window=step.window,
                target_cells=tuple(sorted(step.target_cells)),
                constraints=step_constraints,
                reports=reports,
            )
        )

    working = _repair_same_pitch_nesting(working, plan.target_cells)
    tempo_map = TempoMap(
        tempos=((0, bpm_to_us_per_quarter(request.global_params.tempo)),),
        time_signatures=working.tempo_map.time_signatures,
    )
    working = replace(working, tempo_map=tempo_map, warnings=())
    return GeneratedOutput(
        piece=working,
        seed=seed,
        step_trace=tuple(trace),
        unvisited_cells=plan.unvisited,
    )


def generate(
    request: GenerationRequest, piece: Piece, generator: Generator
) -> list[GeneratedOutput]:
    """Produce exactly `batch_size` outputs, reproducible from (request, piece)."""
    request.validate_against(piece)
    probe = plan_steps(
        request.selection,
        request.global_params,
        piece.n_tracks,
        piece.n_bars,
        random.Random(0),
    )
    if not probe.steps:
        raise PlanEmpty(
            "the plan regenerates no cells (percentage 0 or selection outside windows)"
        )
    return [
        _generate_one(request, piece, generator, k) for k in range(request.batch_size)
    ]
