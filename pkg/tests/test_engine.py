"""Batch generation contracts: determinism, frame property, polyphony safety."""

import random

import pytest

from barsmith.errors import GeneratorFailure, PlanEmpty
from barsmith.generation.constraints import max_simultaneous
from barsmith.generation.engine import generate
from barsmith.generation.markov import ContextMarkovGenerator
from barsmith.generation.params import (
    GenerationRequest,
    GlobalParams,
    TrackParams,
)
from barsmith.midi.smf import parse_smf, write_smf
from barsmith.score.piece import BarSelection, notes_in_cell, piece_to_midifile, segment_bars

from helpers import make_piece


def request_for(piece, cells=None, batch_size=1, seed=7, **global_kwargs):
    if cells is None:
        cells = {(t, b) for t in range(piece.n_tracks) for b in range(piece.n_bars)}
    tracks = sorted({t for t, _ in cells})
    return GenerationRequest(
        selection=BarSelection(frozenset(cells)),
        global_params=GlobalParams(**global_kwargs),
        per_track={t: TrackParams(note_density=5) for t in tracks},
        batch_size=batch_size,
        seed=seed,
    )


GEN = ContextMarkovGenerator()


class TestBatchContract:
    def test_exact_batch_size(self):
        piece = make_piece(n_tracks=2, n_bars=4)
        outputs = generate(request_for(piece, batch_size=5), piece, GEN)
        assert len(outputs) == 5

    def test_determinism_same_seed(self):
        piece = make_piece(n_tracks=2, n_bars=4, seed=2)
        request = request_for(piece, batch_size=3, seed=99)
        one = generate(request, piece, GEN)
        two = generate(request, piece, GEN)
        assert [o.piece for o in one] == [o.piece for o in two]
        exports_one = [write_smf(piece_to_midifile(o.piece)) for o in one]
        exports_two = [write_smf(piece_to_midifile(o.piece)) for o in two]
        assert exports_one == exports_two

    def test_items_differ_across_batch(self):
        piece = make_piece(n_tracks=1, n_bars=2)
        outputs = generate(request_for(piece, batch_size=4, seed=1), piece, GEN)
        pieces = [o.piece for o in outputs]
        assert any(pieces[0] != p for p in pieces[1:])

    def test_different_seeds_differ(self):
        piece = make_piece(n_tracks=1, n_bars=2)
        a = generate(request_for(piece, seed=1), piece, GEN)[0]
        b = generate(request_for(piece, seed=2), piece, GEN)[0]
        assert a.piece != b.piece


class TestFrameProperty:
    def test_single_cell_touches_only_that_cell(self):
        piece = make_piece(n_tracks=3, n_bars=4, seed=5)
        request = request_for(piece, cells={(1, 2)}, percentage=100)
        out = generate(request, piece, GEN)[0]
        for t in range(piece.n_tracks):
            for b in range(piece.n_bars):
                if (t, b) == (1, 2):
                    continue
                assert notes_in_cell(out.piece, (t, b)) == notes_in_cell(piece, (t, b))

    def test_random_requests_preserve_non_targets(self):
        rng = random.Random(0)
        for trial in range(25):
            piece = make_piece(
                n_tracks=rng.randint(1, 3),
                n_bars=rng.randint(1, 6),
                notes_per_bar=rng.randint(0, 4),
                seed=trial,
            )
            cells = {
                (rng.randrange(piece.n_tracks), rng.randrange(piece.n_bars))
                for _ in range(rng.randint(1, 5))
            }
            request = request_for(
                piece,
                cells=cells,
                seed=rng.getrandbits(32),
                percentage=rng.choice([40, 100]),
                bars_per_step=rng.randint(1, 2),
                model_dim=rng.randint(2, 4),
            )
            out = generate(request, piece, GEN)[0]
            targets = set()
            for entry in out.step_trace:
                targets.update(entry.target_cells)
            for t in range(piece.n_tracks):
                for b in range(piece.n_bars):
                    if (t, b) in targets:
                        continue
                    assert notes_in_cell(out.piece, (t, b)) == notes_in_cell(
                        piece, (t, b)
                    ), f"cell {(t, b)} changed without being a target"


class TestPolyphonySafety:
    def test_hard_limit_by_sweep_line(self):
        rng = random.Random(3)
        for trial in range(40):
            limit = rng.randint(1, 6)
            piece = make_piece(n_tracks=2, n_bars=3, seed=trial)
            request = request_for(
                piece, seed=trial, polyphony_hard_limit=limit, batch_size=1
            )
            out = generate(request, piece, GEN)[0]
            for entry in out.step_trace:
                for spec in entry.constraints.values():
                    assert spec.polyphony[1] <= limit
            for t, track in enumerate(out.piece.tracks):
                targets = {b for entry in out.step_trace for (tt, b) in entry.target_cells if tt == t}
                generated = [
                    n
                    for b in targets
                    for n in notes_in_cell(out.piece, (t, b))
                ]
                assert max_simultaneous(generated) <= limit


class TestOutputQuality:
    def test_outputs_reparse_identically(self):
        piece = make_piece(n_tracks=2, n_bars=4, seed=8)
        outputs = generate(request_for(piece, batch_size=5, seed=12), piece, GEN)
        for out in outputs:
            back = segment_bars(parse_smf(write_smf(piece_to_midifile(out.piece))))
            assert back == out.piece

    def test_tempo_override_applied(self):
        piece = make_piece(n_tracks=1, n_bars=2, tempo_bpm=90)
        out = generate(request_for(piece, tempo=150), piece, GEN)[0]
        assert out.piece.tempo_map.tempos == ((0, 400_000),)

    def test_support_containment(self):
        # all generated pitches must come from the context pitch set
        piece = make_piece(n_tracks=1, n_bars=4, notes_per_bar=0)
        from barsmith.midi.notes import NoteEvent
        from barsmith.score.piece import replace_cell_notes

        context = [
            NoteEvent(0, 60, 200, 64, piece.tracks[0].channel),
            NoteEvent(240, 64, 200, 64, piece.tracks[0].channel),
            NoteEvent(480, 67, 200, 64, piece.tracks[0].channel),
        ]
        piece = replace_cell_notes(piece, (0, 0), context)
        request = request_for(piece, cells={(0, 1), (0, 2)}, seed=4)
        out = generate(request, piece, GEN)[0]
        for b in (1, 2):
            for note in notes_in_cell(out.piece, (0, b)):
                assert note.pitch in {60, 64, 67}

    def test_empty_context_uses_pentatonic(self):
        piece = make_piece(n_tracks=1, n_bars=2, notes_per_bar=0)
        out = generate(request_for(piece, cells={(0, 0)}, seed=3), piece, GEN)[0]
        generated = notes_in_cell(out.piece, (0, 0))
        assert generated
        assert all(n.pitch in {60, 62, 64, 67, 69} for n in generated)


class TestFailureModes:
    def test_plan_empty_for_percentage_zero(self):
        piece = make_piece()
        with pytest.raises(PlanEmpty):
            generate(request_for(piece, percentage=0), piece, GEN)

    def test_generator_failure_carries_step_index(self):
        class Exploding:
            name = "boom"
            version = "0"

            def generate_cells(self, window, constraints, temperature, rng):
                raise RuntimeError("exploded")

        piece = make_piece(n_tracks=1, n_bars=2)
        with pytest.raises((GeneratorFailure, RuntimeError)):
            generate(request_for(piece), piece, Exploding())

    def test_generator_missing_cell_fails(self):
        class Hollow:
            name = "hollow"
            version = "0"

            def generate_cells(self, window, constraints, temperature, rng):
                return {}

        piece = make_piece(n_tracks=1, n_bars=1)
        with pytest.raises(GeneratorFailure) as err:
            generate(request_for(piece), piece, Hollow())
        assert err.value.step_index == 0


class TestEchoStub:
    def test_echo_generator_reproduces_input(self):
        class Echo:
            name = "echo"
            version = "0"

            def generate_cells(self, window, constraints, temperature, rng):
                return {cell: list(window.notes[cell]) for cell in window.target_cells}

        piece = make_piece(n_tracks=2, n_bars=3, seed=6)
        request = request_for(piece, tempo=120)
        out = generate(request, piece, Echo())[0]
        for t in range(piece.n_tracks):
            for b in range(piece.n_bars):
                assert notes_in_cell(out.piece, (t, b)) == notes_in_cell(piece, (t, b))
