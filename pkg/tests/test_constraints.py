"""Hard-constraint enforcement: polyphony sweep and duration clamping."""

import random

import pytest

from barsmith.errors import NoteOutsideCell
from barsmith.generation.constraints import (
    ConstraintReport,
    enforce_constraints,
    max_simultaneous,
)
from barsmith.generation.params import DurationClass, GlobalParams, TrackParams
from barsmith.midi.notes import NoteEvent
from barsmith.score.piece import Bar

BAR = Bar(0, 0, 1920, 4, 4)
PPQ = 480


def enforce(notes, track=None, global_params=None, report=None):
    return enforce_constraints(
        notes,
        track or TrackParams(),
        global_params or GlobalParams(),
        BAR,
        PPQ,
        report=report,
    )


class TestPolyphonyCap:
    def test_latest_onset_dropped(self):
        notes = [
            NoteEvent(0, 60, 1000, 64),
            NoteEvent(100, 64, 1000, 64),
            NoteEvent(200, 67, 1000, 64),
        ]
        out = enforce(notes, global_params=GlobalParams(polyphony_hard_limit=2))
        assert [n.pitch for n in out] == [60, 64]

    def test_chord_tie_break_velocity_then_pitch(self):
        notes = [
            NoteEvent(0, 60, 500, 90),
            NoteEvent(0, 64, 500, 50),
            NoteEvent(0, 67, 500, 50),
        ]
        out = enforce(notes, global_params=GlobalParams(polyphony_hard_limit=2))
        # lowest velocity dropped first; among equal velocity, lowest pitch
        assert [n.pitch for n in out] == [60, 67]

    def test_empty_input(self):
        report = ConstraintReport()
        assert enforce([], report=report) == []
        assert report.dropped_for_polyphony == []
        assert report.density_deviation == 0

    def test_limit_respected_on_random_inputs(self):
        rng = random.Random(5)
        for _ in range(200):
            limit = rng.randint(1, 6)
            notes = [
                NoteEvent(
                    rng.randrange(0, 1920),
                    rng.randint(30, 90),
                    rng.randint(10, 3000),
                    rng.randint(1, 127),
                )
                for _ in range(rng.randint(0, 25))
            ]
            out = enforce(notes, global_params=GlobalParams(polyphony_hard_limit=limit))
            assert max_simultaneous(out) <= limit

    def test_released_notes_free_room(self):
        # half-open intervals: a note ending at t doesn't block an onset at t
        notes = [NoteEvent(0, 60, 100, 64), NoteEvent(100, 62, 100, 64)]
        out = enforce(notes, global_params=GlobalParams(polyphony_hard_limit=1))
        assert len(out) == 2


class TestDurationClamp:
    def test_clamped_to_whole(self):
        track = TrackParams(duration_max=DurationClass.WHOLE)
        out = enforce([NoteEvent(0, 60, 5000, 64)], track=track)
        assert out[0].duration == 1920  # 480 x 4 x 1

    def test_raised_to_min(self):
        track = TrackParams(duration_min=DurationClass.QUARTER)
        report = ConstraintReport()
        out = enforce([NoteEvent(0, 60, 10, 64)], track=track, report=report)
        assert out[0].duration == 480
        assert report.durations_clamped == 1

    def test_any_leaves_duration_alone(self):
        out = enforce([NoteEvent(0, 60, 5000, 64)])
        assert out[0].duration == 5000

    def test_onset_outside_bar_rejected(self):
        with pytest.raises(NoteOutsideCell):
            enforce([NoteEvent(1920, 60, 100, 64)])


class TestSoftReports:
    def test_polyphony_min_shortfall_reported_not_enforced(self):
        track = TrackParams(polyphony_min=3, polyphony_max=6)
        report = ConstraintReport()
        out = enforce([NoteEvent(0, 60, 100, 64)], track=track, report=report)
        assert len(out) == 1  # nothing added
        assert report.polyphony_min_violations == 1

    def test_density_deviation(self):
        report = ConstraintReport()
        notes = [NoteEvent(i * 100, 60 + i, 50, 64) for i in range(4)]
        enforce_constraints(
            notes, TrackParams(), GlobalParams(), BAR, PPQ,
            resolved_density=6, report=report,
        )
        assert report.density_actual == 4
        assert report.density_target == 6
        assert report.density_deviation == -2
