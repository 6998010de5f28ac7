"""Feature extraction and pseudometric ranking (hypothesis-backed properties)."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barsmith.errors import EmptyCandidates
from barsmith.midi.notes import NoteEvent
from barsmith.ranking.features import TRACK_BLOCK_SIZE, FeatureVector, extract_features
from barsmith.ranking.rank import distance, rank_outputs
from barsmith.score.piece import replace_cell_notes

from helpers import make_piece


def vector(values, n_tracks=1):
    return FeatureVector(tuple(values), n_tracks)


class TestFeatures:
    def test_empty_piece_is_zero_vector(self):
        piece = make_piece(n_tracks=1, n_bars=2, notes_per_bar=0)
        features = extract_features(piece)
        assert features.values == (0.0,) * TRACK_BLOCK_SIZE

    def test_single_note_one_hot_pitch_class(self):
        piece = make_piece(n_tracks=1, n_bars=1, notes_per_bar=0)
        piece = replace_cell_notes(piece, (0, 0), [NoteEvent(0, 60, 480, 64, piece.tracks[0].channel)])
        histogram = extract_features(piece).values[:12]
        assert histogram[0] == 1.0  # pitch class C
        assert sum(histogram) == 1.0

    def test_hand_counted_two_bar_piece(self):
        # 3 C's and 1 G across 2 bars: pc histogram 0.75/0.25, 2 notes per bar
        piece = make_piece(n_tracks=1, n_bars=2, notes_per_bar=0)
        channel = piece.tracks[0].channel
        piece = replace_cell_notes(
            piece, (0, 0),
            [NoteEvent(0, 60, 480, 64, channel), NoteEvent(480, 60, 480, 64, channel)],
        )
        piece = replace_cell_notes(
            piece, (0, 1),
            [NoteEvent(1920, 60, 480, 64, channel), NoteEvent(2400, 67, 480, 64, channel)],
        )
        features = extract_features(piece)
        assert features.values[0] == pytest.approx(0.75)  # C
        assert features.values[7] == pytest.approx(0.25)  # G
        mean_index = 12 + 7
        assert features.values[mean_index] == pytest.approx(2.0)

    def test_histograms_normalized(self):
        piece = make_piece(n_tracks=2, n_bars=3, notes_per_bar=4, seed=3)
        features = extract_features(piece)
        for t in range(2):
            base = t * TRACK_BLOCK_SIZE
            assert sum(features.values[base : base + 12]) == pytest.approx(1.0, abs=1e-9)
            assert sum(features.values[base + 12 : base + 19]) == pytest.approx(1.0, abs=1e-9)


finite_floats = st.floats(min_value=-100, max_value=100, allow_nan=False)


class TestDistance:
    def test_identity(self):
        piece = make_piece(seed=1)
        f = extract_features(piece)
        assert distance(f, f) == 0.0

    def test_unit_vectors(self):
        a = vector([1.0] + [0.0] * (TRACK_BLOCK_SIZE - 1))
        b = vector([0.0, 1.0] + [0.0] * (TRACK_BLOCK_SIZE - 2))
        assert distance(a, b) == pytest.approx(2**0.5)

    def test_padding_across_track_counts(self):
        one = extract_features(make_piece(n_tracks=1, seed=2))
        two = extract_features(make_piece(n_tracks=2, seed=2))
        assert distance(one, two) >= 0.0

    @settings(max_examples=200)
    @given(
        st.lists(finite_floats, min_size=5, max_size=5),
        st.lists(finite_floats, min_size=5, max_size=5),
        st.lists(finite_floats, min_size=5, max_size=5),
    )
    def test_pseudometric_properties(self, xs, ys, zs):
        a, b, c = vector(xs), vector(ys), vector(zs)
        assert distance(a, b) >= 0
        assert distance(a, b) == distance(b, a)
        assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9


class TestRanking:
    def test_reference_ranks_first_with_zero_distance(self):
        reference = make_piece(n_tracks=2, n_bars=3, seed=4)
        candidates = [
            ("other", make_piece(n_tracks=2, n_bars=3, seed=5)),
            ("same", reference),
        ]
        ranked = rank_outputs(reference, candidates)
        assert ranked.entries[0].output_id == "same"
        assert ranked.entries[0].distance == 0.0
        assert ranked.entries[0].rank == 1

    def test_permutation_invariance(self):
        reference = make_piece(seed=6)
        candidates = [(f"c{i}", make_piece(seed=10 + i)) for i in range(6)]
        shuffled = candidates[:]
        random.Random(3).shuffle(shuffled)
        assert rank_outputs(reference, candidates) == rank_outputs(reference, shuffled)

    def test_ranks_are_permutation(self):
        reference = make_piece(seed=1)
        candidates = [(f"c{i}", make_piece(seed=i)) for i in range(5)]
        ranked = rank_outputs(reference, candidates)
        assert sorted(e.rank for e in ranked.entries) == [1, 2, 3, 4, 5]
        distances = [e.distance for e in ranked.entries]
        assert distances == sorted(distances)

    def test_tie_break_by_output_id(self):
        reference = make_piece(seed=2)
        twin = make_piece(seed=3)
        ranked = rank_outputs(reference, [("b", twin), ("a", twin)])
        assert [e.output_id for e in ranked.entries] == ["a", "b"]

    def test_threshold_filter(self):
        reference = make_piece(seed=2)
        candidates = [("same", reference), ("far", make_piece(seed=9, notes_per_bar=6))]
        ranked = rank_outputs(reference, candidates)
        kept = ranked.filtered(0.0)
        assert [e.output_id for e in kept] == ["same"]

    def test_empty_candidates(self):
        with pytest.raises(EmptyCandidates):
            rank_outputs(make_piece(), [])

    def test_hand_computed_order(self):
        # build three candidates whose distances are forced by density only
        base = make_piece(n_tracks=1, n_bars=2, notes_per_bar=0)
        channel = base.tracks[0].channel

        def with_notes(count):
            piece = base
            notes = [
                NoteEvent(i * 100, 60, 90, 64, channel) for i in range(count)
            ]
            return replace_cell_notes(piece, (0, 0), notes)

        reference = with_notes(4)
        near, mid, far = with_notes(4), with_notes(6), with_notes(12)
        ranked = rank_outputs(reference, [("far", far), ("near", near), ("mid", mid)])
        assert [e.output_id for e in ranked.entries] == ["near", "mid", "far"]
