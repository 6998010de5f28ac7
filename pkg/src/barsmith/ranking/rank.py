"""Distance and ranking over feature vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DimensionMismatch, EmptyCandidates
from ..score.piece import Piece
from .features import TRACK_BLOCK_SIZE, FeatureVector, extract_features


@dataclass(frozen=True)
class RankedEntry:
    output_id: str
    distance: float
    rank: int  # 1-based


@dataclass(frozen=True)
class RankedList:
    entries: tuple[RankedEntry, ...]

    def filtered(self, threshold: float) -> tuple[RankedEntry, ...]:
        """Keep entries within the distance threshold; ranks stay as ranked."""
        return tuple(e for e in self.entries if e.distance <= threshold)


def _padded(vector: FeatureVector, n_tracks: int) -> tuple[float, ...]:
    missing = n_tracks - vector.n_tracks
    if missing < 0:
        raise DimensionMismatch("cannot pad down")
    return vector.values + (0.0,) * (missing * TRACK_BLOCK_SIZE)


def distance(a: FeatureVector, b: FeatureVector) -> float:
    """Euclidean distance over track blocks, zero-padded to the wider piece."""
    n = max(a.n_tracks, b.n_tracks)
    va = _padded(a, n)
    vb = _padded(b, n)
    if len(va) != len(vb):
        raise DimensionMismatch(f"{len(va)} vs {len(vb)} dimensions")
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(va, vb)))


def rank_outputs(reference: Piece, candidates: list[tuple[str, Piece]]) -> RankedList:
    """Rank candidates by ascending feature distance to the reference.

    Ties break by ascending output id, so the result is independent of the
    input order.
    """
    if not candidates:
        raise EmptyCandidates("nothing to rank")
    ref = extract_features(reference)
    scored = sorted(
        ((distance(ref, extract_features(piece)), output_id) for output_id, piece in candidates),
    )
    entries = tuple(
        RankedEntry(output_id=output_id, distance=d, rank=i + 1)
        for i, (d, output_id) in enumerate(scored)
    )
    return RankedList(entries)
