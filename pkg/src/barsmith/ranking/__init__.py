"""Similarity ranking of generated pieces against a reference."""

from .features import FeatureVector, TRACK_BLOCK_SIZE, extract_features
from .rank import RankedEntry, RankedList, distance, rank_outputs

__all__ = [
    "FeatureVector",
    "RankedEntry",
    "RankedList",
    "TRACK_BLOCK_SIZE",
    "distance",
    "extract_features",
    "rank_outputs",
]
