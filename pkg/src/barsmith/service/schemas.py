"""Pydantic request/response models for the REST API.

These mirror the canonical document shapes; range semantics live in the
engine's parameter types, which re-validate on conversion so API bounds can
never drift from engine bounds.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..generation.params import (
    DurationClass,
    GenerationRequest,
    GlobalParams,
    TrackParams,
)
from ..score.piece import BarSelection
from .. import constants


class NoteDoc(BaseModel):
    onset: int
    duration: int
    pitch: int
    velocity: int
    channel: int = 0


class TempoMapDoc(BaseModel):
    tempos: list[list[int]] = Field(default_factory=list)
    time_signatures: list[list[int]] = Field(default_factory=list)


class BarDoc(BaseModel):
    index: int
    start: int
    end: int
    numerator: int
    denominator: int


class TrackDoc(BaseModel):
    name: str = ""
    channel: int = 0
    program: int = 0
    is_percussion: bool = False
    instrument_group: int = 0
    notes: list[NoteDoc] = Field(default_factory=list)


class PieceDoc(BaseModel):
    ppq: int
    tempo_map: TempoMapDoc
    bars: list[BarDoc]
    tracks: list[TrackDoc]


class SessionDoc(BaseModel):
    id: str
    created_at: str
    parent_output: str | None = None
    piece: PieceDoc


class TrackParamsDoc(BaseModel):
    """Per-track generation controls; instrument by program or by group."""

    program: int | None = None
    group: int | None = None
    note_density: int = 0
    polyphony_min: int = 0
    polyphony_max: int = 6
    duration_min: str = "any"
    duration_max: str = "any"

    def to_engine(self) -> TrackParams:
        instrument = None
        is_group = False
        if self.group is not None:
            instrument, is_group = self.group, True
        elif self.program is not None:
            instrument = self.program
        return TrackParams(
            instrument=instrument,
            instrument_is_group=is_group,
            note_density=self.note_density,
            polyphony_min=self.polyphony_min,
            polyphony_max=self.polyphony_max,
            duration_min=DurationClass.from_label(self.duration_min),
            duration_max=DurationClass.from_label(self.duration_max),
        )


class GlobalParamsDoc(BaseModel):
    temperature: float = 1.0
    polyphony_hard_limit: int = 6
    percentage: int = 100
    model_dim: int = constants.MODEL_DIM_DEFAULT
    tracks_per_step: int = constants.TRACKS_PER_STEP_DEFAULT
    bars_per_step: int = constants.BARS_PER_STEP_DEFAULT
    max_steps: int = 0
    tempo: int = constants.TEMPO_DEFAULT

    def to_engine(self) -> GlobalParams:
        return GlobalParams(**self.model_dump())


class GenerateRequestDoc(BaseModel):
    selection: list[tuple[int, int]]
    global_params: GlobalParamsDoc = Field(default_factory=GlobalParamsDoc)
    per_track: dict[int, TrackParamsDoc] = Field(default_factory=dict)
    batch_size: int = 1
    seed: int = 0

    def to_engine(self) -> GenerationRequest:
        return GenerationRequest(
            selection=BarSelection(frozenset((t, b) for t, b in self.selection)),
            global_params=self.global_params.to_engine(),
            per_track={i: p.to_engine() for i, p in self.per_track.items()},
            batch_size=self.batch_size,
            seed=self.seed,
        )


class OutputSummaryDoc(BaseModel):
    id: str
    seed: int
    distance: float | None = None
    rank: int | None = None


class BatchDoc(BaseModel):
    id: str
    session_id: str
    status: str  # pending | running | done | failed
    created_at: str
    request: GenerateRequestDoc
    outputs: list[OutputSummaryDoc] = Field(default_factory=list)
    timing_seconds: float | None = None
    error: str | None = None
    failed_step: int | None = None


class OutputDoc(BaseModel):
    id: str
    batch_id: str
    session_id: str
    seed: int
    distance: float | None = None
    rank: int | None = None
    piece: PieceDoc


class RankingEntryDoc(BaseModel):
    output_id: str
    distance: float
    rank: int


class RankingDoc(BaseModel):
    batch_id: str
    threshold: float | None = None
    entries: list[RankingEntryDoc]


class TrackPatchDoc(BaseModel):
    name: str | None = None
    channel: int | None = None
    program: int | None = None
    is_percussion: bool | None = None


class TrackCreateDoc(BaseModel):
    name: str = ""
    channel: int = 0
    program: int = 0
    is_percussion: bool | None = None


class PlaybackStartDoc(BaseModel):
    tempo_override: int | None = None
    output_id: str | None = None  # audition a generated output over the session channel


class ErrorDoc(BaseModel):
    detail: str
