"""FastAPI application exposing the composition engine."""

from __future__ import annotations

import json
import queue

from fastapi import FastAPI, File, Request, Response, UploadFile
from fastapi.responses import JSONResponse, StreamingResponse

from .. import constants
from ..errors import (
    BarsmithError,
    InvalidParams,
    InvariantViolation,
    MidiError,
    NotFound,
    StorageError,
)
from .config import AppConfig
from .manager import SessionService
from .schemas import (
    BatchDoc,
    GenerateRequestDoc,
    OutputDoc,
    PieceDoc,
    PlaybackStartDoc,
    RankingDoc,
    SessionDoc,
    TrackCreateDoc,
    TrackPatchDoc,
)


def create_app(config: AppConfig | None = None, service: SessionService | None = None) -> FastAPI:
    service = service or SessionService(config)
    app = FastAPI(title="Barsmith", version="0.1.0")
    app.state.service = service

    @app.exception_handler(NotFound)
    async def not_found(_: Request, exc: NotFound):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(MidiError)
    async def midi_error(_: Request, exc: MidiError):
        return JSONResponse(
            status_code=400,
            content={"detail": f"{type(exc).__name__}: {exc}"},
        )

    @app.exception_handler(InvalidParams)
    async def invalid_params(_: Request, exc: InvalidParams):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(InvariantViolation)
    async def invariant_violation(_: Request, exc: InvariantViolation):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(StorageError)
    async def storage_error(_: Request, exc: StorageError):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.exception_handler(BarsmithError)
    async def engine_error(_: Request, exc: BarsmithError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/constants")
    def get_constants():
        return constants.bounds_document()

    # -- sessions ----------------------------------------------------------

    @app.post("/sessions", response_model=SessionDoc)
    def create_session(file: UploadFile = File(...)):
        return service.create_session(file.file.read())

    @app.get("/sessions/{session_id}", response_model=SessionDoc)
    def get_session(session_id: str):
        return service.get_session(session_id)

    @app.get("/sessions/{session_id}/piece", response_model=PieceDoc)
    def get_piece(session_id: str):
        return service.get_session(session_id)["piece"]

    @app.get("/sessions/{session_id}/midi")
    def export_session(session_id: str):
        data = service.export_session_midi(session_id)
        return Response(content=data, media_type="audio/midi")

    # -- track edits ---------------------------------------------------------

    @app.patch("/sessions/{session_id}/tracks/{index}", response_model=PieceDoc)
    def patch_track(session_id: str, index: int, patch: TrackPatchDoc):
        return service.patch_track(
            session_id, index, **patch.model_dump(exclude_none=True)
        )

    @app.post("/sessions/{session_id}/tracks", response_model=PieceDoc)
    def create_track(session_id: str, track: TrackCreateDoc):
        return service.create_track(session_id, **track.model_dump())

    @app.delete("/sessions/{session_id}/tracks/{index}", response_model=PieceDoc)
    def delete_track(session_id: str, index: int):
        return service.remove_track(session_id, index)

    # -- generation ----------------------------------------------------------

    @app.post("/sessions/{session_id}/generate", response_model=BatchDoc)
    def generate(session_id: str, request: GenerateRequestDoc):
        engine_request = request.to_engine()  # InvalidParams -> 422
        return service.request_generation(
            session_id, engine_request, request.model_dump()
        )

    @app.get("/batches/{batch_id}", response_model=BatchDoc)
    def get_batch(batch_id: str):
        return service.get_batch(batch_id)

    @app.get("/batches/{batch_id}/ranking", response_model=RankingDoc)
    def get_ranking(batch_id: str, threshold: float | None = None):
        return service.get_ranking(batch_id, threshold)

    # -- outputs -------------------------------------------------------------

    @app.get("/outputs/{output_id}", response_model=OutputDoc)
    def get_output(output_id: str):
        return service.get_output(output_id)

    @app.post("/outputs/{output_id}/promote", response_model=SessionDoc)
    def promote(output_id: str):
        return service.promote_output(output_id)

    @app.get("/outputs/{output_id}/midi")
    def export_output(output_id: str):
        data = service.export_output_midi(output_id)
        return Response(content=data, media_type="audio/midi")

    # -- playback and events --------------------------------------------------

    @app.post("/sessions/{session_id}/playback")
    def start_playback(session_id: str, body: PlaybackStartDoc | None = None):
        body = body or PlaybackStartDoc()
        count = service.start_playback(
            session_id, body.tempo_override, body.output_id
        )
        return {"status": "playing", "events": count}

    @app.post("/sessions/{session_id}/playback/stop")
    def stop_playback(session_id: str):
        service.stop_playback(session_id)
        return {"status": "stopped"}

    @app.get("/sessions/{session_id}/events")
    def event_stream(session_id: str, limit: int | None = None):
        """Server-sent events; `limit` closes the stream after that many events."""
        service.get_session(session_id)  # 404 for unknown sessions

        def streamer():
            q = service.events.subscribe(session_id)
            sent = 0
            try:
                while limit is None or sent < limit:
                    try:
                        doc = q.get(timeout=15.0)
                    except queue.Empty:
                        yield ": keepalive\n\n"
                        continue
                    yield f"data: {json.dumps(doc)}\n\n"
                    sent += 1
            finally:
                service.events.unsubscribe(session_id, q)

        return StreamingResponse(streamer(), media_type="text/event-stream")

    return app
