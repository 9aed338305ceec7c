"""HTTP service: campaign management, message ingestion (the channel-adapter
stand-in for a messaging platform), leaderboards, and analytics reports."""

from __future__ import annotations

import uuid
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import analytics
from .campaign import Campaign, CampaignStore, create_campaign, parse_ts
from .config import ServiceConfig
from .contour import ContourVector, contour_from_silhouette, load_pgm
from .conversation import ConversationEngine, IntentClassifier
from .errors import (
    CampaignClosed,
    NoAttempts,
    NoMessages,
    NotRegistered,
    RecordingRejected,
    TranscriptionUnavailable,
    UnknownCampaign,
    UnknownUser,
    VocalizeError,
)
from .scoring import (
    HttpTranscriptionProvider,
    MapTranscriptionProvider,
    ScoringConfig,
)

MAX_UPLOAD_BYTES = 10 * 1024 * 1024

_STATUS = {
    UnknownCampaign: 404,
    UnknownUser: 404,
    CampaignClosed: 409,
    RecordingRejected: 422,
    TranscriptionUnavailable: 503,
    NoAttempts: 404,
    NoMessages: 404,
}


def _error_response(exc: VocalizeError) -> JSONResponse:
    status = 400
    for klass, code in _STATUS.items():
        if isinstance(exc, klass):
            status = code
            break
    return JSONResponse(
        status_code=status, content={"error": exc.code, "message": str(exc)}
    )


def build_transcriber(config: ServiceConfig):
    if config.transcription_endpoint:
        return HttpTranscriptionProvider(
            config.transcription_endpoint, config.transcription_token or None
        )
    if config.transcripts_file:
        return MapTranscriptionProvider.from_json(
            Path(config.transcripts_file).read_bytes()
        )
    return MapTranscriptionProvider()


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = CampaignStore(config.data_dir)
    transcriber = build_transcriber(config)
    classifier = IntentClassifier(threshold=config.intent_threshold)
    engines: dict[str, ConversationEngine] = {}

    app = FastAPI(title="vocalize")
    app.state.store = store
    app.state.config = config

    def engine_for(campaign_id: str) -> ConversationEngine:
        if campaign_id not in engines:
            engines[campaign_id] = ConversationEngine(
                store.get(campaign_id),
                classifier=classifier,
                transcriber=transcriber,
            )
        return engines[campaign_id]

    @app.exception_handler(VocalizeError)
    async def vocalize_error_handler(request: Request, exc: VocalizeError):
        return _error_response(exc)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/campaigns")
    def post_campaign(body: dict):
        try:
            contour_spec = body["contour"]
            if "bins" in contour_spec:
                contour = ContourVector(
                    bins=tuple(contour_spec["bins"]),
                    label=contour_spec.get("label", ""),
                )
            elif "pgm_base64" in contour_spec:
                import base64

                image = load_pgm(base64.b64decode(contour_spec["pgm_base64"]))
                contour = contour_from_silhouette(
                    image,
                    threshold=int(contour_spec.get("threshold", 128)),
                    label=contour_spec.get("label", ""),
                )
            else:
                raise VocalizeError("contour must supply bins or pgm_base64")
            campaign = create_campaign(
                campaign_id=body.get("id") or f"c-{uuid.uuid4().hex[:12]}",
                catch_phrase=body["catch_phrase"],
                contour=contour,
                scoring=ScoringConfig.from_dict(body.get("scoring", {})),
                starts_at=parse_ts(body["starts_at"]),
                ends_at=parse_ts(body["ends_at"]),
                min_s=float(body.get("min_s", config.min_s)),
                max_s=float(body.get("max_s", config.max_s)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            return JSONResponse(
                status_code=400,
                content={"error": "invalid_request", "message": str(exc)},
            )
        store.create(campaign)
        return campaign.to_dict()

    @app.get("/campaigns/{campaign_id}")
    def get_campaign(campaign_id: str):
        return store.get(campaign_id).campaign.to_dict()

    @app.post("/campaigns/{campaign_id}/messages")
    async def post_message(campaign_id: str, request: Request):
        engine = engine_for(campaign_id)
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/"):
            form = await request.form()
            user_id = str(form.get("user_id", ""))
            upload = form.get("file")
            if not user_id or upload is None:
                return JSONResponse(
                    status_code=400,
                    content={"error": "invalid_request",
                             "message": "multipart needs user_id and file"},
                )
            wav_bytes = await upload.read()
            if len(wav_bytes) > MAX_UPLOAD_BYTES:
                return JSONResponse(
                    status_code=400,
                    content={"error": "invalid_request",
                             "message": "upload exceeds 10 MiB"},
                )
            messages, result = engine.handle_audio(
                user_id, wav_bytes, raise_errors=True
            )
            resp = {"messages": messages, "attempt": None}
            if result is not None:
                resp["attempt"] = result.to_dict()
                resp.update(
                    {
                        "combined": result.combined,
                        "rank": result.rank,
                        "attempt_count": result.attempt_count,
                        "gap_to_next": result.gap_to_next,
                        "best_score": result.best_score,
                    }
                )
            return resp

        body = await request.json()
        user_id = str(body.get("user_id", ""))
        kind = body.get("kind", "text")
        if not user_id or kind != "text" or "content" not in body:
            return JSONResponse(
                status_code=400,
                content={"error": "invalid_request",
                         "message": "need user_id, kind=text, content"},
            )
        messages = engine.handle_text(user_id, str(body["content"]))
        return {"messages": messages, "attempt": None}

    @app.get("/campaigns/{campaign_id}/leaderboard")
    def get_leaderboard(campaign_id: str, top_k: int | None = None):
        state = store.get(campaign_id)
        return [entry.to_dict() for entry in state.leaderboard(top_k)]

    @app.get("/campaigns/{campaign_id}/users/{user_id}/stats")
    def get_stats(campaign_id: str, user_id: str):
        return store.get(campaign_id).user_stats(user_id).to_dict()

    @app.get("/campaigns/{campaign_id}/reports/funnel")
    def get_funnel(campaign_id: str):
        return analytics.funnel_report(store.get(campaign_id).events).to_dict()

    @app.get("/campaigns/{campaign_id}/reports/concentration")
    def get_concentration(campaign_id: str, share: float = 0.8):
        events = store.get(campaign_id).events
        fraction = analytics.concentration(events, share)
        curve = analytics.concentration_curve(events)
        return {
            "message_share": share,
            "participant_fraction": fraction,
            "curve": [list(p) for p in curve.points],
        }

    @app.post("/contour")
    async def post_contour(request: Request, threshold: int = 128):
        data = await request.body()
        if request.headers.get("content-type", "").startswith("multipart/"):
            form = await request.form()
            upload = form.get("file")
            if upload is None:
                return JSONResponse(
                    status_code=400,
                    content={"error": "invalid_request", "message": "file missing"},
                )
            data = await upload.read()
        try:
            contour = contour_from_silhouette(load_pgm(data), threshold=threshold)
        except ValueError as exc:
            return JSONResponse(
                status_code=400,
                content={"error": "invalid_request", "message": str(exc)},
            )
        return {"bins": list(contour.bins), "label": contour.label}

    console = Path(config.console_dir) if config.console_dir else None
    if console and console.is_dir():
        app.mount("/console", StaticFiles(directory=str(console), html=True),
                  name="console")

    return app
