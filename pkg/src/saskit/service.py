"""HTTP service: chat, uploads, plots, logs, models, settings, static UI.

Sessions are in-memory (with optional directory-backed persistence of
uploads and plots) and expire after 24 h idle.  Chat turns are serialized
per session: a second concurrent turn gets 409.  The API credential is
write-only; it never appears in any response body or log line.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from pathlib import Path

from fastapi import FastAPI, File, Form, HTTPException, Request, UploadFile
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import dataio, docstore, models
from .agents import CANONICAL_PROMPTS, Orchestrator, SessionState, Settings, make_backend
from .errors import SaskitError

logger = logging.getLogger(__name__)

MAX_UPLOAD_BYTES = 10 * 1024 * 1024
SESSION_TTL_SECONDS = 24 * 3600

LLM_CHOICES = ["gpt-4o-mini", "gpt-4o", "gpt-5", "claude-sonnet-4",
               "grok-3", "grok-4", "gemini-2.5-pro", "gemini-2.5-flash"]


class ChatRequest(BaseModel):
    session_id: str
    text: str


class SettingsUpdate(BaseModel):
    backend: str | None = None
    model: str | None = None
    endpoint: str | None = None
    api_key: str | None = None
    scenario_path: str | None = None


class Hub:
    """Owns sessions, the global plot index, and the service settings."""

    def __init__(self, settings: Settings | None = None,
                 data_dir: str | Path | None = None,
                 session_ttl: float = SESSION_TTL_SECONDS):
        self.settings = settings if settings is not None else Settings()
        self.registry = models.default_registry()
        self.doc_index = docstore.default_index(self.registry)
        self.sessions: dict[str, SessionState] = {}
        self.plots: dict[str, str] = {}          # plot_id -> session_id
        self.turn_locks: dict[str, threading.Lock] = {}
        self.data_dir = Path(data_dir) if data_dir else None
        self.session_ttl = session_ttl
        self._mutex = threading.Lock()

    def create_session(self) -> SessionState:
        session = SessionState(self.settings)
        with self._mutex:
            self.sessions[session.session_id] = session
            self.turn_locks[session.session_id] = threading.Lock()
        return session

    def get_session(self, session_id: str) -> SessionState:
        self._purge_expired()
        session = self.sessions.get(session_id)
        if session is None:
            raise HTTPException(404, detail={"code": "unknown_session",
                                             "message": f"no session {session_id!r}"})
        return session

    def _purge_expired(self) -> None:
        now = time.time()
        with self._mutex:
            expired = [sid for sid, s in self.sessions.items()
                       if now - s.last_active > self.session_ttl]
            for sid in expired:
                session = self.sessions.pop(sid)
                self.turn_locks.pop(sid, None)
                for plot_id in session.plots:
                    self.plots.pop(plot_id, None)

    def index_new_plots(self, session: SessionState) -> None:
        for plot_id, artifact in session.plots.items():
            if plot_id not in self.plots:
                self.plots[plot_id] = session.session_id
                self._persist_plot(session, artifact)

    def resolve_plot(self, plot_id: str):
        session_id = self.plots.get(plot_id)
        if session_id is None or session_id not in self.sessions:
            raise HTTPException(404, detail={"code": "unknown_plot",
                                             "message": f"no plot {plot_id!r}"})
        return self.sessions[session_id].plots[plot_id]

    def _session_dir(self, session: SessionState, kind: str) -> Path | None:
        if self.data_dir is None:
            return None
        path = self.data_dir / session.session_id / kind
        path.mkdir(parents=True, exist_ok=True)
        return path

    def persist_upload(self, session: SessionState, file_id: str,
                       name: str, raw: bytes) -> None:
        directory = self._session_dir(session, "uploads")
        if directory is not None:
            (directory / f"{file_id}_{Path(name).name}").write_bytes(raw)

    def _persist_plot(self, session: SessionState, artifact) -> None:
        directory = self._session_dir(session, "plots")
        if directory is not None:
            (directory / f"{artifact.plot_id}.json").write_text(
                json.dumps(artifact.to_dict()))


def create_app(settings: Settings | None = None,
               data_dir: str | Path | None = None,
               ui_dir: str | Path | None = None,
               session_ttl: float = SESSION_TTL_SECONDS) -> FastAPI:
    app = FastAPI(title="saskit service", docs_url=None, redoc_url=None)
    hub = Hub(settings=settings, data_dir=data_dir, session_ttl=session_ttl)
    app.state.hub = hub

    @app.exception_handler(HTTPException)
    async def _structured_errors(request: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"code": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.post("/api/session")
    def create_session():
        session = hub.create_session()
        session.log("session created")
        return {"session_id": session.session_id}

    @app.post("/api/chat")
    def chat(body: ChatRequest):
        session = hub.get_session(body.session_id)
        lock = hub.turn_locks[body.session_id]
        if not lock.acquire(blocking=False):
            raise HTTPException(409, detail={
                "code": "turn_in_flight",
                "message": "a chat turn is already running for this session"})
        try:
            backend = make_backend(hub.settings)
            orchestrator = Orchestrator(backend, hub.registry, hub.doc_index)
            reply = orchestrator.handle_user_turn(body.text, session)
            hub.index_new_plots(session)
            if reply.backend_failed:
                return JSONResponse(status_code=502, content={
                    "code": "backend_failure",
                    "message": "the chat backend failed",
                    "reply_text": reply.final_text,
                    "log_cursor": len(session.logs)})
            return {"reply_text": reply.final_text,
                    "plot_ids": reply.plot_ids,
                    "log_cursor": len(session.logs)}
        finally:
            lock.release()

    @app.post("/api/upload")
    def upload(session_id: str = Form(...), file: UploadFile = File(...)):
        session = hub.get_session(session_id)
        raw = file.file.read(MAX_UPLOAD_BYTES + 1)
        if len(raw) > MAX_UPLOAD_BYTES:
            raise HTTPException(413, detail={
                "code": "file_too_large",
                "message": f"uploads are limited to {MAX_UPLOAD_BYTES} bytes"})
        try:
            text = raw.decode("utf-8", errors="replace")
            parsed = dataio.load_ascii(text)
        except SaskitError as exc:
            raise HTTPException(422, detail={
                "code": type(exc).__name__,
                "message": str(exc)}) from exc
        name = file.filename or "upload.txt"
        parsed.dataset.source = {"kind": "file", "filename": name}
        stored = session.add_file(name, parsed.dataset)
        hub.persist_upload(session, stored.file_id, name, raw)
        session.log(
            f"upload {name}: {len(parsed.dataset)} points "
            f"({parsed.column_count} columns, {parsed.skipped_lines} lines skipped)")
        ds = stored.dataset
        return {"file_id": stored.file_id,
                "name": name,
                "points": len(ds),
                "q_range": [float(ds.q[0]), float(ds.q[-1])]}

    @app.get("/api/plots/{plot_id}")
    def get_plot(plot_id: str):
        return hub.resolve_plot(plot_id).to_dict()

    @app.get("/api/logs")
    def get_logs(session_id: str, cursor: int = 0):
        session = hub.get_session(session_id)
        cursor = max(0, min(cursor, len(session.logs)))
        return {"lines": session.logs[cursor:], "cursor": len(session.logs)}

    @app.get("/api/models")
    def get_models():
        return {"models": [
            {"name": info.name, "title": info.title, "category": info.category,
             "parameters": [{"name": p.name, "units": p.units,
                             "default": p.default, "lower": p.lower,
                             "upper": p.upper, "description": p.description}
                            for p in info.parameters]}
            for info in hub.registry.list_models()]}

    @app.get("/api/examples")
    def get_examples():
        return {"prompts": CANONICAL_PROMPTS}

    @app.get("/api/settings")
    def get_settings():
        return {**hub.settings.public_dict(), "llm_choices": LLM_CHOICES}

    @app.put("/api/settings")
    def put_settings(body: SettingsUpdate):
        if body.backend is not None:
            if body.backend not in ("openrouter", "scripted"):
                raise HTTPException(422, detail={
                    "code": "bad_backend",
                    "message": "backend must be 'openrouter' or 'scripted'"})
            hub.settings.backend = body.backend
        if body.model is not None:
            hub.settings.model = body.model
        if body.endpoint is not None:
            hub.settings.endpoint = body.endpoint
        if body.api_key is not None:
            hub.settings.api_key = body.api_key
        if body.scenario_path is not None:
            hub.settings.scenario_path = body.scenario_path
        logger.info("settings updated (model=%s backend=%s)",
                    hub.settings.model, hub.settings.backend)
        return {**hub.settings.public_dict(), "llm_choices": LLM_CHOICES}

    static_dir = Path(ui_dir) if ui_dir else _default_static_dir()
    if static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def _default_static_dir() -> Path:
    return Path(__file__).parent / "static"


def serve(addr: str = "127.0.0.1", port: int = 8808,
          settings: Settings | None = None,
          data_dir: str | Path | None = None,
          ui_dir: str | Path | None = None) -> None:
    import uvicorn
    app = create_app(settings=settings, data_dir=data_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=addr, port=port, log_level="info")
