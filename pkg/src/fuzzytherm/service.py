"""Operator-facing HTTP interface to a live control loop.

Endpoints:

    GET  /state                     -> phase, active config, latest frame
    POST /runs                      -> start a run from a config document
    POST /runs/current/setpoint     -> queue a setpoint change
    POST /runs/current/stop         -> halt at the next sample
    GET  /runs/{id}/record          -> persisted RunRecord JSON (verbatim bytes)
    GET  /telemetry                 -> newline-delimited JSON frame stream

One run at a time. Commands apply at sample boundaries so frames stay
internally consistent. Telemetry consumers each get a bounded buffer
(default 1024 frames); a consumer that falls behind is disconnected rather
than allowed to stall the loop. Error payloads are
``{"code", "message", "details"}``.
"""

from __future__ import annotations

import json
import queue
import threading
import uuid
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response, StreamingResponse

from .errors import ConfigError, InvalidInputError
from .loop import (
    LoopConfig,
    LoopRunner,
    RunRecord,
    config_from_dict,
    config_to_dict,
    frame_to_dict,
    record_to_dict,
)

_DROPPED = object()  # sentinel queued to a subscriber evicted for falling behind


class _TelemetryHub:
    """Fan-out of frame messages to bounded per-subscriber queues."""

    def __init__(self, buffer_size: int):
        self._buffer_size = buffer_size
        self._subscribers: list[queue.Queue] = []
        self._lock = threading.Lock()

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue(maxsize=self._buffer_size)
        with self._lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def publish(self, message: dict) -> None:
        with self._lock:
            stale = []
            for q in self._subscribers:
                try:
                    q.put_nowait(message)
                except queue.Full:
                    stale.append(q)
            for q in stale:
                self._subscribers.remove(q)
                # Make room for the eviction notice, then deliver it.
                try:
                    q.get_nowait()
                except queue.Empty:
                    pass
                q.put_nowait(_DROPPED)


class _Session:
    """Mutable service state guarded by one lock: at most one active run."""

    def __init__(self, records_dir: Path, stream_buffer: int):
        self.lock = threading.Lock()
        self.phase = "idle"
        self.run_id: str | None = None
        self.config_doc: dict | None = None
        self.config: LoopConfig | None = None
        self.last_frame: dict | None = None
        self.runner: LoopRunner | None = None
        self.thread: threading.Thread | None = None
        self.records_dir = records_dir
        self.hub = _TelemetryHub(stream_buffer)

    def persist(self, run_id: str, record: RunRecord) -> Path:
        self.records_dir.mkdir(parents=True, exist_ok=True)
        path = self.records_dir / f"{run_id}.json"
        doc = {"run_id": run_id, **record_to_dict(record)}
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        return path


def _error(status: int, code: str, message: str, details=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or []},
    )


def create_app(
    base_config: dict | None = None,
    records_dir: str | Path = "runs",
    stream_buffer: int = 1024,
) -> FastAPI:
    """Build the service application.

    ``base_config`` is used when POST /runs arrives with an empty body.
    Finished runs are persisted as ``<records_dir>/<run_id>.json``.
    """
    session = _Session(Path(records_dir), stream_buffer)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        # Graceful shutdown: halt any active run so its record is persisted.
        with session.lock:
            runner = session.runner if session.phase == "running" else None
            thread = session.thread
        if runner is not None:
            runner.request_stop()
            if thread is not None:
                thread.join(timeout=30.0)

    app = FastAPI(title="fuzzytherm service", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.session = session

    def _launch(config: LoopConfig, speed: float) -> str:
        run_id = uuid.uuid4().hex[:12]

        def on_frame(frame):
            message = {"run_id": run_id, **frame_to_dict(frame)}
            with session.lock:
                session.last_frame = message
            session.hub.publish(message)

        runner = LoopRunner(config, on_frame=on_frame, pace=True, speed=speed)

        def target():
            record = runner.run()
            session.persist(run_id, record)
            with session.lock:
                if session.run_id == run_id:
                    session.phase = "stopped"

        thread = threading.Thread(target=target, name=f"loop-{run_id}", daemon=True)
        session.phase = "running"
        session.run_id = run_id
        # Expose the effective configuration (defaults filled in), so
        # clients can fetch e.g. the controller spec from /state.
        session.config_doc = config_to_dict(config)
        session.config = config
        session.runner = runner
        session.thread = thread
        session.last_frame = None
        thread.start()
        return run_id

    @app.get("/state")
    def get_state():
        with session.lock:
            doc = {"phase": session.phase}
            if session.run_id is not None:
                doc["run_id"] = session.run_id
            if session.config_doc is not None and session.phase != "idle":
                doc["config"] = session.config_doc
            if session.last_frame is not None:
                doc["frame"] = session.last_frame
            return doc

    @app.post("/runs")
    async def start_run(request: Request):
        body = await request.body()
        if body.strip():
            try:
                doc = json.loads(body)
            except json.JSONDecodeError as exc:
                return _error(400, "invalid-json", f"request body is not valid JSON: {exc}")
        else:
            doc = base_config
            if doc is None:
                return _error(400, "invalid-config", "no config in request and no base config loaded")
        if not isinstance(doc, dict):
            return _error(400, "invalid-config", "config must be a JSON object")
        speed = doc.get("speed", 1.0)
        try:
            speed = float(speed)
            if speed <= 0:
                raise ValueError
        except (TypeError, ValueError):
            return _error(400, "invalid-config", "speed must be a positive number",
                          [{"path": "speed", "message": "must be a positive number"}])
        try:
            config = config_from_dict({k: v for k, v in doc.items() if k != "speed"})
        except ConfigError as exc:
            return _error(400, "invalid-config", "configuration failed validation", exc.details)
        with session.lock:
            if session.phase == "running":
                return _error(409, "conflict", "a run is already active")
            run_id = _launch(config, speed)
        return {"run_id": run_id}

    @app.post("/runs/current/setpoint")
    async def set_setpoint(request: Request):
        try:
            doc = await request.json()
            value = float(doc["value"])
        except Exception:
            return _error(400, "invalid-request", 'body must be {"value": <number>}')
        with session.lock:
            if session.phase != "running" or session.runner is None:
                return _error(409, "conflict", "no active run")
            runner = session.runner
            limits = session.config.setpoint_limits
        try:
            accepted = runner.submit_setpoint(value)
        except InvalidInputError as exc:
            return _error(
                400, "out-of-range", str(exc),
                [{"path": "value", "message": f"allowed range is [{limits[0]}, {limits[1]}]"}],
            )
        return {"setpoint": accepted}

    @app.post("/runs/current/stop")
    def stop_run():
        with session.lock:
            if session.phase != "running" or session.runner is None:
                return _error(409, "conflict", "no active run")
            runner = session.runner
            thread = session.thread
            run_id = session.run_id
        runner.request_stop()
        if thread is not None:
            thread.join(timeout=30.0)
        with session.lock:
            session.phase = "stopped"
        return {"run_id": run_id, "record": f"/runs/{run_id}/record"}

    @app.get("/runs/{run_id}/record")
    def get_record(run_id: str):
        path = session.records_dir / f"{run_id}.json"
        if not path.is_file():
            return _error(404, "not-found", f"no persisted record for run {run_id!r}")
        return Response(content=path.read_bytes(), media_type="application/json")

    @app.get("/telemetry")
    def stream_telemetry():
        def generate():
            sub = session.hub.subscribe()
            try:
                while True:
                    try:
                        message = sub.get(timeout=0.25)
                    except queue.Empty:
                        yield "\n"  # keepalive so dead peers are detected
                        continue
                    if message is _DROPPED:
                        return
                    yield json.dumps(message) + "\n"
            finally:
                session.hub.unsubscribe(sub)

        return StreamingResponse(generate(), media_type="application/x-ndjson")

    return app
