"""Live fusion service: evidence ingestion, assessment queries, a push
stream, and stateless what-if evaluation over HTTP/WebSocket.

The server holds one session: an active network plus one evidence ledger
per casualty. Casualties register on first contact, meaning any evidence
POST naming a new id creates its ledger, even if that particular reading is
rejected. The mission clock is driven entirely by client-supplied evidence
timestamps (max seen so far), never by wall clock, so a recorded mission
replays to byte-identical responses.

Concurrency: ingestion is serialized per casualty; different casualties
proceed in parallel. Stream fan-out uses bounded per-subscriber queues and
never blocks ingestion; a subscriber that falls behind is disconnected.

Error vocabulary (payload ``code`` field): UNKNOWN_VITAL and INVALID_STATE
reject an evidence payload (422), UNKNOWN_MODEL rejects a version-pinned
payload against a swapped model (409), UNKNOWN_CASUALTY marks unregistered
ids (404), IMPOSSIBLE_EVIDENCE marks a contradictory accepted set (409).
"""

from __future__ import annotations

import asyncio
from contextlib import suppress

from fastapi import FastAPI, HTTPException, Request, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from pydantic import BaseModel, ConfigDict, Field

from .fusion import (
    Evidence,
    EvidenceLedger,
    InvalidStateError,
    UnknownVitalError,
    accepts,
    assess,
    assess_whatif,
    ingest,
)
from .inference import ImpossibleEvidenceError
from .network import (
    ModelFormatError,
    ModelValidationError,
    NetworkSpec,
    parse_network,
    serialize_network,
)
from .triage import default_network

STREAM_QUEUE_LIMIT = 256


class EvidenceBody(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    vital: str
    state: str
    source: str = "console"
    timestamp_ms: int = Field(ge=0)
    model_version: str | None = None


class WhatIfItem(BaseModel):
    vital: str
    state: str
    source: str = "whatif"
    timestamp_ms: int | None = Field(default=None, ge=0)


class WhatIfBody(BaseModel):
    casualty_id: str | None = None
    overlay: list[WhatIfItem] = Field(default_factory=list)


class SessionState:
    """Mutable state behind one service instance."""

    def __init__(self, spec: NetworkSpec, golden_window_end_ms: int | None = None):
        self.spec = spec
        self.golden_window_end_ms = golden_window_end_ms
        self.ledgers: dict[str, EvidenceLedger] = {}
        self.clock_ms = 0
        self._casualty_locks: dict[str, asyncio.Lock] = {}
        self._subscribers: set[asyncio.Queue] = set()

    def casualty_lock(self, casualty_id: str) -> asyncio.Lock:
        return self._casualty_locks.setdefault(casualty_id, asyncio.Lock())

    def subscribe(self) -> asyncio.Queue:
        queue: asyncio.Queue = asyncio.Queue(maxsize=STREAM_QUEUE_LIMIT)
        self._subscribers.add(queue)
        return queue

    def unsubscribe(self, queue: asyncio.Queue) -> None:
        self._subscribers.discard(queue)

    def publish(self, message: dict) -> None:
        # Must never await: ingestion cannot stall on a slow reader. A full
        # queue evicts its subscriber; the freed slot carries the shutdown
        # sentinel so the sender task wakes up and closes the socket.
        for queue in tuple(self._subscribers):
            try:
                queue.put_nowait(message)
            except asyncio.QueueFull:
                self._subscribers.discard(queue)
                with suppress(asyncio.QueueEmpty):
                    queue.get_nowait()
                with suppress(asyncio.QueueFull):
                    queue.put_nowait(None)

    def swap_model(self, spec: NetworkSpec) -> int:
        """Activate a new network; every ledger is dropped (assessments
        must not mix model versions)."""
        dropped = len(self.ledgers)
        self.spec = spec
        self.ledgers.clear()
        self._casualty_locks.clear()
        return dropped


def _rejection(code: str, reason: str) -> dict:
    return {"status": "rejected", "code": code, "reason": reason}


def create_app(
    spec: NetworkSpec | None = None, golden_window_end_ms: int | None = None
) -> FastAPI:
    """Build the service around ``spec`` (default: the bundled model)."""
    app = FastAPI(title="chiron", docs_url=None, redoc_url=None)
    # The browser console is served as a static page from anywhere, so the
    # API answers cross-origin requests. No credentials are involved.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    session = SessionState(
        spec if spec is not None else default_network(),
        golden_window_end_ms=golden_window_end_ms,
    )
    app.state.session = session

    @app.post("/api/casualties/{casualty_id}/evidence")
    async def submit_evidence(casualty_id: str, body: EvidenceBody):
        if body.model_version is not None and body.model_version != session.spec.version:
            raise HTTPException(
                status_code=409,
                detail=_rejection(
                    "UNKNOWN_MODEL",
                    f"model version {body.model_version!r} is not active "
                    f"(active: {session.spec.version!r})",
                ),
            )
        async with session.casualty_lock(casualty_id):
            ledger = session.ledgers.setdefault(
                casualty_id, EvidenceLedger(session.spec, casualty_id)
            )
            e = Evidence(
                casualty_id=casualty_id,
                vital=body.vital,
                state=body.state,
                source=body.source,
                timestamp_ms=body.timestamp_ms,
            )
            try:
                became_accepted = accepts(ledger, e)
                session.ledgers[casualty_id] = ingest(ledger, e)
            except (UnknownVitalError, InvalidStateError) as exc:
                raise HTTPException(
                    status_code=422, detail=_rejection(exc.code, str(exc))
                ) from None
            session.clock_ms = max(session.clock_ms, e.timestamp_ms)
            if became_accepted:
                try:
                    report = assess(
                        session.ledgers[casualty_id], session.spec, now=session.clock_ms
                    )
                except ImpossibleEvidenceError as exc:
                    session.publish(
                        {
                            "type": "impossible",
                            "casualty_id": casualty_id,
                            "code": exc.code,
                            "reason": str(exc),
                        }
                    )
                else:
                    session.publish({"type": "assessment", **report.to_obj()})
        return {
            "status": "accepted" if became_accepted else "superseded",
            "casualty_id": casualty_id,
            "vital": e.vital,
            "timestamp_ms": e.timestamp_ms,
        }

    @app.get("/api/casualties/{casualty_id}/assessment")
    async def get_assessment(casualty_id: str):
        ledger = session.ledgers.get(casualty_id)
        if ledger is None:
            raise HTTPException(
                status_code=404,
                detail={
                    "code": "UNKNOWN_CASUALTY",
                    "reason": f"no casualty {casualty_id!r}",
                },
            )
        try:
            report = assess(ledger, session.spec, now=session.clock_ms)
        except ImpossibleEvidenceError as exc:
            raise HTTPException(
                status_code=409, detail={"code": exc.code, "reason": str(exc)}
            ) from None
        return report.to_obj()

    @app.post("/api/whatif")
    async def whatif(body: WhatIfBody):
        if body.casualty_id is None:
            base = EvidenceLedger(session.spec, "whatif")
        else:
            base = session.ledgers.get(body.casualty_id)
            if base is None:
                raise HTTPException(
                    status_code=404,
                    detail={
                        "code": "UNKNOWN_CASUALTY",
                        "reason": f"no casualty {body.casualty_id!r}",
                    },
                )
        # Omitted overlay timestamps default past the newest base evidence,
        # later list items last, so the overlay wins any conflict and item
        # order breaks same-vital ties.
        start = (base.last_timestamp() or 0) + 1
        overlay = []
        for i, item in enumerate(body.overlay):
            ts = item.timestamp_ms if item.timestamp_ms is not None else start + i
            overlay.append(
                Evidence(
                    casualty_id=base.casualty_id,
                    vital=item.vital,
                    state=item.state,
                    source=item.source,
                    timestamp_ms=ts,
                )
            )
        try:
            report = assess_whatif(base, overlay, session.spec, now=session.clock_ms)
        except (UnknownVitalError, InvalidStateError) as exc:
            raise HTTPException(
                status_code=422, detail=_rejection(exc.code, str(exc))
            ) from None
        except ImpossibleEvidenceError as exc:
            raise HTTPException(
                status_code=409, detail={"code": exc.code, "reason": str(exc)}
            ) from None
        return report.to_obj()

    @app.get("/api/network")
    async def get_network():
        return Response(serialize_network(session.spec), media_type="application/json")

    @app.put("/api/network")
    async def put_network(request: Request):
        text = (await request.body()).decode("utf-8")
        try:
            new_spec = parse_network(text)
        except ModelFormatError as exc:
            raise HTTPException(
                status_code=422, detail=_rejection("MODEL_FORMAT", str(exc))
            ) from None
        except ModelValidationError as exc:
            raise HTTPException(
                status_code=422,
                detail={
                    "status": "rejected",
                    "code": "MODEL_VALIDATION",
                    "violations": exc.violations,
                },
            ) from None
        dropped = session.swap_model(new_spec)
        session.publish(
            {"type": "model", "name": new_spec.name, "version": new_spec.version}
        )
        return {
            "status": "active",
            "name": new_spec.name,
            "version": new_spec.version,
            "dropped_casualties": dropped,
        }

    @app.get("/api/session")
    async def get_session():
        return {
            "model_name": session.spec.name,
            "model_version": session.spec.version,
            "clock_ms": session.clock_ms,
            "golden_window_end_ms": session.golden_window_end_ms,
            "casualty_ids": sorted(session.ledgers),
        }

    @app.websocket("/api/stream")
    async def stream(ws: WebSocket):
        await ws.accept()
        queue = session.subscribe()
        try:
            await ws.send_json(
                {
                    "type": "hello",
                    "model_name": session.spec.name,
                    "model_version": session.spec.version,
                    "clock_ms": session.clock_ms,
                    "golden_window_end_ms": session.golden_window_end_ms,
                    "casualty_ids": sorted(session.ledgers),
                }
            )
            for casualty_id in sorted(session.ledgers):
                with suppress(ImpossibleEvidenceError):
                    report = assess(
                        session.ledgers[casualty_id], session.spec, now=session.clock_ms
                    )
                    await ws.send_json({"type": "assessment", **report.to_obj()})
            sender = asyncio.create_task(_pump(ws, queue))
            listener = asyncio.create_task(_drain(ws))
            _, pending = await asyncio.wait(
                {sender, listener}, return_when=asyncio.FIRST_COMPLETED
            )
            for task in pending:
                task.cancel()
                with suppress(asyncio.CancelledError):
                    await task
        except WebSocketDisconnect:
            pass
        finally:
            session.unsubscribe(queue)

    return app


async def _pump(ws: WebSocket, queue: asyncio.Queue) -> None:
    while True:
        message = await queue.get()
        if message is None:
            # evicted for falling behind; 1013 = try again later
            with suppress(Exception):
                await ws.close(code=1013)
            return
        await ws.send_json(message)


async def _drain(ws: WebSocket) -> None:
    # Inbound frames are ignored; this task exists to notice disconnects.
    with suppress(WebSocketDisconnect):
        while True:
            await ws.receive_text()
