"""HTTP surface over the session engine."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from ..gateway import GatewayError
from ..sim import ExitRide, Grab, Interact, Jump, Move, Release, Ride
from .engine import Engine

_PLACEHOLDER = """<!doctype html>
<title>magicitem</title>
<h1>magicitem service</h1>
<p>The operator UI is not built. The JSON API is live under <code>/api</code>.</p>
"""


def parse_action(payload: dict):
    kind = payload.get("action")
    if kind == "move":
        direction = payload.get("direction")
        if not isinstance(direction, (list, tuple)) or len(direction) != 3:
            raise ValueError("move needs a 3-element direction")
        return Move(tuple(float(c) for c in direction))
    if kind == "jump":
        return Jump()
    if kind in ("interact", "grab", "ride"):
        if "item_id" not in payload:
            raise ValueError(f"{kind} needs an item_id")
        item_id = int(payload["item_id"])
        return {"interact": Interact, "grab": Grab, "ride": Ride}[kind](item_id)
    if kind == "release":
        return Release()
    if kind in ("exit_ride", "exitRide"):
        return ExitRide()
    raise ValueError(f"unknown action {kind!r}")


def build_app(engine: Engine, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="magicitem", docs_url=None, redoc_url=None)

    @app.exception_handler(ValueError)
    async def bad_request(request, exc):
        return JSONResponse({"error": "BadRequest", "message": str(exc)},
                            status_code=400)

    @app.exception_handler(LookupError)
    async def not_found(request, exc):
        return JSONResponse({"error": "NotFound", "message": str(exc)},
                            status_code=404)

    @app.exception_handler(RuntimeError)
    async def conflict(request, exc):
        return JSONResponse({"error": "Conflict", "message": str(exc)},
                            status_code=409)

    @app.exception_handler(GatewayError)
    async def gateway_failed(request, exc):
        return JSONResponse({"error": exc.kind.value, "message": exc.message},
                            status_code=502)

    @app.post("/api/session")
    async def create_session():
        return {"session_id": engine.create_session()}

    @app.post("/api/task/start")
    async def task_start(request: Request):
        payload = await request.json()
        engine.task_start(payload.get("task"))
        return {"ok": True}

    @app.post("/api/generate")
    async def generate(request: Request):
        payload = await request.json()
        if "item_id" not in payload:
            raise ValueError("generate needs an item_id")
        result = engine.generate(int(payload["item_id"]),
                                 str(payload.get("prompt", "")))
        if not result["ok"]:
            return JSONResponse(result, status_code=422)
        return result

    @app.get("/api/script/{item_id}")
    async def script(item_id: int):
        pending = engine.script(item_id)
        if pending is None:
            raise LookupError(f"no pending script for item {item_id}")
        return {"item_id": item_id, "script": pending.script_text,
                "meta": pending.meta}

    @app.post("/api/apply")
    async def apply(request: Request):
        payload = await request.json()
        if "item_id" not in payload:
            raise ValueError("apply needs an item_id")
        return engine.apply(int(payload["item_id"]))

    @app.get("/api/world")
    async def world():
        return engine.world_snapshot()

    @app.post("/api/input")
    async def player_input(request: Request):
        payload = await request.json()
        if "player_id" not in payload:
            raise ValueError("input needs a player_id")
        action = parse_action(payload)
        return engine.input(int(payload["player_id"]), action)

    @app.post("/api/step")
    async def step(request: Request):
        payload = await request.json()
        return engine.step(int(payload.get("frames", 1)))

    @app.get("/api/console/{item_id}")
    async def console(item_id: int, limit: int = 100):
        return {"item_id": item_id, "lines": engine.console(item_id, limit)}

    @app.get("/api/metrics")
    async def metrics():
        return engine.metrics()

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        async def placeholder():
            return _PLACEHOLDER

    return app
