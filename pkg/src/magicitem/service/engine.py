"""Session engine: one owner thread drives the world, everything queues.

HTTP handlers never touch the World directly.  Mutations and snapshot
reads are submitted as commands to the owner thread, which interleaves
them with frame stepping, so every observer sees frame-boundary state.
Gateway calls run on the calling thread and never block stepping.
"""

from __future__ import annotations

import json
import os
import queue
import threading
import time
from concurrent.futures import Future
from dataclasses import dataclass, field
from pathlib import Path

from ..gateway import GatewayConfig, GatewayError, generate as gateway_generate
from ..prompt import build_prompt, render_definition
from ..runtime.catalog import default_catalog
from ..sim import World, WorldConfig, create_world
from ..syncapply import apply_pending, make_pending, read_pending, write_pending
from .metrics import aggregate

_CATCHUP_CAP = 120  # max frames recovered per scheduler pass


@dataclass(frozen=True)
class EngineConfig:
    sync_dir: str
    data_dir: str
    gateway: GatewayConfig
    seed: int = 0
    manual_step: bool = False
    world: WorldConfig = field(default_factory=WorldConfig)


def default_stage(world: World) -> None:
    """The out-of-the-box playground: a chair, a grabbable orb, a player."""
    world.spawn_item("chair", (1.0, 0.0, 1.0))
    world.spawn_item("grabbable", (-1.0, 0.0, 1.0))
    world.spawn_player((0.0, 0.0, 0.0))


class _OracleTracker:
    """Incremental task conditions; emits one sample per rising edge."""

    def __init__(self, half_extent: float):
        self.half_extent = half_extent
        self.streak = 0
        self.fired1 = False
        self.fired2 = False

    def reset_latches(self) -> None:
        self.fired1 = False
        self.fired2 = False

    def feed(self, record):
        task1_now = any(y > 2.0 for _, (_, y, _) in record.players)
        pos = next((p for pid, p in record.players if pid == 1), None)
        if pos is not None and (abs(pos[0]) > self.half_extent
                                or abs(pos[2]) > self.half_extent) \
                and pos[1] >= 0.5:
            self.streak += 1
        else:
            self.streak = 0
        task2_now = self.streak >= 30
        fire = (task1_now and not self.fired1) or (task2_now and not self.fired2)
        self.fired1 = self.fired1 or task1_now
        self.fired2 = self.fired2 or task2_now
        if fire:
            return {"frame": record.frame, "task1": task1_now,
                    "task2": task2_now}
        return None


class Engine:
    def __init__(self, config: EngineConfig,
                 stage=default_stage):
        self.config = config
        self.world = create_world(config.world, seed=config.seed)
        if stage is not None:
            stage(self.world)
        Path(config.sync_dir).mkdir(parents=True, exist_ok=True)
        Path(config.data_dir).mkdir(parents=True, exist_ok=True)
        self.definition = render_definition(default_catalog())
        self._commands: queue.Queue = queue.Queue()
        self._thread: threading.Thread | None = None
        self._running = False
        self._started_at = 0.0
        self._log_lock = threading.Lock()
        self._last_event_at = 0.0
        self.session_id = ""
        self.events: list[dict] = []
        self._tracker = _OracleTracker(config.world.ground_half_extent)

    # - lifecycle -

    def start(self) -> None:
        self.create_session()
        self._running = True
        self._started_at = time.time()
        self._thread = threading.Thread(target=self._loop, daemon=True,
                                        name="world-owner")
        self._thread.start()

    def stop(self) -> None:
        self._running = False
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

    def _loop(self) -> None:
        while self._running:
            try:
                fn, future = self._commands.get(timeout=0.01)
            except queue.Empty:
                fn, future = None, None
            if fn is not None:
                try:
                    future.set_result(fn(self.world))
                except BaseException as exc:
                    future.set_exception(exc)
            if not self.config.manual_step:
                self._catch_up()

    def _catch_up(self) -> None:
        due = int((time.time() - self._started_at) / self.config.world.dt)
        stepped = 0
        while self.world.frame < due and stepped < _CATCHUP_CAP:
            self._step_once()
            stepped += 1
        if self.world.frame < due - _CATCHUP_CAP:
            # hopelessly behind; drop the backlog instead of spiraling
            self._started_at = time.time() - self.world.frame * self.config.world.dt

    def _step_once(self):
        record = self.world.step()
        sample = self._tracker.feed(record)
        if sample is not None:
            self._log("oracle-sample", sample)
        return record

    def submit(self, fn):
        """Run fn(world) on the owner thread and return its result."""
        if self._thread is None:
            # not started (unit tests drive the engine synchronously)
            return fn(self.world)
        future: Future = Future()
        self._commands.put((fn, future))
        return future.result(timeout=30)

    # - telemetry -

    def _log(self, kind: str, payload: dict) -> None:
        with self._log_lock:
            at = max(time.time(), self._last_event_at)  # monotone per session
            self._last_event_at = at
            event = {"at": at, "kind": kind, **payload}
            self.events.append(event)
            if self.session_id:
                path = Path(self.config.data_dir) / f"session-{self.session_id}.jsonl"
                with open(path, "a", encoding="utf-8") as handle:
                    handle.write(json.dumps(event) + "\n")

    def create_session(self) -> str:
        with self._log_lock:
            self.session_id = os.urandom(4).hex()
            self.events = []
            self._last_event_at = 0.0
        self._tracker.reset_latches()
        return self.session_id

    # - operations -

    def task_start(self, task: int) -> None:
        if task not in (1, 2, 3):
            raise ValueError("task must be 1, 2, or 3")
        self._tracker.reset_latches()
        self._log("task-start", {"task": task})

    def generate(self, item_id: int, prompt: str) -> dict:
        if not prompt.strip():
            raise ValueError("prompt is empty")
        self.submit(lambda world: world.items[item_id].id
                    if item_id in world.items else _missing_item(item_id))
        envelope = build_prompt(self.definition, prompt,
                                self.config.gateway.model_name)
        try:
            record = gateway_generate(envelope, self.config.gateway)
        except GatewayError as exc:
            self._log("generate", {"item_id": item_id,
                                   "error": exc.kind.value,
                                   "message": exc.message})
            raise
        self._log("generate", {"item_id": item_id, "record": record.to_dict()})
        if record.extracted_script is None:
            return {"ok": False, "error": record.extraction_error,
                    "message": "the reply carried no code block"}
        write_pending(self.config.sync_dir, make_pending(item_id, record))
        return {
            "ok": True,
            "script": record.extracted_script,
            "generation_ms": record.generation_ms,
            "total_ms": record.total_ms,
            "prompt_tokens": record.usage.prompt_tokens,
            "completion_tokens": record.usage.completion_tokens,
            "estimated": record.usage.estimated,
        }

    def apply(self, item_id: int) -> dict:
        def run(world):
            if item_id not in world.items:
                _missing_item(item_id)
            return apply_pending(world, self.config.sync_dir, item_id)

        report = self.submit(run)
        self._log("apply", {"item_id": item_id, "ok": report.ok,
                            "error_kind": report.error_kind})
        return {"ok": report.ok, "console": list(report.console),
                "error_kind": report.error_kind,
                "error_message": report.error_message}

    def input(self, player_id: int, action) -> dict:
        ack = self.submit(lambda world: world.apply_input(player_id, action))
        self._log("input", {"player_id": player_id,
                            "action": type(action).__name__,
                            "accepted": ack.accepted})
        return {"accepted": ack.accepted, "reason": ack.reason}

    def step(self, frames: int) -> dict:
        if not self.config.manual_step:
            raise RuntimeError("stepping is automatic unless manual-step is set")
        if frames < 1 or frames > 100000:
            raise ValueError("frames must be between 1 and 100000")

        def run(world):
            for _ in range(frames):
                self._step_once()
            return world.frame

        return {"frame": self.submit(run), "frames_stepped": frames}

    def world_snapshot(self) -> dict:
        return self.submit(lambda world: world.snapshot())

    def script(self, item_id: int):
        return read_pending(self.config.sync_dir, item_id)

    def console(self, item_id: int, limit: int = 100) -> list[str]:
        def run(world):
            if item_id not in world.items:
                _missing_item(item_id)
            instance = world.items[item_id].instance
            if instance is None:
                return []
            return list(instance.console)[-limit:]

        return self.submit(run)

    def metrics(self) -> dict:
        with self._log_lock:
            events = list(self.events)
        return aggregate(events, time.time())


def _missing_item(item_id: int):
    raise LookupError(f"no item with id {item_id}")
