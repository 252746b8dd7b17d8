"""Deterministic fixed-timestep world: ground plane, players, scripted items.

Every step runs the same eight phases in the same order, so a (seed,
spawn sequence, input trace, scripts) tuple fully determines the run.
Scripts touch the world only through the effects their dispatches
return; those are applied in emission order with later writes winning.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from ..lang.nodes import Program
from ..rng import SplitMix64
from ..runtime import (
    AddItemImpulse,
    Log,
    RespawnPlayer,
    ScriptError,
    ScriptInstance,
    SetItemGravityScale,
    SetItemPosition,
    SetItemRotation,
    SetItemUseGravity,
    SetItemVelocity,
    SetPlayerGravityRate,
    SetPlayerJumpSpeedRate,
    SetPlayerMoveSpeedRate,
    SetPlayerPosition,
    dispatch,
    instantiate,
)
from ..runtime.values import PlayerHandle

Vec = tuple[float, float, float]


@dataclass(frozen=True)
class WorldConfig:
    dt: float = 1.0 / 60.0
    gravity: Vec = (0.0, -9.81, 0.0)
    ground_half_extent: float = 10.0
    base_jump_speed: float = 5.0
    base_move_speed: float = 3.0
    grab_range: float = 2.0
    seat_offset: Vec = (0.0, 1.0, 0.0)
    held_offset: Vec = (0.0, 1.2, 0.5)
    kill_plane_y: float = -20.0
    trace_capacity: int = 20000


class ItemKind(Enum):
    CHAIR = "chair"
    GRABBABLE = "grabbable"


@dataclass
class Item:
    id: int
    kind: ItemKind
    position: Vec
    rotation: Vec = (0.0, 0.0, 0.0)
    velocity: Vec = (0.0, 0.0, 0.0)
    use_gravity: bool = False
    gravity_scale: float = 1.0
    held_by: int | None = None
    ridden_by: int | None = None
    instance: ScriptInstance | None = None


@dataclass
class Player:
    id: int
    position: Vec
    spawn: Vec
    velocity: Vec = (0.0, 0.0, 0.0)
    jump_speed_rate: float = 1.0
    move_speed_rate: float = 1.0
    gravity_rate: float = 1.0
    grounded: bool = True
    riding: int | None = None
    holding: int | None = None
    move_intent: Vec = (0.0, 0.0, 0.0)


# player inputs


@dataclass(frozen=True)
class Move:
    direction: Vec


@dataclass(frozen=True)
class Jump:
    pass


@dataclass(frozen=True)
class Interact:
    item_id: int


@dataclass(frozen=True)
class Grab:
    item_id: int


@dataclass(frozen=True)
class Release:
    pass


@dataclass(frozen=True)
class Ride:
    item_id: int


@dataclass(frozen=True)
class ExitRide:
    pass


PlayerInput = Move | Jump | Interact | Grab | Release | Ride | ExitRide


@dataclass(frozen=True)
class InputAck:
    accepted: bool
    reason: str | None = None


@dataclass(frozen=True)
class ConsoleReport:
    ok: bool
    console: tuple[str, ...]
    error_kind: str | None = None
    error_message: str | None = None


@dataclass(frozen=True)
class FrameRecord:
    frame: int
    players: tuple[tuple[int, Vec], ...]
    items: tuple[tuple[int, Vec], ...]
    console: tuple[tuple[int, str], ...]
    errors: tuple[tuple[int, str, str], ...]

    def to_json_line(self) -> str:
        payload = {
            "frame": self.frame,
            "players": [[pid, list(pos)] for pid, pos in self.players],
            "items": [[iid, list(pos)] for iid, pos in self.items],
            "console": [[iid, line] for iid, line in self.console],
            "errors": [[iid, kind, message] for iid, kind, message in self.errors],
        }
        return json.dumps(payload, separators=(",", ":"))


class _ItemHost:
    """Read-only view the interpreter sees while running one item."""

    __slots__ = ("world", "item")

    def __init__(self, world: "World", item: Item):
        self.world = world
        self.item = item

    def item_position(self) -> Vec:
        return self.item.position

    def item_rotation(self) -> Vec:
        return self.item.rotation

    def item_velocity(self) -> Vec:
        return self.item.velocity

    def random(self) -> float:
        return self.world.rng.next_float()


def _check_finite(position, what: str) -> Vec:
    vec = tuple(float(c) for c in position)
    if len(vec) != 3 or not all(math.isfinite(c) for c in vec):
        raise ValueError(f"{what} must be a finite 3-vector, got {position!r}")
    return vec


def create_world(config: WorldConfig | None = None, seed: int = 0) -> "World":
    return World(config or WorldConfig(), seed)


class World:
    def __init__(self, config: WorldConfig, seed: int = 0):
        if not config.dt > 0:
            raise ValueError("dt must be positive")
        if not config.ground_half_extent > 0:
            raise ValueError("ground extent must be positive")
        if config.trace_capacity < 1:
            raise ValueError("trace capacity must be at least 1")
        self.config = config
        self.seed = seed
        self.rng = SplitMix64(seed)
        self.frame = 0
        self.items: dict[int, Item] = {}
        self.players: dict[int, Player] = {}
        self.trace: deque[FrameRecord] = deque(maxlen=config.trace_capacity)
        self._queue: list[tuple[int, PlayerInput]] = []
        self._next_item_id = 1
        self._next_player_id = 1

    @property
    def time(self) -> float:
        # derived, never accumulated, so it cannot drift
        return self.frame * self.config.dt

    # - spawning -

    def spawn_item(self, kind: ItemKind | str, position) -> int:
        kind = ItemKind(kind)
        position = _check_finite(position, "item position")
        item_id = self._next_item_id
        self._next_item_id += 1
        self.items[item_id] = Item(id=item_id, kind=kind, position=position)
        return item_id

    def spawn_player(self, position) -> int:
        position = _check_finite(position, "player position")
        player_id = self._next_player_id
        self._next_player_id += 1
        self.players[player_id] = Player(id=player_id, position=position,
                                         spawn=position)
        return player_id

    # - scripts -

    def install_script(self, item_id: int, program: Program) -> ConsoleReport:
        item = self._item(item_id)
        item.instance = None  # a failed install leaves the item scriptless
        host = _ItemHost(self, item)
        console: list[str] = []
        try:
            instance = instantiate(program, host)
        except ScriptError as err:
            console.extend(err.console_lines)
            return ConsoleReport(False, tuple(console), err.kind.value, str(err))
        console.extend(instance.console)
        item.instance = instance
        self._apply_effects([(item_id, e) for e in instance.pending_effects], None)
        try:
            result = dispatch(instance, "start", [], host)
        except ScriptError as err:
            # the script is installed; its start handler just failed
            console.extend(err.console_lines)
            return ConsoleReport(False, tuple(console), err.kind.value, str(err))
        console.extend(result.console)
        self._apply_effects([(item_id, e) for e in result.effects], None)
        return ConsoleReport(True, tuple(console))

    # - inputs -

    def apply_input(self, player_id: int, action: PlayerInput) -> InputAck:
        player = self._player(player_id)
        if isinstance(action, Move):
            d = action.direction
            if (len(d) != 3 or not all(math.isfinite(c) for c in d)
                    or d[1] != 0.0 or d[0] * d[0] + d[2] * d[2] > 1.0 + 1e-9):
                return InputAck(False, "move direction must lie flat with length <= 1")
        elif isinstance(action, Grab):
            item = self.items.get(action.item_id)
            if item is None:
                return InputAck(False, "no such item")
            if item.kind is not ItemKind.GRABBABLE:
                return InputAck(False, "item cannot be grabbed")
            if item.held_by is not None:
                return InputAck(False, "item is already held")
            if player.holding is not None:
                return InputAck(False, "already holding an item")
            if _dist(player.position, item.position) > self.config.grab_range:
                return InputAck(False, "out of range")
        elif isinstance(action, Ride):
            item = self.items.get(action.item_id)
            if item is None:
                return InputAck(False, "no such item")
            if item.kind is not ItemKind.CHAIR:
                return InputAck(False, "item cannot be ridden")
            if item.ridden_by is not None:
                return InputAck(False, "seat is taken")
            if player.riding is not None:
                return InputAck(False, "already riding")
            if _dist(player.position, item.position) > self.config.grab_range:
                return InputAck(False, "out of range")
        elif isinstance(action, Interact):
            if action.item_id not in self.items:
                return InputAck(False, "no such item")
        self._queue.append((player_id, action))
        return InputAck(True)

    # - stepping -

    def step(self) -> FrameRecord:
        cfg = self.config
        dt = cfg.dt
        effects: list[tuple[int, object]] = []
        console: list[tuple[int, str]] = []
        errors: list[tuple[int, str, str]] = []

        # phase 1: consume queued inputs
        queue, self._queue = self._queue, []
        for player_id, action in queue:
            self._consume(player_id, action, effects, console, errors)

        # phase 2: update dispatch, ascending item id
        for item_id in sorted(self.items):
            item = self.items[item_id]
            if item.instance is not None and "update" in item.instance.callbacks:
                self._dispatch_item(item, "update", [dt], effects, console, errors)

        # phase 3: apply effects in emission order
        self._apply_effects(effects, console)

        # phase 4: semi-implicit Euler
        gy = cfg.gravity[1]
        prev_y: dict[tuple[str, int], float] = {}
        for player in self.players.values():
            if player.riding is not None:
                continue
            prev_y[("p", player.id)] = player.position[1]
            vx, vy, vz = player.velocity
            mx, _, mz = player.move_intent
            speed = cfg.base_move_speed * player.move_speed_rate
            vx = mx * speed
            vz = mz * speed
            vy += gy * player.gravity_rate * dt
            px, py, pz = player.position
            player.velocity = (vx, vy, vz)
            player.position = (px + vx * dt, py + vy * dt, pz + vz * dt)
        for item in self.items.values():
            if item.held_by is not None:
                continue
            prev_y[("i", item.id)] = item.position[1]
            vx, vy, vz = item.velocity
            if item.use_gravity:
                vy += gy * item.gravity_scale * dt
            ix, iy, iz = item.position
            item.velocity = (vx, vy, vz)
            item.position = (ix + vx * dt, iy + vy * dt, iz + vz * dt)

        # phase 5: ground plane, only inside the extent
        ext = cfg.ground_half_extent
        for player in self.players.values():
            if player.riding is not None:
                continue
            x, y, z = player.position
            vy = player.velocity[1]
            if (abs(x) <= ext and abs(z) <= ext
                    and prev_y[("p", player.id)] >= 0.0 and y <= 0.0 and vy <= 0.0):
                player.position = (x, 0.0, z)
                player.velocity = (player.velocity[0], 0.0, player.velocity[2])
                player.grounded = True
            else:
                player.grounded = False
        for item in self.items.values():
            if item.held_by is not None:
                continue
            x, y, z = item.position
            vy = item.velocity[1]
            if (abs(x) <= ext and abs(z) <= ext
                    and prev_y[("i", item.id)] >= 0.0 and y <= 0.0 and vy <= 0.0):
                item.position = (x, 0.0, z)
                item.velocity = (item.velocity[0], 0.0, item.velocity[2])

        # phase 6: attachment locks
        ox, oy, oz = cfg.held_offset
        for item in self.items.values():
            if item.held_by is not None:
                holder = self.players[item.held_by]
                hx, hy, hz = holder.position
                item.position = (hx + ox, hy + oy, hz + oz)
                item.velocity = (0.0, 0.0, 0.0)
        sx, sy, sz = cfg.seat_offset
        for player in self.players.values():
            if player.riding is not None:
                chair = self.items[player.riding]
                cx, cy, cz = chair.position
                player.position = (cx + sx, cy + sy, cz + sz)
                player.velocity = (0.0, 0.0, 0.0)

        # phase 7: kill plane
        for player in self.players.values():
            if player.position[1] < cfg.kill_plane_y:
                self._respawn(player)

        # phase 8: record
        self.frame += 1
        record = FrameRecord(
            frame=self.frame,
            players=tuple((pid, self.players[pid].position)
                          for pid in sorted(self.players)),
            items=tuple((iid, self.items[iid].position)
                        for iid in sorted(self.items)),
            console=tuple(console),
            errors=tuple(errors),
        )
        self.trace.append(record)
        return record

    # - oracle-facing views -

    def snapshot(self) -> dict:
        return {
            "frame": self.frame,
            "time": self.time,
            "players": [
                {
                    "id": p.id,
                    "pos": list(p.position),
                    "vel": list(p.velocity),
                    "grounded": p.grounded,
                    "riding": p.riding,
                    "holding": p.holding,
                    "rates": {"jump": p.jump_speed_rate, "move": p.move_speed_rate,
                              "gravity": p.gravity_rate},
                }
                for _, p in sorted(self.players.items())
            ],
            "items": [
                {
                    "id": i.id,
                    "kind": i.kind.value,
                    "pos": list(i.position),
                    "rot": list(i.rotation),
                    "vel": list(i.velocity),
                    "heldBy": i.held_by,
                    "riddenBy": i.ridden_by,
                    "hasScript": i.instance is not None,
                }
                for _, i in sorted(self.items.items())
            ],
        }

    def structural_hash(self) -> str:
        blob = json.dumps(self.snapshot(), separators=(",", ":"), sort_keys=True)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    # - internals -

    def _item(self, item_id: int) -> Item:
        item = self.items.get(item_id)
        if item is None:
            raise ValueError(f"no item with id {item_id}")
        return item

    def _player(self, player_id: int) -> Player:
        player = self.players.get(player_id)
        if player is None:
            raise ValueError(f"no player with id {player_id}")
        return player

    def _consume(self, player_id, action, effects, console, errors) -> None:
        player = self.players.get(player_id)
        if player is None:
            return
        if isinstance(action, Move):
            player.move_intent = tuple(float(c) for c in action.direction)
        elif isinstance(action, Jump):
            if player.riding is not None:
                self._end_ride(player, effects, console, errors)
            elif not player.grounded:
                return  # mid-air jumps are dropped
            vx, _, vz = player.velocity
            player.velocity = (vx, self.config.base_jump_speed * player.jump_speed_rate,
                               vz)
            player.grounded = False
        elif isinstance(action, Interact):
            item = self.items.get(action.item_id)
            if item is not None:
                self._dispatch_event(item, "interact", player, effects, console, errors)
        elif isinstance(action, Grab):
            item = self.items.get(action.item_id)
            if (item is None or item.held_by is not None
                    or player.holding is not None):
                return  # state changed since the ack; drop quietly
            item.held_by = player_id
            player.holding = item.id
            self._dispatch_event(item, "grab", player, effects, console, errors)
        elif isinstance(action, Release):
            if player.holding is None:
                return
            item = self.items[player.holding]
            item.held_by = None
            player.holding = None
            self._dispatch_event(item, "release", player, effects, console, errors)
        elif isinstance(action, Ride):
            item = self.items.get(action.item_id)
            if (item is None or item.ridden_by is not None
                    or player.riding is not None):
                return
            item.ridden_by = player_id
            player.riding = item.id
            player.grounded = False
            self._dispatch_event(item, "ride", player, effects, console, errors)
        elif isinstance(action, ExitRide):
            if player.riding is not None:
                self._end_ride(player, effects, console, errors)

    def _end_ride(self, player: Player, effects, console, errors) -> None:
        chair = self.items[player.riding]
        chair.ridden_by = None
        player.riding = None
        self._dispatch_event(chair, "exitRide", player, effects, console, errors)

    def _dispatch_event(self, item, event, player, effects, console, errors) -> None:
        if item.instance is None or event not in item.instance.callbacks:
            return
        handle = PlayerHandle(player.id, player.position)
        self._dispatch_item(item, event, [handle], effects, console, errors)

    def _dispatch_item(self, item, event, args, effects, console, errors) -> None:
        host = _ItemHost(self, item)
        try:
            result = dispatch(item.instance, event, args, host)
        except ScriptError as err:
            # the failed run's effects are discarded; its console survives
            console.extend((item.id, line) for line in err.console_lines)
            errors.append((item.id, err.kind.value, err.message))
            return
        effects.extend((item.id, effect) for effect in result.effects)

    def _apply_effects(self, effects, console) -> None:
        for item_id, effect in effects:
            item = self.items.get(item_id)
            if item is None:
                continue
            if isinstance(effect, SetItemPosition):
                item.position = (effect.x, effect.y, effect.z)
            elif isinstance(effect, SetItemRotation):
                item.rotation = (effect.x, effect.y, effect.z)
            elif isinstance(effect, SetItemVelocity):
                item.velocity = (effect.x, effect.y, effect.z)
            elif isinstance(effect, AddItemImpulse):
                vx, vy, vz = item.velocity
                item.velocity = (vx + effect.x, vy + effect.y, vz + effect.z)
            elif isinstance(effect, SetItemUseGravity):
                item.use_gravity = effect.use
            elif isinstance(effect, SetItemGravityScale):
                item.gravity_scale = effect.scale
            elif isinstance(effect, SetPlayerJumpSpeedRate):
                player = self.players.get(effect.player_id)
                if player is not None:
                    player.jump_speed_rate = effect.rate
            elif isinstance(effect, SetPlayerMoveSpeedRate):
                player = self.players.get(effect.player_id)
                if player is not None:
                    player.move_speed_rate = effect.rate
            elif isinstance(effect, SetPlayerGravityRate):
                player = self.players.get(effect.player_id)
                if player is not None:
                    player.gravity_rate = effect.rate
            elif isinstance(effect, SetPlayerPosition):
                player = self.players.get(effect.player_id)
                if player is not None:
                    player.position = (effect.x, effect.y, effect.z)
            elif isinstance(effect, RespawnPlayer):
                player = self.players.get(effect.player_id)
                if player is not None:
                    self._respawn(player)
            elif isinstance(effect, Log):
                if console is not None:
                    console.append((item_id, effect.text))

    def _respawn(self, player: Player) -> None:
        if player.holding is not None:
            held = self.items.get(player.holding)
            if held is not None:
                held.held_by = None
            player.holding = None
        if player.riding is not None:
            chair = self.items.get(player.riding)
            if chair is not None:
                chair.ridden_by = None
            player.riding = None
        player.position = player.spawn
        player.velocity = (0.0, 0.0, 0.0)
        player.grounded = True


def _dist(a: Vec, b: Vec) -> float:
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2)


def trace_digest(records) -> str:
    """Stable digest of a run; wall-clock timings never enter it."""
    digest = hashlib.sha256()
    for record in records:
        digest.update(record.to_json_line().encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()
