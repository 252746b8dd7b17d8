"""The ApiCatalog: every name a script may touch.

This table is the single source of truth for the scripting surface.
The interface definition shown to the language model is rendered from
it, and the interpreter's binding tables are checked against it in
tests, so the two can never drift apart.  Anything not listed here
raises UnsupportedApi at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CatalogEntry:
    path: str       # e.g. "$.setPosition"
    signature: str  # declaration text after "declare "
    doc: str        # prose, may span lines
    sample: str     # one short usage snippet


@dataclass(frozen=True)
class ApiCatalog:
    entries: tuple[CatalogEntry, ...]

    def paths(self) -> frozenset[str]:
        return frozenset(e.path for e in self.entries)


def default_catalog() -> ApiCatalog:
    return _CATALOG


def _e(path, signature, doc, sample):
    return CatalogEntry(path, signature, doc.strip(), sample.strip("\n"))


_ITEM = [
    _e("$.onStart", "$.onStart(handler: () => void): void",
       "Registers a handler that runs once, right after the script is installed "
       "on the item. Registering a second handler replaces the first and logs a "
       "warning.",
       """
$.onStart(() => {
  $.log("ready");
});
"""),
    _e("$.onUpdate", "$.onUpdate(handler: (dt: number) => void): void",
       "Registers a handler called every simulation frame. `dt` is the frame "
       "duration in seconds (1/60).",
       """
$.onUpdate((dt) => {
  let p = $.getPosition();
  p.y += 0.5 * dt;
  $.setPosition(p);
});
"""),
    _e("$.onInteract", "$.onInteract(handler: (player: PlayerHandle) => void): void",
       "Registers a handler for the moment a player presses the interact "
       "control while targeting this item.",
       """
$.onInteract((player) => {
  player.setJumpSpeedRate(2);
});
"""),
    _e("$.onGrab", "$.onGrab(handler: (player: PlayerHandle) => void): void",
       "Registers a handler for the moment a player picks this item up. Only "
       "grabbable items receive this event.",
       """
$.onGrab((player) => {
  $.log("picked up");
});
"""),
    _e("$.onRelease", "$.onRelease(handler: (player: PlayerHandle) => void): void",
       "Registers a handler for the moment a player lets go of this item.",
       """
$.onRelease((player) => {
  $.addImpulse(Vector3(0, 2, 0));
});
"""),
    _e("$.onRide", "$.onRide(handler: (player: PlayerHandle) => void): void",
       "Registers a handler for the moment a player sits on this item. Only "
       "ridable items receive this event.",
       """
$.onRide((player) => {
  $.state.occupied = true;
});
"""),
    _e("$.onExitRide", "$.onExitRide(handler: (player: PlayerHandle) => void): void",
       "Registers a handler for the moment a rider gets off this item.",
       """
$.onExitRide((player) => {
  $.state.occupied = false;
});
"""),
    _e("$.getPosition", "$.getPosition(): Vector3",
       "Returns the item's position in meters as seen at the start of this "
       "event. The result is a fresh Vector3 you may modify freely.",
       """
let p = $.getPosition();
$.log(p.y);
"""),
    _e("$.setPosition", "$.setPosition(position: Vector3): void",
       "Moves the item to the given position at the end of the frame.",
       """
$.setPosition(Vector3(0, 1, 2));
"""),
    _e("$.getRotation", "$.getRotation(): Vector3",
       "Returns the item's rotation as Euler angles in degrees.",
       """
let r = $.getRotation();
"""),
    _e("$.setRotation", "$.setRotation(rotation: Vector3): void",
       "Sets the item's rotation from Euler angles in degrees at the end of "
       "the frame.",
       """
$.onUpdate((dt) => {
  let r = $.getRotation();
  r.y += 90 * dt;
  $.setRotation(r);
});
"""),
    _e("$.getVelocity", "$.getVelocity(): Vector3",
       "Returns the item's velocity in meters per second.",
       """
let v = $.getVelocity();
"""),
    _e("$.setVelocity", "$.setVelocity(velocity: Vector3): void",
       "Replaces the item's velocity at the end of the frame.",
       """
$.setVelocity(Vector3(1, 0, 0));
"""),
    _e("$.addImpulse", "$.addImpulse(impulse: Vector3): void",
       "Adds the given vector to the item's velocity at the end of the frame.",
       """
$.addImpulse(Vector3(0, 5, 0));
"""),
    _e("$.setUseGravity", "$.setUseGravity(use: boolean): void",
       "Turns gravity for this item on or off. Items spawn with gravity off.",
       """
$.setUseGravity(true);
"""),
    _e("$.setGravityScale", "$.setGravityScale(scale: number): void",
       "Scales gravity for this item; 1 is normal strength. Takes effect when "
       "gravity is on.",
       """
$.setGravityScale(0.165);
"""),
    _e("$.state", "$.state: object",
       "A key/value store that survives between events. Reading a key that "
       "was never written yields null. Holds up to 8 KiB of JSON-like data.",
       """
$.onUpdate((dt) => {
  let t = $.state.t;
  if (t == null) {
    t = 0;
  }
  $.state.t = t + dt;
});
"""),
    _e("$.log", "$.log(value: any): void",
       "Writes a line to the item's console. Non-string values are "
       "stringified. Note `+` does not mix strings and numbers; log the "
       "number itself instead.",
       """
$.log("count so far");
$.log($.state.count);
"""),
]

_PLAYER = [
    _e("player.getPosition", "player.getPosition(): Vector3",
       "Returns the player's position in meters as seen at the start of this "
       "event.",
       """
$.onInteract((player) => {
  $.log(player.getPosition().y);
});
"""),
    _e("player.setPosition", "player.setPosition(position: Vector3): void",
       "Teleports the player at the end of the frame.",
       """
player.setPosition(Vector3(0, 0, 0));
"""),
    _e("player.setJumpSpeedRate", "player.setJumpSpeedRate(rate: number): void",
       "Scales the player's jump launch speed; 1 is normal, 0 disables "
       "jumping. The rate stays until set again.",
       """
player.setJumpSpeedRate(3);
"""),
    _e("player.setMoveSpeedRate", "player.setMoveSpeedRate(rate: number): void",
       "Scales the player's ground movement speed; 1 is normal.",
       """
player.setMoveSpeedRate(2);
"""),
    _e("player.setGravityRate", "player.setGravityRate(rate: number): void",
       "Scales gravity for the player; 1 is normal, smaller values fall "
       "slower.",
       """
player.setGravityRate(0.5);
"""),
    _e("player.respawn", "player.respawn(): void",
       "Sends the player back to the spawn point with zero velocity.",
       """
player.respawn();
"""),
]

_VECTOR3 = [
    _e("Vector3", "Vector3(x: number, y: number, z: number): Vector3",
       "Builds a vector. Distances are meters; rotations use degrees.",
       """
let up = Vector3(0, 1, 0);
"""),
    _e("Vector3.x", "Vector3.x: number", "First component. Readable and writable.",
       """
p.x = 2;
"""),
    _e("Vector3.y", "Vector3.y: number", "Second component (height). Readable and writable.",
       """
p.y += 0.1;
"""),
    _e("Vector3.z", "Vector3.z: number", "Third component. Readable and writable.",
       """
p.z = -1;
"""),
    _e("Vector3.add", "Vector3.add(other: Vector3): Vector3",
       "Returns a new vector, this plus other. Neither input changes.",
       """
let q = p.add(Vector3(1, 0, 0));
"""),
    _e("Vector3.sub", "Vector3.sub(other: Vector3): Vector3",
       "Returns a new vector, this minus other.",
       """
let d = target.sub($.getPosition());
"""),
    _e("Vector3.scale", "Vector3.scale(factor: number): Vector3",
       "Returns a new vector with every component multiplied by factor.",
       """
let half = v.scale(0.5);
"""),
    _e("Vector3.length", "Vector3.length(): number",
       "Returns the Euclidean length of the vector.",
       """
let dist = d.length();
"""),
]

_MATH = [
    _e("Math.sin", "Math.sin(x: number): number", "Sine of x (radians).",
       "let s = Math.sin(t);"),
    _e("Math.cos", "Math.cos(x: number): number", "Cosine of x (radians).",
       "let c = Math.cos(t);"),
    _e("Math.abs", "Math.abs(x: number): number", "Absolute value of x.",
       "let m = Math.abs(-2);"),
    _e("Math.sqrt", "Math.sqrt(x: number): number",
       "Square root of x; NaN for negative input.",
       "let r = Math.sqrt(2);"),
    _e("Math.min", "Math.min(...values: number[]): number",
       "Smallest of the arguments.",
       "let lo = Math.min(a, b);"),
    _e("Math.max", "Math.max(...values: number[]): number",
       "Largest of the arguments.",
       "let hi = Math.max(a, 0);"),
    _e("Math.floor", "Math.floor(x: number): number",
       "Largest whole number not above x.",
       "let n = Math.floor(2.7);"),
    _e("Math.PI", "Math.PI: number", "The constant pi.",
       "let turn = 2 * Math.PI;"),
    _e("Math.random", "Math.random(): number",
       "A number in [0, 1) from the world's seeded generator; runs replay "
       "identically for the same seed.",
       "let roll = Math.random();"),
]

_CATALOG = ApiCatalog(tuple(_ITEM + _PLAYER + _VECTOR3 + _MATH))
