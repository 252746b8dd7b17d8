"""Effect records emitted by scripts.

Effects are the only channel through which a script touches the world.
They are collected during a dispatch and applied by the simulator at
the end of the frame, in emission order.  All numeric payloads are
finite; emission rejects NaN and infinities.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SetItemPosition:
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class SetItemRotation:
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class SetItemVelocity:
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class AddItemImpulse:
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class SetItemUseGravity:
    use: bool


@dataclass(frozen=True)
class SetItemGravityScale:
    scale: float


@dataclass(frozen=True)
class SetPlayerJumpSpeedRate:
    player_id: int
    rate: float


@dataclass(frozen=True)
class SetPlayerMoveSpeedRate:
    player_id: int
    rate: float


@dataclass(frozen=True)
class SetPlayerGravityRate:
    player_id: int
    rate: float


@dataclass(frozen=True)
class SetPlayerPosition:
    player_id: int
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class RespawnPlayer:
    player_id: int


@dataclass(frozen=True)
class Log:
    text: str


Effect = (
    SetItemPosition | SetItemRotation | SetItemVelocity | AddItemImpulse
    | SetItemUseGravity | SetItemGravityScale
    | SetPlayerJumpSpeedRate | SetPlayerMoveSpeedRate | SetPlayerGravityRate
    | SetPlayerPosition | RespawnPlayer | Log
)
