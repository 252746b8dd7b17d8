"""Fixed-timestep world simulation and task oracles."""

from .oracles import TASK_NAMES, evaluate_oracle
from .world import (
    ConsoleReport,
    ExitRide,
    FrameRecord,
    Grab,
    InputAck,
    Interact,
    Item,
    ItemKind,
    Jump,
    Move,
    Player,
    PlayerInput,
    Release,
    Ride,
    World,
    WorldConfig,
    create_world,
    trace_digest,
)

__all__ = [
    "ConsoleReport",
    "ExitRide",
    "FrameRecord",
    "Grab",
    "InputAck",
    "Interact",
    "Item",
    "ItemKind",
    "Jump",
    "Move",
    "Player",
    "PlayerInput",
    "Release",
    "Ride",
    "TASK_NAMES",
    "World",
    "WorldConfig",
    "create_world",
    "evaluate_oracle",
    "trace_digest",
]
