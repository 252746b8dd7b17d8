"""Sandboxed execution for ItemScript programs."""

from .catalog import ApiCatalog, CatalogEntry, default_catalog
from .effects import (
    AddItemImpulse,
    Effect,
    Log,
    RespawnPlayer,
    SetItemGravityScale,
    SetItemPosition,
    SetItemRotation,
    SetItemUseGravity,
    SetItemVelocity,
    SetPlayerGravityRate,
    SetPlayerJumpSpeedRate,
    SetPlayerMoveSpeedRate,
    SetPlayerPosition,
)
from .errors import ErrorKind, ScriptError, StateCodecError
from .host import FixedHost, HostContext
from .interpreter import (
    CONSOLE_CAP,
    DEFAULT_MAX_CALL_DEPTH,
    DEFAULT_MAX_NODES,
    EVENT_KINDS,
    DispatchResult,
    Limits,
    ScriptInstance,
    dispatch,
    instantiate,
    restore_state,
    snapshot_state,
    surface_paths,
)
from .state_codec import STATE_CAP_BYTES, decode_state, encode_state, measured_size
from .values import Closure, HostFn, PlayerHandle, StateDict, Vector3Value, display

__all__ = [
    "ApiCatalog",
    "CatalogEntry",
    "default_catalog",
    "Effect",
    "SetItemPosition",
    "SetItemRotation",
    "SetItemVelocity",
    "AddItemImpulse",
    "SetItemUseGravity",
    "SetItemGravityScale",
    "SetPlayerJumpSpeedRate",
    "SetPlayerMoveSpeedRate",
    "SetPlayerGravityRate",
    "SetPlayerPosition",
    "RespawnPlayer",
    "Log",
    "ErrorKind",
    "ScriptError",
    "StateCodecError",
    "HostContext",
    "FixedHost",
    "Limits",
    "DispatchResult",
    "ScriptInstance",
    "instantiate",
    "dispatch",
    "snapshot_state",
    "restore_state",
    "surface_paths",
    "EVENT_KINDS",
    "CONSOLE_CAP",
    "DEFAULT_MAX_NODES",
    "DEFAULT_MAX_CALL_DEPTH",
    "STATE_CAP_BYTES",
    "encode_state",
    "decode_state",
    "measured_size",
    "Vector3Value",
    "PlayerHandle",
    "StateDict",
    "Closure",
    "HostFn",
    "display",
]
