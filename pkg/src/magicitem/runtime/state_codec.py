"""Serialization of `$.state` between dispatches and across re-installs.

The blob is UTF-8 JSON with insertion-ordered keys.  Integral floats
are written without a fractional part so the encoding is the shortest
decimal that round-trips (every number decodes back to a float, so the
value model is unchanged).
"""

from __future__ import annotations

import json
import math

from .errors import StateCodecError
from .values import Closure, HostFn, StateDict

STATE_CAP_BYTES = 8 * 1024


def encode_state(state: dict) -> bytes:
    """Encode a state map to its canonical JSON blob.

    Raises StateCodecError if the state holds a function or handle
    (those are not persistable), a non-finite number, or encodes past
    the 8 KiB cap.  The in-script cap check uses a byte estimate, so a
    state that slipped under it can still fail here (escape-heavy
    strings encode longer than they measure).
    """
    prepared = _prepare(state)
    try:
        text = json.dumps(prepared, ensure_ascii=False, separators=(",", ":"),
                          allow_nan=False)
    except ValueError as err:
        raise StateCodecError(f"state is not serializable: {err}") from None
    blob = text.encode("utf-8")
    if len(blob) > STATE_CAP_BYTES:
        raise StateCodecError(
            f"state blob is {len(blob)} bytes; the cap is {STATE_CAP_BYTES}")
    return blob


def decode_state(blob: bytes) -> StateDict:
    """Decode a blob produced by encode_state back into a state map."""
    if len(blob) > STATE_CAP_BYTES:
        raise StateCodecError(
            f"state blob is {len(blob)} bytes; the cap is {STATE_CAP_BYTES}")
    try:
        raw = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise StateCodecError(f"malformed state blob: {err}") from None
    if not isinstance(raw, dict):
        raise StateCodecError("state blob must decode to an object")
    out = StateDict()
    for key, value in raw.items():
        out[key] = _revive(value)
    return out


def _prepare(value):
    if value is None or isinstance(value, bool) or isinstance(value, str):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise StateCodecError("state holds a non-finite number")
        if value == int(value) and abs(value) < 1e16:
            return int(value)
        return value
    if isinstance(value, list):
        return [_prepare(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _prepare(v) for k, v in value.items()}
    if isinstance(value, (Closure, HostFn)):
        raise StateCodecError("state holds a function, which is not persistable")
    raise StateCodecError(f"state holds a non-persistable value: {type(value).__name__}")


def _revive(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, list):
        return [_revive(v) for v in value]
    if isinstance(value, dict):
        return {k: _revive(v) for k, v in value.items()}
    raise StateCodecError(f"unexpected value in blob: {type(value).__name__}")


def measured_size(state: dict) -> int:
    """Byte estimate used by the write-time cap check.

    Mirrors the JSON encoding but tolerates values the strict codec
    rejects (functions, handles, NaN) by costing them a placeholder, so
    a script can hold such values without tripping the size guard.
    """
    return _measure(state)


def _measure(value) -> int:
    if value is None:
        return 4
    if value is True:
        return 4
    if value is False:
        return 5
    if isinstance(value, float):
        if not math.isfinite(value):
            return 4
        if value == int(value) and abs(value) < 1e16:
            return len(str(int(value)))
        return len(repr(value))
    if isinstance(value, str):
        return len(value.encode("utf-8")) + 2
    if isinstance(value, list):
        return 2 + sum(_measure(v) + 1 for v in value)
    if isinstance(value, dict):
        total = 2
        for k, v in value.items():
            total += len(str(k).encode("utf-8")) + 4 + _measure(v)
        return total
    return 4
