"""Script value model.

Numbers are Python floats, strings str, booleans bool, null None,
arrays list, objects dict (insertion-ordered).  On top of those sit
closures and the host-handle types scripts can hold but not forge.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Callable

from ..lang.printer import format_number

if TYPE_CHECKING:
    from ..lang import nodes as n


class Vector3Value:
    """Mutable 3-component vector handed across the script boundary."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x: float, y: float, z: float):
        self.x = x
        self.y = y
        self.z = z

    def __repr__(self):
        return f"Vector3({self.x}, {self.y}, {self.z})"


class Closure:
    __slots__ = ("params", "body", "env", "is_expr")

    def __init__(self, params: list[str], body, env, is_expr: bool):
        self.params = params
        self.body = body  # list of statement thunks, or one expression thunk
        self.env = env
        self.is_expr = is_expr


class HostFn:
    """A host-implemented function bound to an ApiCatalog path."""

    __slots__ = ("path", "fn")

    def __init__(self, path: str, fn: Callable):
        self.path = path
        self.fn = fn  # fn(rt, args, span) -> value


class ItemHandle:
    """The `$` object; 1:1 with a ScriptInstance."""

    __slots__ = ("instance",)

    def __init__(self, instance):
        self.instance = instance


class PlayerHandle:
    """Snapshot view of a player passed into an event callback."""

    __slots__ = ("player_id", "position")

    def __init__(self, player_id: int, position: tuple[float, float, float]):
        self.player_id = player_id
        self.position = position


class MathHandle:
    __slots__ = ()


MATH = MathHandle()


class StateDict(dict):
    """Marker type for `$.state` so writes through aliases are caught."""


def truthy(value) -> bool:
    """JavaScript truthiness: null, false, 0, NaN, and "" are falsy."""
    if value is None or value is False:
        return False
    if value is True:
        return True
    if isinstance(value, float):
        return not (value == 0.0 or value != value)
    if isinstance(value, str):
        return bool(value)
    return True


def is_number(value) -> bool:
    return isinstance(value, float)


def strict_equals(a, b) -> bool:
    """Strict equality: no coercion, containers compare by identity."""
    if isinstance(a, float) and isinstance(b, float):
        return a == b
    if isinstance(a, bool) and isinstance(b, bool):
        return a is b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if a is None and b is None:
        return True
    if type(a) is not type(b):
        # bool/float cross-checks land here as well
        return False
    return a is b


def type_name(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, float):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "array"
    if isinstance(value, dict):
        return "object"
    if isinstance(value, Vector3Value):
        return "Vector3"
    if isinstance(value, (Closure, HostFn)):
        return "function"
    if isinstance(value, ItemHandle):
        return "item"
    if isinstance(value, PlayerHandle):
        return "player"
    if isinstance(value, MathHandle):
        return "Math"
    return type(value).__name__


def display(value) -> str:
    """Stringification used by $.log."""
    if isinstance(value, str):
        return value
    return _display_inner(value)


def _display_inner(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, list):
        return "[" + ", ".join(_display_inner(v) for v in value) + "]"
    if isinstance(value, dict):
        inner = ", ".join(f"{k}: {_display_inner(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, Vector3Value):
        return f"Vector3({format_number(value.x)}, {format_number(value.y)}, {format_number(value.z)})"
    if isinstance(value, (Closure, HostFn)):
        return "[function]"
    if isinstance(value, ItemHandle):
        return "[item]"
    if isinstance(value, PlayerHandle):
        return "[player]"
    return f"[{type_name(value)}]"
