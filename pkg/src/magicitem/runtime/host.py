"""Host view a script reads the world through.

The interpreter never touches simulator internals; whatever owns the
item hands dispatch() an object with this small read-only surface.
"""

from __future__ import annotations

from typing import Protocol


class HostContext(Protocol):
    def item_position(self) -> tuple[float, float, float]: ...

    def item_rotation(self) -> tuple[float, float, float]: ...

    def item_velocity(self) -> tuple[float, float, float]: ...

    def random(self) -> float: ...


class FixedHost:
    """Canned host for tests: fixed kinematic readings, scripted randoms."""

    def __init__(self, position=(0.0, 0.0, 0.0), rotation=(0.0, 0.0, 0.0),
                 velocity=(0.0, 0.0, 0.0), randoms=()):
        self.position = tuple(float(c) for c in position)
        self.rotation = tuple(float(c) for c in rotation)
        self.velocity = tuple(float(c) for c in velocity)
        self.randoms = list(randoms)
        self._cursor = 0

    def item_position(self):
        return self.position

    def item_rotation(self):
        return self.rotation

    def item_velocity(self):
        return self.velocity

    def random(self) -> float:
        if self._cursor < len(self.randoms):
            value = self.randoms[self._cursor]
            self._cursor += 1
            return value
        return 0.5
