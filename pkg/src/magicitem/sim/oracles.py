"""Task oracles over recorded frame traces.

Both read only FrameRecord streams, so they can score live runs and
replayed traces identically.
"""

from __future__ import annotations

TASK_NAMES = ("task1", "task2")

_STREAK_FRAMES = 30
_JUMP_HEIGHT = 2.0
_AIRBORNE_HEIGHT = 0.5


def evaluate_oracle(records, which: str, half_extent: float = 10.0) -> bool:
    if which == "task1":
        return _super_jump(records)
    if which == "task2":
        return _flying_chair(records, half_extent)
    raise ValueError(f"unknown task {which!r}")


def _super_jump(records) -> bool:
    # any player clearing 2 m at any frame counts
    for record in records:
        for _, (_, y, _) in record.players:
            if y > _JUMP_HEIGHT:
                return True
    return False


def _flying_chair(records, half_extent: float) -> bool:
    # player 1 must stay beyond the ground extent, airborne, for a
    # solid half second; any qualifying frame break resets the streak
    streak = 0
    for record in records:
        pos = None
        for pid, p in record.players:
            if pid == 1:
                pos = p
                break
        if pos is None:
            streak = 0
            continue
        x, y, z = pos
        outside = abs(x) > half_extent or abs(z) > half_extent
        if outside and y >= _AIRBORNE_HEIGHT:
            streak += 1
            if streak >= _STREAK_FRAMES:
                return True
        else:
            streak = 0
    return False
