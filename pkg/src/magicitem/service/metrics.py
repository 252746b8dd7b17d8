"""Session metrics from the event log.

Task intervals run from each task-start to the next one, the last
closing at session end.  Every dispatched generate counts as an
attempt, including provider failures; timing and token medians are
computed over the attempts that produced a record.  Medians use the
lower-median convention: sorted values, index (n - 1) // 2.
"""

from __future__ import annotations

TASK_IDS = (1, 2, 3)


def lower_median(values):
    if not values:
        return None
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def aggregate(events, session_end_at: float) -> dict:
    starts = [e for e in events if e["kind"] == "task-start"]
    intervals = []
    for i, event in enumerate(starts):
        end = starts[i + 1]["at"] if i + 1 < len(starts) else session_end_at
        intervals.append((event["task"], event["at"], end))

    tasks = []
    for task_id, begin, end in intervals:
        generates = [e for e in events
                     if e["kind"] == "generate" and begin <= e["at"] < end]
        records = [e["record"] for e in generates if "record" in e]
        success = any(
            e["kind"] == "oracle-sample" and begin <= e["at"] < end
            and e.get(f"task{task_id}", False)
            for e in events)
        tasks.append({
            "task": task_id,
            "completion_time_s": end - begin,
            "attempts": len(generates),
            "success": success,
            "generates": [
                {
                    "generation_ms": r["generation_ms"],
                    "total_ms": r["total_ms"],
                    "prompt_tokens": r["usage"]["prompt_tokens"],
                    "completion_tokens": r["usage"]["completion_tokens"],
                    "estimated": r["usage"]["estimated"],
                }
                for r in records
            ],
            "median_generation_ms": lower_median(
                [r["generation_ms"] for r in records]),
            "median_total_ms": lower_median([r["total_ms"] for r in records]),
            "median_prompt_tokens": lower_median(
                [r["usage"]["prompt_tokens"] for r in records]),
            "median_completion_tokens": lower_median(
                [r["usage"]["completion_tokens"] for r in records]),
            "generate_count": len(records),
        })
    return {
        "tasks": tasks,
        "attempts_includes_failures": True,
        "event_count": len(events),
    }
