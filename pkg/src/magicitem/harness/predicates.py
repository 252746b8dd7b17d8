"""Named checks a scenario can run over its finished trace and world.

Each predicate receives the frame records, the final world, and its
parameters from the scenario file, and returns (passed, detail).  Time
series checks read the trace; final-state checks read the world.
"""

from __future__ import annotations


def _item_series(records, item_id):
    out = []
    for record in records:
        for iid, pos in record.items:
            if iid == item_id:
                out.append(pos)
                break
    return out


def _player_series(records, player_id):
    out = []
    for record in records:
        for pid, pos in record.players:
            if pid == player_id:
                out.append(pos)
                break
    return out


def item_y_ge(records, world, params):
    y = _item_series(records, params["item"])[-1][1]
    return y >= params["value"], f"final y {y:.3f}"


def item_x_abs_ge(records, world, params):
    x = _item_series(records, params["item"])[-1][0]
    return abs(x) >= params["value"], f"final |x| {abs(x):.3f}"


def player_x_ge(records, world, params):
    x = _player_series(records, params.get("player", 1))[-1][0]
    return x >= params["value"], f"final x {x:.3f}"


def rotation_y_eq(records, world, params):
    got = world.items[params["item"]].rotation[1]
    tol = params.get("tol", 1e-6)
    return abs(got - params["value"]) <= tol, f"rotation.y {got:.6f}"


def entities_static(records, world, params):
    tol = params.get("tol", 1e-9)
    worst = 0.0
    first = records[0]
    for record in records:
        for (_, a), (_, b) in zip(first.players, record.players):
            worst = max(worst, *(abs(x - y) for x, y in zip(a, b)))
        for (_, a), (_, b) in zip(first.items, record.items):
            worst = max(worst, *(abs(x - y) for x, y in zip(a, b)))
    return worst <= tol, f"max drift {worst:.3g}"


def error_class_eq(records, world, params):
    wanted = params["value"]
    contains = params.get("contains", "")
    messages = []
    report = getattr(world, "install_report", None)
    if report is not None and report.error_kind == wanted:
        messages.append(report.error_message or "")
    for record in records:
        for item_id, kind, message in record.errors:
            if item_id == params.get("item", item_id) and kind == wanted:
                messages.append(message)
    hit = [m for m in messages if contains in (m or "")]
    if not messages:
        return False, f"no {wanted} raised"
    if not hit:
        return False, f"{wanted} raised but none named {contains!r}"
    return True, f"{wanted}: {hit[0]}"


def console_contains(records, world, params):
    wanted = params["line"]
    for record in records:
        for item_id, line in record.console:
            if item_id == params.get("item", item_id) and line == wanted:
                return True, f"saw {wanted!r}"
    report = getattr(world, "install_report", None)
    if report is not None and wanted in report.console:
        return True, f"saw {wanted!r} at install"
    return False, f"never saw {wanted!r}"


def oscillation_period(records, world, params):
    """Period of the item's y motion from the spacing of its maxima."""
    ys = [pos[1] for pos in _item_series(records, params["item"])]
    peaks = [i for i in range(1, len(ys) - 1)
             if ys[i] > ys[i - 1] and ys[i] >= ys[i + 1]]
    if len(peaks) < 2:
        return False, f"only {len(peaks)} peaks"
    gaps = [b - a for a, b in zip(peaks, peaks[1:])]
    period = (sum(gaps) / len(gaps)) * world.config.dt
    expected = params["value"]
    tol = params.get("tol_ratio", 0.1)
    ok = abs(period - expected) <= tol * expected
    return ok, f"period {period:.3f}s over {len(peaks)} peaks"


def fall_time_ratio(records, world, params):
    """How much slower the item fell than it would at gravity scale 1.

    Measures frames from the last frame at peak height down to ground,
    then divides by a reference fall simulated at scale 1 from the same
    height with the world's own integrator rule.
    """
    ys = [pos[1] for pos in _item_series(records, params["item"])]
    top = max(ys)
    if top <= 0:
        return False, "item never left the ground"
    start = max(i for i, y in enumerate(ys) if y >= top - 1e-9)
    end = next((i for i in range(start + 1, len(ys)) if ys[i] <= 1e-9), None)
    if end is None:
        return False, "item never landed"
    measured = end - start

    dt = world.config.dt
    g = -world.config.gravity[1]
    vy, y, reference = 0.0, top, 0
    while y > 0:
        vy -= g * dt
        y += vy * dt
        reference += 1
    ratio = measured / reference
    expected = params["value"]
    tol = params.get("tol_ratio", 0.05)
    ok = abs(ratio - expected) <= tol * expected
    return ok, f"fell in {measured} frames vs {reference} at scale 1, ratio {ratio:.3f}"


PREDICATES = {
    "item_y_ge": item_y_ge,
    "item_x_abs_ge": item_x_abs_ge,
    "player_x_ge": player_x_ge,
    "rotation_y_eq": rotation_y_eq,
    "entities_static": entities_static,
    "error_class_eq": error_class_eq,
    "console_contains": console_contains,
    "oscillation_period": oscillation_period,
    "fall_time_ratio": fall_time_ratio,
}
