"""Scenario runner: set up a world, land a script, replay inputs, judge.

A scenario either inlines its script or routes a checked-in prompt
through the mock gateway, so the whole natural-language path runs
hermetically.  Reports carry a trace digest; the suite digest covers
everything except wall-clock timings, so a fixed seed gives a fixed
digest on any machine.
"""

from __future__ import annotations

import hashlib
import json
import tempfile
import time
from importlib import resources
from pathlib import Path

from ..gateway import GatewayConfig, GatewayError, generate
from ..lang import ParseError, parse
from ..prompt import build_prompt, render_definition
from ..runtime.catalog import default_catalog
from ..service.app import parse_action
from ..sim import create_world, evaluate_oracle, trace_digest
from ..syncapply import apply_pending, make_pending, write_pending
from .predicates import PREDICATES

DEFAULT_SEED = 42
REQUIRED_CATEGORIES = {"1", "2", "3", "4", "5", "6", "7", "task1", "task2"}


def bundled_scenarios_dir() -> Path:
    return Path(str(resources.files("magicitem") / "scenarios"))


def packaged_fixtures_dir() -> Path:
    return Path(str(resources.files("magicitem") / "fixtures"))


def load_scenario(path) -> dict:
    spec = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(spec.get("name"), str) or not spec["name"]:
        raise ValueError(f"{path}: scenario needs a name")
    if not isinstance(spec.get("frames"), int) or spec["frames"] < 1:
        raise ValueError(f"{path}: frames must be a positive integer")
    if not spec.get("oracles"):
        raise ValueError(f"{path}: scenario needs at least one oracle")
    return spec


def run_scenario(spec: dict, seed: int = DEFAULT_SEED,
                 fixtures_dir=None) -> dict:
    started = time.monotonic()
    world = create_world(seed=seed)
    for item in spec.get("world", {}).get("items", []):
        world.spawn_item(item["kind"], tuple(item["position"]))
    for player in spec.get("world", {}).get("players", [{"position": [0, 0, 0]}]):
        world.spawn_player(tuple(player["position"]))

    report = {"name": spec["name"], "frames": spec["frames"],
              "oracles": [], "ok": True, "error": None}
    world.install_report = None
    try:
        _land_script(world, spec, fixtures_dir)
    except (GatewayError, ParseError, ValueError) as exc:
        report["ok"] = False
        report["error"] = f"setup: {exc}"
        report["elapsed_ms"] = (time.monotonic() - started) * 1000.0
        return report

    by_frame: dict[int, list] = {}
    for entry in spec.get("inputs", []):
        by_frame.setdefault(int(entry["frame"]), []).append(entry)

    rejected = []
    records = []
    for frame in range(1, spec["frames"] + 1):
        for entry in by_frame.get(frame, []):
            ack = world.apply_input(int(entry.get("player", 1)),
                                    parse_action(entry))
            if not ack.accepted:
                rejected.append(f"frame {frame}: {ack.reason}")
        records.append(world.step())

    for oracle in spec["oracles"]:
        report["oracles"].append(_judge(oracle, records, world))
    report["ok"] = all(o["pass"] for o in report["oracles"])
    report["trace_digest"] = trace_digest(records)
    report["rejected_inputs"] = rejected
    report["console"] = [line for r in records[:50] for _, line in r.console][:10]
    install = world.install_report
    if install is not None and not install.ok:
        report["install_error"] = f"{install.error_kind}: {install.error_message}"
    report["elapsed_ms"] = (time.monotonic() - started) * 1000.0
    return report


def _land_script(world, spec, fixtures_dir) -> None:
    script = spec.get("script")
    if not script:
        return
    item_id = int(script.get("item", 1))
    if "inline" in script:
        program = parse(script["inline"])
        world.install_report = world.install_script(item_id, program)
        return
    if "fixture_prompt" in script:
        definition = render_definition(default_catalog())
        envelope = build_prompt(definition, script["fixture_prompt"],
                                "gpt-4-turbo")
        config = GatewayConfig(
            backend="mock",
            fixtures_dir=str(fixtures_dir or packaged_fixtures_dir()))
        record = generate(envelope, config)
        if record.extracted_script is None:
            raise ValueError(f"fixture reply had no code: {record.extraction_error}")
        with tempfile.TemporaryDirectory() as sync_dir:
            write_pending(sync_dir, make_pending(item_id, record))
            world.install_report = apply_pending(world, sync_dir, item_id)
        return
    raise ValueError("script must carry 'inline' or 'fixture_prompt'")


def _judge(oracle: dict, records, world) -> dict:
    kind = oracle["kind"]
    expect = oracle.get("expect", True)
    if kind in ("task1", "task2"):
        got = evaluate_oracle(records, kind,
                              half_extent=world.config.ground_half_extent)
        return {"kind": kind, "expect": expect, "got": got,
                "pass": got == expect, "detail": ""}
    if kind == "predicate":
        name = oracle["name"]
        fn = PREDICATES.get(name)
        if fn is None:
            return {"kind": kind, "name": name, "expect": expect, "got": None,
                    "pass": False, "detail": f"unknown predicate {name!r}"}
        got, detail = fn(records, world, oracle)
        return {"kind": kind, "name": name, "expect": expect, "got": got,
                "pass": got == expect, "detail": detail}
    return {"kind": kind, "expect": expect, "got": None, "pass": False,
            "detail": f"unknown oracle kind {kind!r}"}


def run_scenario_file(path, seed: int = DEFAULT_SEED) -> dict:
    return run_scenario(load_scenario(path), seed)


def run_suite(directory=None, seed: int = DEFAULT_SEED) -> dict:
    directory = Path(directory) if directory else bundled_scenarios_dir()
    reports = []
    for path in sorted(directory.glob("*.json")):
        try:
            spec = load_scenario(path)
        except (ValueError, json.JSONDecodeError) as exc:
            reports.append({"name": path.name, "ok": False,
                            "error": str(exc), "oracles": []})
            continue
        reports.append(run_scenario(spec, seed))
    suite = {
        "seed": seed,
        "count": len(reports),
        "ok": all(r["ok"] for r in reports),
        "scenarios": reports,
    }
    suite["digest"] = suite_digest(suite)
    suite["table"] = format_table(suite)
    return suite


def _scrub_timings(value):
    if isinstance(value, dict):
        return {k: _scrub_timings(v) for k, v in sorted(value.items())
                if k != "elapsed_ms"}
    if isinstance(value, list):
        return [_scrub_timings(v) for v in value]
    return value


def suite_digest(suite: dict) -> str:
    core = _scrub_timings({"seed": suite["seed"],
                           "scenarios": suite["scenarios"]})
    blob = json.dumps(core, separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def format_table(suite: dict) -> str:
    rows = [("scenario", "oracles", "pass", "frames", "trace")]
    for report in suite["scenarios"]:
        oracle_names = ",".join(o.get("name", o["kind"])
                                for o in report["oracles"]) or "-"
        rows.append((
            report["name"],
            oracle_names,
            "ok" if report["ok"] else "FAIL",
            str(report.get("frames", "-")),
            report.get("trace_digest", "")[:12],
        ))
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row))
             for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
