"""Command line entry points: serve, eval, run."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .gateway import GatewayConfig
from .lang import ParseError, parse


def _read_config(path: str | None) -> dict:
    """Flat key=value file; '#' starts a comment, blank lines skipped."""
    if not path:
        return {}
    values = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SystemExit(f"bad config line: {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _packaged_fixtures() -> str:
    return str(resources.files("magicitem") / "fixtures")


def _pick(flag, config: dict, key: str, fallback):
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return fallback


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import build_app
    from .service.engine import Engine, EngineConfig

    config = _read_config(args.config)
    backend = _pick(args.backend, config, "backend", "mock")
    fixtures = _pick(args.fixtures, config, "fixtures_dir", _packaged_fixtures())
    gateway = GatewayConfig(
        backend=backend,
        model_name=_pick(args.model, config, "model", "gpt-4-turbo"),
        fixtures_dir=fixtures if backend in ("mock", "replay") else None,
    )
    manual = args.manual_step or config.get("manual_step", "") == "true"
    engine = Engine(EngineConfig(
        sync_dir=_pick(args.sync_dir, config, "sync_dir", "./sync"),
        data_dir=_pick(args.data_dir, config, "data_dir", "./data"),
        gateway=gateway,
        seed=int(_pick(args.seed, config, "seed", 0)),
        manual_step=manual,
    ))
    ui_dir = args.ui_dir if args.ui_dir and Path(args.ui_dir).is_dir() else None
    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"
    app = build_app(engine, ui_dir=ui_dir)
    engine.start()
    try:
        uvicorn.run(app, host=_pick(args.host, config, "host", "127.0.0.1"),
                    port=int(_pick(args.port, config, "port", 8700)),
                    log_level="warning")
    finally:
        engine.stop()
    return 0


def cmd_eval(args) -> int:
    from .harness import run_scenario_file

    report = run_scenario_file(args.scenario)
    text = json.dumps(report, indent=2)
    if args.report:
        Path(args.report).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0 if report["ok"] else 1


def cmd_run(args) -> int:
    from .sim import create_world

    source = Path(args.script).read_text(encoding="utf-8")
    try:
        program = parse(source)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 1
    world = create_world(seed=args.seed)
    item = world.spawn_item("grabbable", (0.0, 0.0, 0.0))
    world.spawn_player((0.0, 0.0, 0.0))
    report = world.install_script(item, program)
    for line in report.console:
        print(f"[console] {line}", file=sys.stderr)
    if not report.ok:
        print(f"install failed: {report.error_kind}: {report.error_message}",
              file=sys.stderr)
        return 1
    out = sys.stdout if args.trace == "-" else open(args.trace, "w",
                                                   encoding="utf-8")
    try:
        for _ in range(args.frames):
            out.write(world.step().to_json_line() + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="magicitem")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--port", type=int)
    serve.add_argument("--host")
    serve.add_argument("--sync-dir")
    serve.add_argument("--data-dir")
    serve.add_argument("--backend", choices=["live", "mock", "replay"])
    serve.add_argument("--fixtures")
    serve.add_argument("--model")
    serve.add_argument("--seed", type=int)
    serve.add_argument("--manual-step", action="store_true")
    serve.add_argument("--ui-dir")
    serve.add_argument("--config")
    serve.set_defaults(fn=cmd_serve)

    ev = sub.add_parser("eval", help="run a scenario file")
    ev.add_argument("--scenario", required=True)
    ev.add_argument("--report")
    ev.set_defaults(fn=cmd_eval)

    run = sub.add_parser("run", help="run a script headless and dump the trace")
    run.add_argument("--script", required=True)
    run.add_argument("--frames", type=int, default=600)
    run.add_argument("--trace", default="-")
    run.add_argument("--seed", type=int, default=0)
    run.set_defaults(fn=cmd_run)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
