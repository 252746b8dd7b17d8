"""Pending-script files: the temp-file handoff between generator and world.

Each item gets a script file and a meta sidecar in the sync directory.
Writes go through a temporary name plus rename, so a concurrent reader
always sees some complete earlier write, never a torn one; the meta
carries a digest of the script bytes and the reader rechecks it to pair
the two files consistently.  Applying parses the current pending script
and installs it on the item; the files stay put so the script can be
reviewed and re-applied.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .gateway import GenerationRecord
from .lang import ParseError, parse
from .sim import ConsoleReport, World

_PAIR_RETRIES = 32


class IntegrityError(Exception):
    """The pending pair is torn or its meta does not match the script."""


@dataclass(frozen=True)
class PendingScript:
    item_id: int
    script_text: str
    meta: dict


def script_path(sync_dir, item_id: int) -> Path:
    return Path(sync_dir) / f"item-{item_id}.pending.is"


def meta_path(sync_dir, item_id: int) -> Path:
    return Path(sync_dir) / f"item-{item_id}.pending.meta.json"


def make_pending(item_id: int, record: GenerationRecord) -> PendingScript:
    if record.extracted_script is None:
        raise ValueError("generation record carries no extracted script")
    script = record.extracted_script
    meta = {
        "item_id": item_id,
        "prompt_digest": record.prompt_digest,
        "generated_at": _now_rfc3339(),
        "generation_record": record.to_dict(),
        "script_digest": _digest(script),
    }
    return PendingScript(item_id, script, meta)


def write_pending(sync_dir, pending: PendingScript) -> None:
    meta = dict(pending.meta)
    meta["script_digest"] = _digest(pending.script_text)
    try:
        # meta first: a reader pairing the new script with the old meta
        # sees a digest mismatch and retries, never a silent mix
        _atomic_write(meta_path(sync_dir, pending.item_id),
                      json.dumps(meta, indent=1).encode("utf-8"))
        _atomic_write(script_path(sync_dir, pending.item_id),
                      pending.script_text.encode("utf-8"))
    except OSError as exc:
        raise OSError(f"cannot write pending files under {sync_dir}: {exc}") from exc


def read_pending(sync_dir, item_id: int) -> PendingScript | None:
    s_path = script_path(sync_dir, item_id)
    m_path = meta_path(sync_dir, item_id)
    last = None
    for attempt in range(_PAIR_RETRIES):
        try:
            raw_meta = m_path.read_bytes()
            raw_script = s_path.read_bytes()
        except FileNotFoundError:
            if attempt == 0 and not m_path.exists() and not s_path.exists():
                return None
            last = "half-written pair"
            time.sleep(0.001)
            continue
        try:
            meta = json.loads(raw_meta)
        except ValueError as exc:
            raise IntegrityError(f"corrupt meta for item {item_id}: {exc}") from exc
        script = raw_script.decode("utf-8")
        if meta.get("script_digest") == _digest(script):
            return PendingScript(item_id, script, meta)
        last = "meta digest does not match script bytes"
        time.sleep(0.001)
    raise IntegrityError(f"pending pair for item {item_id} never settled: {last}")


def apply_pending(world: World, sync_dir, item_id: int) -> ConsoleReport:
    pending = read_pending(sync_dir, item_id)
    if pending is None:
        return ConsoleReport(False, (), "NothingToApply",
                             f"no pending script for item {item_id}")
    try:
        program = parse(pending.script_text)
    except ParseError as err:
        return ConsoleReport(False, (), "ParseError", str(err))
    report = world.install_script(item_id, program)
    meta = dict(pending.meta)
    meta["applied_at"] = _now_rfc3339()
    _atomic_write(meta_path(sync_dir, item_id),
                  json.dumps(meta, indent=1).encode("utf-8"))
    return report


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent),
                               prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
