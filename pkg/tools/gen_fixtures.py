"""Regenerate the checked-in mock-gateway fixtures for bundled scenarios.

Fixture files are keyed by the prompt digest, which covers the frozen
template and the rendered definition; run this after touching either:

    python3 tools/gen_fixtures.py
"""

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from magicitem.gateway import estimate_tokens, fixture_key  # noqa: E402
from magicitem.prompt import build_prompt, render_definition  # noqa: E402
from magicitem.runtime.catalog import default_catalog  # noqa: E402

REPLIES = {
    "make me jump three times higher": """\
Here is a script that boosts your jump while you interact with the item.

```javascript
$.onInteract((player) => {
  player.setJumpSpeedRate(3);
});
```
""",
    "you are a bird": """\
```javascript
let t = 0;
$.onUpdate((dt) => {
  t += dt;
  let p = $.getPosition();
  p.x += 0.8 * dt;
  p.y = 1 + 0.5 * Math.sin(3.141592653589793 * t);
  $.setPosition(p);
});
```
""",
    "make the item's gravity like that of the moon only while holding the item": """\
```javascript
$.onGrab((player) => {
  $.setUseGravity(true);
  $.setGravityScale(0.165);
});
```
""",
}


def main() -> None:
    out = ROOT / "src" / "magicitem" / "fixtures"
    out.mkdir(exist_ok=True)
    definition = render_definition(default_catalog())
    for prompt, reply in REPLIES.items():
        envelope = build_prompt(definition, prompt, "gpt-4-turbo")
        key = fixture_key(envelope)
        body = {
            "reply": reply,
            "delay_ms": 260,
            "usage": {
                "prompt_tokens": estimate_tokens(envelope.system_text)
                + estimate_tokens(envelope.user_text),
                "completion_tokens": estimate_tokens(reply),
            },
        }
        (out / f"{key}.json").write_text(json.dumps(body, indent=1),
                                         encoding="utf-8")
        print(f"{key}  <- {prompt!r}")


if __name__ == "__main__":
    main()
