"""Regenerate the rendered interface-definition golden from the catalog.

Run after any catalog change, then review the diff:

    python3 tools/gen_assets.py
"""

import hashlib
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from magicitem.prompt import prompt_template, render_definition  # noqa: E402
from magicitem.runtime.catalog import default_catalog  # noqa: E402


def main() -> None:
    assets = ROOT / "src" / "magicitem" / "assets"
    definition = render_definition(default_catalog())
    (assets / "itemscript.d.txt").write_text(definition.text + "\n",
                                             encoding="utf-8")
    template = prompt_template().encode("utf-8")
    print(f"itemscript.d.txt  {len(definition.text)} chars  sha256 {definition.digest}")
    print(f"prompt_template.txt  {len(template)} bytes  "
          f"sha256 {hashlib.sha256(template).hexdigest()}")


if __name__ == "__main__":
    main()
