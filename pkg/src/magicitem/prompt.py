"""Prompt assembly and reply extraction for the code generator.

The system prompt is a frozen template with one slot for the rendered
interface definition; the user's natural-language request travels as
the separate user message.  The template is treated as external data:
it says "JavaScript" and asks for ```javascript fences even though the
language is ItemScript, and its odd line about writing definitions for
missing methods stays verbatim.  Replies are expected to carry one
fenced code block; extract_code pulls the first.
"""

from __future__ import annotations

import hashlib
import textwrap
from dataclasses import dataclass
from enum import Enum
from importlib import resources

from .runtime.catalog import ApiCatalog

SLOT = "{CLUSTER_SCRIPT_DEFINITION}"

_DOC_WIDTH = 72


def prompt_template() -> str:
    text = (resources.files("magicitem") / "assets" / "prompt_template.txt") \
        .read_text(encoding="utf-8")
    if text.count(SLOT) != 1:
        raise RuntimeError("prompt template must contain the definition slot once")
    return text


def template_fixed_length() -> int:
    """Byte length of the template around the slot."""
    return len(prompt_template().encode("utf-8")) - len(SLOT)


@dataclass(frozen=True)
class DefinitionText:
    text: str    # no trailing newline; the checked-in golden adds one
    digest: str  # sha256 hex of text


@dataclass(frozen=True)
class PromptEnvelope:
    system_text: str
    user_text: str
    model_name: str
    temperature: float = 0.0


def render_definition(catalog: ApiCatalog) -> DefinitionText:
    """Render the interface definition the model sees.

    Deterministic: entries in catalog order, each a doc comment with its
    sample snippet followed by a declaration line.
    """
    if not catalog.entries:
        raise ValueError("catalog has no entries")
    blocks = []
    for entry in catalog.entries:
        if not entry.sample.strip():
            raise ValueError(f"{entry.path} has no sample snippet")
        lines = ["/**"]
        for para in entry.doc.splitlines():
            wrapped = textwrap.wrap(para, width=_DOC_WIDTH) or [""]
            lines.extend(f" * {w}".rstrip() for w in wrapped)
        lines.append(" *")
        lines.append(" * ```")
        lines.extend(f" * {s}".rstrip() for s in entry.sample.splitlines())
        lines.append(" * ```")
        lines.append(" */")
        lines.append(f"declare {entry.signature};")
        blocks.append("\n".join(lines))
    text = "\n\n".join(blocks)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return DefinitionText(text, digest)


def build_prompt(definition: DefinitionText, request: str,
                 model: str, temperature: float = 0.0) -> PromptEnvelope:
    if not request.strip():
        raise ValueError("request is empty")
    system_text = prompt_template().replace(SLOT, definition.text)
    return PromptEnvelope(system_text, request, model, temperature)


class ExtractionErrorKind(Enum):
    NO_CODE_BLOCK = "NoCodeBlock"
    UNTERMINATED_FENCE = "UnterminatedFence"


class ExtractionError(Exception):
    def __init__(self, kind: ExtractionErrorKind, message: str):
        super().__init__(message)
        self.kind = kind
        self.message = message


_OPENING_FENCES = ("```javascript", "```js", "```")


def extract_code(reply: str) -> str:
    """Contents of the first fenced code block in a model reply.

    Leading and trailing blank lines inside the fence are trimmed; the
    interior is returned byte for byte.
    """
    lines = reply.split("\n")
    start = None
    for i, line in enumerate(lines):
        if line.strip() in _OPENING_FENCES:
            start = i
            break
    if start is None:
        raise ExtractionError(ExtractionErrorKind.NO_CODE_BLOCK,
                              "reply contains no fenced code block")
    for j in range(start + 1, len(lines)):
        if lines[j].strip() == "```":
            body = lines[start + 1:j]
            while body and not body[0].strip():
                del body[0]
            while body and not body[-1].strip():
                del body[-1]
            return "\n".join(body)
    raise ExtractionError(ExtractionErrorKind.UNTERMINATED_FENCE,
                          "the code fence never closes")
