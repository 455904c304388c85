"""JSON documents with numeric vectors kept on one line."""

from __future__ import annotations

import json
import re

_SCALAR = r"(?:-?\d+(?:\.\d+)?|null)"
_INT_ARRAY = re.compile(r"\[\s*(" + _SCALAR + r"(?:\s*,\s*" + _SCALAR + r")*)\s*\]")


def dumps(doc) -> str:
    text = json.dumps(doc, indent=2)
    text = _INT_ARRAY.sub(lambda m: "[" + ", ".join(re.split(r"\s*,\s*", m.group(1))) + "]", text)
    return text + "\n"


def loads(text: str):
    return json.loads(text)
