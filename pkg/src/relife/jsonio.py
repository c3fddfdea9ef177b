"""Canonical JSON forms shared by every file format in the project.

Documents are pretty-printed with sorted keys; log/trace lines are compact
with sorted keys. Both are stable byte-for-byte given equal values, which
is what the golden-file and determinism tests rely on.
"""

from __future__ import annotations

import json
from pathlib import Path


def dump_document(value) -> str:
    return json.dumps(value, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dump_line(value) -> str:
    return json.dumps(value, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def write_document(path: str | Path, value) -> None:
    Path(path).write_text(dump_document(value), encoding="utf-8")
