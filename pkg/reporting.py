#!/usr/bin/env python3
"""
Console reporting for the CLI and the acceptance battery.

Human-readable progress goes to stderr; result records go to stdout as one
JSON object per line, or as a pandas table with --pretty.
"""

import json
import sys

import pandas as pd

ICONS = {
    "ok": "✅",
    "fail": "❌",
    "warn": "⚠️ ",
    "info": "📊",
    "search": "🔍",
    "file": "📁",
}

_quiet = False
_pretty = False
_buffer: list[dict] = []


def configure(quiet: bool = False, pretty: bool = False) -> None:
    global _quiet, _pretty
    _quiet = quiet
    _pretty = pretty
    _buffer.clear()


def banner(title: str) -> None:
    if _quiet:
        return
    print(f"\n{title}", file=sys.stderr)
    print("=" * 50, file=sys.stderr)


def status(kind: str, message: str) -> None:
    if _quiet:
        return
    print(f"{ICONS.get(kind, '•')} {message}", file=sys.stderr)


def table(df: pd.DataFrame) -> None:
    if _quiet or df.empty:
        return
    print(df.to_string(index=False), file=sys.stderr)


def to_json_line(record: dict) -> str:
    """Canonical encoding: sorted keys, fixed separators."""
    return json.dumps(record, sort_keys=True, separators=(",", ":"), default=_default)


def _default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def emit(record: dict) -> None:
    if _pretty:
        _buffer.append(record)
        return
    print(to_json_line(record), flush=True)


def flush() -> None:
    """Print buffered --pretty records as one table."""
    if not _buffer:
        return
    rows = [{k: (v if isinstance(v, (int, float, str, bool)) or v is None else to_json_line(v)) for k, v in r.items()} for r in _buffer]
    print(pd.DataFrame(rows).to_string(index=False))
    _buffer.clear()
