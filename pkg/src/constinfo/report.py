"""Deterministic table serialization shared by the CLI and report objects.

CSV artifacts carry their metadata in a leading '#'-prefixed JSON line; JSON
artifacts embed the same metadata object. Floats are rendered with shortest
round-trip repr and keys are sorted, so identical inputs produce identical
bytes.
"""

from __future__ import annotations

import json
import os

import numpy as np

__all__ = ["render_csv", "render_json", "write_table"]


def _native(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, np.ndarray):
        return [_native(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_native(x) for x in v]
    if isinstance(v, dict):
        return {k: _native(x) for k, x in v.items()}
    return v


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render_csv(meta: dict, columns: list[str], rows) -> str:
    lines = ["# " + json.dumps(_native(meta), sort_keys=True)]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(meta: dict, columns: list[str], rows) -> str:
    doc = {
        "meta": _native(meta),
        "columns": list(columns),
        "rows": [[_native(v) for v in row] for row in rows],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_table(path, meta: dict, columns: list[str], rows, fmt: str) -> str:
    """Render a table and, when a path is given, write it as UTF-8 bytes."""
    if fmt == "csv":
        text = render_csv(meta, columns, rows)
    elif fmt == "json":
        text = render_json(meta, columns, rows)
    else:
        raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")
    if path is not None:
        path = os.fspath(path)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
