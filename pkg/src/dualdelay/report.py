"""Result emission: CSV and JSON with a provenance header.

Every output starts with the tool version, a timestamp, the seed, and the
fully resolved run configuration. Re-running with that configuration and
seed reproduces the file byte for byte except for the timestamp line.

CSV dialect is fixed: comma separator, '.' decimal point, one header row,
'#'-prefixed comment lines. Floats are written with 12 significant digits.
"""

from __future__ import annotations

import io
import json
from datetime import datetime, timezone

from . import __version__

GENERATED_PREFIX = "# generated:"


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def render_csv(columns: list[str], rows: list[dict], seed: int, config: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# dualdelay {__version__}\n")
    buf.write(f"{GENERATED_PREFIX} {_timestamp()}\n")
    buf.write(f"# seed: {seed}\n")
    buf.write(f"# config: {json.dumps(config, sort_keys=True, separators=(',', ':'))}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(format_value(row.get(c)) for c in columns) + "\n")
    return buf.getvalue()


def render_json(columns: list[str], rows: list[dict], seed: int, config: dict) -> str:
    doc = {
        "tool": "dualdelay",
        "version": __version__,
        "generated": _timestamp(),
        "seed": seed,
        "config": config,
        "columns": columns,
        "rows": [{c: row.get(c) for c in columns} for row in rows],
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def render(fmt: str, columns: list[str], rows: list[dict], seed: int, config: dict) -> str:
    if fmt == "csv":
        return render_csv(columns, rows, seed, config)
    if fmt == "json":
        return render_json(columns, rows, seed, config)
    raise ValueError(f"unknown format {fmt!r}")


def parse_csv(text: str) -> tuple[dict, list[str], list[list[str]]]:
    """Read back a CSV emitted by render_csv.

    Returns (header metadata, column names, raw string rows).
    """
    meta: dict = {}
    columns: list[str] = []
    rows: list[list[str]] = []
    for line in text.splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        if not columns:
            columns = line.split(",")
        elif line:
            rows.append(line.split(","))
    if "config" in meta:
        # the config value itself contains ':'; re-split the raw line
        for line in text.splitlines():
            if line.startswith("# config:"):
                meta["config"] = json.loads(line[len("# config:"):])
                break
    return meta, columns, rows
