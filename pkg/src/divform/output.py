"""Deterministic CSV/JSON emission with a provenance header.

Identical run configurations produce byte-identical files: floats print with
15 significant digits, field order is fixed, and the run configuration is
serialized into a leading `# config:` comment (CSV) or a `config` field
(JSON).
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)

    def as_json(self) -> str:
        payload = {"subcommand": self.subcommand, **self.options}
        return json.dumps(payload, sort_keys=True)


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, float):
        return float(f"{v:.15g}")
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def emit_csv(config: RunConfig, fieldnames: "list[str]", rows: "list[dict]",
             path: "str | None") -> None:
    lines = [f"# config: {config.as_json()}", ",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(fmt_value(row[k]) for k in fieldnames))
    text = "\n".join(lines) + "\n"
    _write(text, path)


def emit_json(config: RunConfig, record: dict, path: "str | None") -> None:
    doc = {"config": json.loads(config.as_json()), **_jsonable(record)}
    _write(json.dumps(doc, indent=2) + "\n", path)


def _write(text: str, path: "str | None") -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
