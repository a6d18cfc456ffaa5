"""TOML run configuration.

Sections: ``[simulate]`` (suppression spec and generator knobs, with
``[simulate.featured.<name>]`` tables), ``[audit]`` (see
:class:`visaudit.pipeline.AuditConfig`) and ``[report]`` (``svg``).
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import UsageError

SECTIONS = ("simulate", "audit", "report")


def load_config(path: str | Path | None) -> dict[str, dict[str, Any]]:
    if path is None:
        return {s: {} for s in SECTIONS}
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"config file {path} not found") from exc
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"config file {path}: {exc}") from exc
    unknown = sorted(set(raw) - set(SECTIONS))
    if unknown:
        raise UsageError(f"unknown config sections: {', '.join(unknown)}")
    for s in SECTIONS:
        if not isinstance(raw.setdefault(s, {}), dict):
            raise UsageError(f"config section [{s}] must be a table")
    return raw


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def config_hash(cfg: Any) -> str:
    return hashlib.sha256(canonical_json(cfg).encode("utf-8")).hexdigest()
