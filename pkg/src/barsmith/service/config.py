"""Service configuration: JSON config file with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

ENV_PREFIX = "BARSMITH_"


@dataclass
class AppConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    # None keeps everything in memory (tests, ephemeral runs)
    storage_root: str | None = None
    # None selects the built-in generator; otherwise a shell-split command line
    generator_command: str | None = None
    generator_pool_size: int = 1
    step_timeout_seconds: float = 120.0
    max_parallel_batches: int = 2

    @classmethod
    def load(cls, path: str | Path | None = None, env: dict | None = None) -> "AppConfig":
        """Defaults, overridden by the config file, overridden by environment."""
        values: dict = {}
        if path is not None:
            values.update(json.loads(Path(path).read_text()))
        env = os.environ if env is None else env
        for f in fields(cls):
            key = ENV_PREFIX + f.name.upper()
            if key not in env:
                continue
            raw = env[key]
            if f.type in ("int", int):
                values[f.name] = int(raw)
            elif f.type in ("float", float):
                values[f.name] = float(raw)
            elif f.name in ("storage_root", "generator_command"):
                values[f.name] = raw or None
            else:
                values[f.name] = raw
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**values)
