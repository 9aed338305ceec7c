"""Service configuration: flat key=value file with VOCALIZE_* env overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

ENV_PREFIX = "VOCALIZE_"


@dataclass
class ServiceConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000
    data_dir: str = "./data"
    transcription_endpoint: str = ""
    transcription_token: str = ""
    transcripts_file: str = ""  # offline digest->transcript map
    embedding_endpoint: str = ""
    response_endpoint: str = ""
    intent_threshold: float = 0.3
    min_s: float = 0.1
    max_s: float = 60.0
    console_dir: str = ""

    @classmethod
    def load(cls, path: str | Path | None = None,
             env: dict | None = None) -> "ServiceConfig":
        values: dict = {}
        if path is not None:
            for raw in Path(path).read_text(encoding="utf-8").splitlines():
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"bad config line: {raw!r}")
                key, _, value = line.partition("=")
                values[key.strip()] = value.strip()
        env = os.environ if env is None else env
        for f in fields(cls):
            env_key = ENV_PREFIX + f.name.upper()
            if env_key in env:
                values[f.name] = env[env_key]
        kwargs = {}
        for f in fields(cls):
            if f.name in values:
                kwargs[f.name] = _convert(f.type, values[f.name])
        return cls(**kwargs)


def _convert(type_name, raw):
    if type_name in (int, "int"):
        return int(raw)
    if type_name in (float, "float"):
        return float(raw)
    return str(raw)
