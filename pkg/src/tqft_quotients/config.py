"""Run configuration shared by the command-line entry points."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from sympy import isprime

from .finite_groups import DEFAULT_SEED, DEFAULT_THRESHOLD


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    p: int = 7
    g: int = 1
    min_q: int = 2
    max_q: int | None = None
    threshold: int = DEFAULT_THRESHOLD
    precision_ceiling: int = 1024
    seed: int = DEFAULT_SEED
    cache_dir: str | None = None
    output_format: str = "json"
    workers: int = 1

    def __post_init__(self):
        if not isprime(self.p) or self.p % 4 != 3:
            raise ConfigError(f"p must be a prime congruent to 3 mod 4, got {self.p}")
        if self.g < 1:
            raise ConfigError(f"genus must be >= 1, got {self.g}")
        if self.output_format not in ("json", "csv"):
            raise ConfigError("output format must be json or csv")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "RunConfig":
        data = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def to_json(self) -> dict:
        return asdict(self)
