"""Run configuration: precision, tolerances, search and sampling budgets.

Stored as a flat JSON object.  ``QGRAPH_THREADS`` overrides ``workers``.
"""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

from qgraph.spectral import CorpusSpec, GridSpec

FORMATS = ("json", "csv", "text")
THREADS_ENV = "QGRAPH_THREADS"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    precision: int = 20
    quad_tol: float = 1e-9
    grid_lo: float = -50.0
    grid_hi: float = 50.0
    grid_resolution: int = 400
    refine_starts: int = 8
    corpus_margin: int = 2
    corpus_depth: int = 2
    samples: int = 100_000
    chunk: int = 5000
    format: str = "json"
    workers: int = 1

    def __post_init__(self):
        for name in ("precision", "grid_resolution", "corpus_depth", "samples", "chunk", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.refine_starts < 0 or self.corpus_margin < 0:
            raise ConfigError("refine_starts and corpus_margin must be non-negative")
        if not self.quad_tol > 0:
            raise ConfigError("quad_tol must be positive")
        if not self.grid_lo < self.grid_hi:
            raise ConfigError("grid_lo must be below grid_hi")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.grid_lo, self.grid_hi, self.grid_resolution, self.refine_starts)

    @property
    def corpus(self) -> CorpusSpec:
        return CorpusSpec(self.corpus_margin, self.corpus_depth)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> RunConfig:
        known = {f.name: f.type for f in fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def load(cls, path) -> RunConfig:
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        return cls.from_json(data)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps() + "\n")

    def with_env(self, environ=os.environ) -> RunConfig:
        raw = environ.get(THREADS_ENV)
        if not raw:
            return self
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer") from None
        return replace(self, workers=workers)
