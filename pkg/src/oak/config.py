"""Service configuration.

Loaded from a JSON file; every field has a working default so an empty
config starts a fully in-memory service with the builtin deterministic
providers. The OAK_DATA_DIR environment variable overrides data_dir.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

DATA_DIR_ENV = "OAK_DATA_DIR"


@dataclass
class ProviderSelection:
    """Which implementation backs a pluggable stage.

    kind is "builtin" (deterministic in-process default) or "remote"
    (HTTP endpoint speaking the one-POST JSON protocol); for the query
    rewriter the builtin is the identity function.
    """

    kind: str = "builtin"
    url: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in ("builtin", "remote"):
            raise ValueError(f"provider kind must be builtin|remote, got {self.kind!r}")
        if self.kind == "remote" and not self.url:
            raise ValueError("remote provider requires a url")

    @classmethod
    def from_value(cls, value) -> "ProviderSelection":
        if value is None:
            return cls()
        if isinstance(value, str):
            # "builtin" or a bare URL shorthand
            if value == "builtin":
                return cls()
            return cls(kind="remote", url=value)
        return cls(kind=value.get("kind", "builtin"), url=value.get("url"))

    def to_dict(self) -> dict:
        return {"kind": self.kind, **({"url": self.url} if self.url else {})}


@dataclass
class ServiceConfig:
    data_dir: Optional[str] = None
    host: str = "127.0.0.1"
    port: int = 8080
    embedding: ProviderSelection = field(default_factory=ProviderSelection)
    extractor: ProviderSelection = field(default_factory=ProviderSelection)
    classifier: ProviderSelection = field(default_factory=ProviderSelection)
    rewrite: ProviderSelection = field(default_factory=ProviderSelection)
    default_rating_weight: float = 0.0
    default_k: int = 10
    bearer_token: Optional[str] = None

    @classmethod
    def from_dict(cls, data: dict) -> "ServiceConfig":
        cfg = cls(
            data_dir=data.get("data_dir"),
            host=data.get("host", "127.0.0.1"),
            port=int(data.get("port", 8080)),
            embedding=ProviderSelection.from_value(data.get("embedding")),
            extractor=ProviderSelection.from_value(data.get("extractor")),
            classifier=ProviderSelection.from_value(data.get("classifier")),
            rewrite=ProviderSelection.from_value(data.get("rewrite")),
            default_rating_weight=float(data.get("default_rating_weight", 0.0)),
            default_k=int(data.get("default_k", 10)),
            bearer_token=data.get("bearer_token"),
        )
        if cfg.default_k < 1:
            raise ValueError("default_k must be >= 1")
        if cfg.default_rating_weight < 0:
            raise ValueError("default_rating_weight must be >= 0")
        return cfg

    @classmethod
    def load(cls, path: Optional[Path | str] = None) -> "ServiceConfig":
        data = {}
        if path is not None:
            data = json.loads(Path(path).read_text())
        cfg = cls.from_dict(data)
        env_dir = os.environ.get(DATA_DIR_ENV)
        if env_dir:
            cfg.data_dir = env_dir
        return cfg

    def to_dict(self) -> dict:
        return {
            "data_dir": self.data_dir,
            "host": self.host,
            "port": self.port,
            "embedding": self.embedding.to_dict(),
            "extractor": self.extractor.to_dict(),
            "classifier": self.classifier.to_dict(),
            "rewrite": self.rewrite.to_dict(),
            "default_rating_weight": self.default_rating_weight,
            "default_k": self.default_k,
            "bearer_token": self.bearer_token,
        }
