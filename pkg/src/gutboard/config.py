"""Service configuration: validated view of the JSON config file."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigInvalid


@dataclass
class ApiConfig:
    listen_address: str = "127.0.0.1:8000"
    data_path: str = "./data"
    session_ttl: float = 86400.0  # seconds
    router_threshold: float = 0.15
    session_gap: float = 1800.0  # seconds
    experiments_file: str | None = None
    mappings_file: str | None = None
    topics_dir: str | None = None
    scrypt_n: int = 16384
    scrypt_r: int = 8
    scrypt_p: int = 1

    def __post_init__(self):
        if not (0.0 < self.router_threshold < 1.0):
            raise ConfigInvalid(f"router_threshold must be in (0,1), got {self.router_threshold}")
        if self.session_ttl <= 0:
            raise ConfigInvalid("session_ttl must be > 0")
        if self.session_gap <= 0:
            raise ConfigInvalid("session_gap must be > 0")
        host, sep, port = self.listen_address.rpartition(":")
        if not sep or not host or not port.isdigit() or not (0 < int(port) < 65536):
            raise ConfigInvalid(f"listen_address must be host:port, got {self.listen_address!r}")
        if self.scrypt_n < 2 or self.scrypt_n & (self.scrypt_n - 1):
            raise ConfigInvalid("scrypt_n must be a power of two >= 2")

    @property
    def host(self) -> str:
        return self.listen_address.rpartition(":")[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rpartition(":")[2])

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path | None = None) -> "ApiConfig":
        if not isinstance(raw, dict):
            raise ConfigInvalid("config root must be an object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {', '.join(unknown)}")
        try:
            config = cls(**raw)
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from exc
        if base_dir is not None:
            # Relative paths in a config file resolve against the file's dir.
            for attr in ("data_path", "experiments_file", "mappings_file", "topics_dir"):
                value = getattr(config, attr)
                if value is not None and not Path(value).is_absolute():
                    setattr(config, attr, str(base_dir / value))
        return config

    @classmethod
    def from_file(cls, path: str | Path) -> "ApiConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
        except ValueError as exc:
            raise ConfigInvalid(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(raw, base_dir=path.parent)
