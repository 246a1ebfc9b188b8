from __future__ import annotations

from pathlib import Path

import pytest

from gutboard.config import ApiConfig
from gutboard.core import Platform
from gutboard.store import Store

SEEDS = Path(__file__).resolve().parent.parent / "seeds"


class TickClock:
    """Deterministic clock: every call advances by `step` seconds."""

    def __init__(self, start: float = 1_000_000.0, step: float = 1.0):
        self.now = start
        self.step = step

    def __call__(self) -> float:
        self.now += self.step
        return self.now

    def jump(self, seconds: float) -> None:
        self.now += seconds


def seeded_config(**overrides) -> ApiConfig:
    base = dict(
        topics_dir=str(SEEDS / "topics"),
        mappings_file=str(SEEDS / "mappings.tsv"),
        experiments_file=str(SEEDS / "experiments.json"),
    )
    base.update(overrides)
    return ApiConfig(**base)


def make_platform(data_path: Path | None = None, clock=None, **config_overrides) -> Platform:
    """Seeded platform; in-memory store unless a data path is given."""
    clock = clock or TickClock()
    if data_path is None:
        platform = Platform.in_memory(seeded_config(**config_overrides), clock=clock)
    else:
        config = seeded_config(data_path=str(data_path), **config_overrides)
        platform = Platform(config, clock=clock)
    platform.startup()
    return platform


@pytest.fixture
def clock() -> TickClock:
    return TickClock()


@pytest.fixture
def platform(clock) -> Platform:
    return make_platform(clock=clock)


@pytest.fixture
def bare_platform(clock) -> Platform:
    """No seeds, no model: the manual-table-only configuration."""
    platform = Platform.in_memory(ApiConfig(), clock=clock)
    return platform


@pytest.fixture
def corpora() -> dict[str, list[str]]:
    """The seed corpus as plain dicts, read straight off disk."""
    out: dict[str, list[str]] = {}
    for sub in sorted((SEEDS / "topics").iterdir()):
        if sub.is_dir():
            out[sub.name] = [f.read_text(encoding="utf-8") for f in sorted(sub.iterdir())]
    return out


@pytest.fixture
def memory_store() -> Store:
    return Store(path=None)
