from __future__ import annotations

import json

import pytest

from gutboard.config import ApiConfig
from gutboard.errors import ConfigInvalid


@pytest.mark.parametrize(
    "overrides",
    [
        {"router_threshold": 1.5},
        {"router_threshold": 0.0},
        {"router_threshold": 1.0},
        {"session_ttl": 0},
        {"session_gap": -5},
        {"listen_address": "no-port"},
        {"listen_address": "host:99999"},
        {"scrypt_n": 1000},  # not a power of two
    ],
)
def test_invalid_values_rejected(overrides):
    with pytest.raises(ConfigInvalid):
        ApiConfig(**overrides)


def test_defaults_are_valid():
    config = ApiConfig()
    assert config.host == "127.0.0.1"
    assert config.port == 8000


def test_unknown_keys_rejected():
    with pytest.raises(ConfigInvalid):
        ApiConfig.from_dict({"router_treshold": 0.2})


def test_relative_paths_resolve_against_config_dir(tmp_path):
    (tmp_path / "topics").mkdir()
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"data_path": "data", "topics_dir": "topics"}))
    config = ApiConfig.from_file(path)
    assert config.data_path == str(tmp_path / "data")
    assert config.topics_dir == str(tmp_path / "topics")


def test_absolute_paths_kept(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"data_path": "/var/lib/gutboard"}))
    assert ApiConfig.from_file(path).data_path == "/var/lib/gutboard"


def test_malformed_json_rejected(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{oops")
    with pytest.raises(ConfigInvalid):
        ApiConfig.from_file(path)
