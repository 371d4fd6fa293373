"""The shipped JSON schema and the in-code validator agree."""

import json
import pathlib

import pytest

jsonschema = pytest.importorskip("jsonschema")

from cribworld.session import ConfigError, SessionConfig

SCHEMA = json.loads((pathlib.Path(__file__).parents[1] / "schemas"
                     / "session-config.schema.json").read_text())

GOOD = [
    {},
    {"seed": 3},
    {"codec_seed": 42, "start_stage": 4, "start_thirst": 0.65},
    {"durations": [1, 1, 1, 1, 99999]},
    {"caregiver": {"walk_speed": 0.2}, "drives": {"cry_threshold": 0.5}},
    {"reflexes": {"cry": False}},
]

BAD = [
    {"seed": -1},
    {"durations": [0, 1, 1, 1, 1]},
    {"durations": [1, 1, 1, 1]},
    {"start_stage": 9},
    {"drives": {"cry_threshold": 1.5}},
    {"mystery": 1},
]


@pytest.mark.parametrize("config", GOOD)
def test_schema_and_validator_accept(config):
    jsonschema.validate(config, SCHEMA)
    SessionConfig.from_dict(config)


@pytest.mark.parametrize("config", BAD)
def test_schema_and_validator_reject(config):
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(config, SCHEMA)
    with pytest.raises(ConfigError):
        SessionConfig.from_dict(config)


def test_default_config_round_trips_and_validates():
    full = SessionConfig().to_dict()
    jsonschema.validate(full, SCHEMA)
    assert SessionConfig.from_dict(full) == SessionConfig()
