"""Reflex layer: triggers, per-channel priority, subsumption wrapper."""

import pytest

from cribworld.reflexes import (ReflexConfig, default_reflexes, evaluate,
                                merge_action, wrap)
from cribworld.session import make_action


def obs_with(thirst=0.0, mouth=0.0, intensity=0.0, bearing=0.0):
    return {
        "intero": {"thirst": thirst, "hunger": 0.0},
        "touch": {"mouth": mouth, "hand": 0.0, "crib": 1.0, "torso": [0.0] * 64},
        "audio": {"frame": [], "intensity": intensity, "bearing": bearing},
    }


RULES = default_reflexes()


def test_nothing_triggers_on_calm_obs():
    assert evaluate(RULES, obs_with()) == {}


def test_cry_when_thirsty():
    claims = evaluate(RULES, obs_with(thirst=0.7))
    value, priority, rule = claims["vocal"]
    assert value == {"kind": "cry", "loudness": 0.7}
    assert rule == "cry"


def test_cry_loudness_caps_at_one():
    claims = evaluate(RULES, obs_with(thirst=1.0))
    assert claims["vocal"][0]["loudness"] == 1.0


def test_suck_suppresses_cry_vocal_channel():
    claims = evaluate(RULES, obs_with(thirst=0.7, mouth=1.0))
    assert claims["suck"][0] == 1.0
    assert claims["vocal"][0] == {"kind": "none"}
    assert claims["vocal"][2] == "suck"


def test_orient_turns_toward_sound():
    claims = evaluate(RULES, obs_with(intensity=0.5, bearing=0.4))
    assert claims["head_turn"][0] == 1.0      # 0.4 rad left, saturated
    claims = evaluate(RULES, obs_with(intensity=0.5, bearing=-0.05))
    assert claims["head_turn"][0] == pytest.approx(-0.25)


def test_rules_only_touch_declared_channels():
    claims = evaluate(RULES, obs_with(thirst=0.9))
    assert set(claims) == {"vocal"}
    claims = evaluate(RULES, obs_with(intensity=1.0, bearing=0.1))
    assert set(claims) == {"head_turn"}


def test_config_disables_rules():
    rules = default_reflexes(ReflexConfig(cry=False))
    assert evaluate(rules, obs_with(thirst=0.9)) == {}


class _ConstantPolicy:
    def __init__(self, action):
        self.action = action

    def act(self, obs):
        return self.action


def test_wrap_overrides_vocal_when_thirsty():
    inner = _ConstantPolicy(make_action())
    policy = wrap(inner, RULES)
    out = policy.act(obs_with(thirst=0.8))
    assert out["vocal"] == {"kind": "cry", "loudness": 0.8}


def test_wrap_is_identity_when_nothing_triggers():
    action = make_action(head_turn=0.3, arm_turn=-0.2)
    policy = wrap(_ConstantPolicy(action), RULES)
    assert policy.act(obs_with()) == action


def test_wrap_drops_speech_when_sucking():
    speech = make_action(vocal={"kind": "speech", "frame": [1, 2, 3]})
    policy = wrap(_ConstantPolicy(speech), RULES)
    out = policy.act(obs_with(mouth=1.0))
    assert out["vocal"] == {"kind": "none"}
    assert out["muscles"]["suck"] == 1.0


def test_wrap_keeps_unclaimed_muscles():
    action = make_action(arm_extend=0.9)
    policy = wrap(_ConstantPolicy(action), RULES)
    out = policy.act(obs_with(thirst=0.7))
    assert out["muscles"]["arm_extend"] == 0.9


def test_merge_action_no_claims_passthrough():
    action = make_action(grasp=0.4)
    assert merge_action(action, {}) == action
