"""Reflex layer: a fixed, priority-ordered sensory-to-action mapping.

Reflexes read an observation and claim individual action channels; a higher
priority rule wins each channel it declares and never touches channels
outside its declared set.  Defaults: suck on mouth contact (3), cry when
thirsty (2), orient toward sound (1).  Evaluation is pure and stateless.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

from .body import HEAD_TURN_RATE

log = logging.getLogger(__name__)

PRIORITY_SUCK = 3
PRIORITY_CRY = 2
PRIORITY_ORIENT = 1

Claim = tuple[object, int, str]  # (value, priority, rule id)


@dataclass(frozen=True)
class ReflexRule:
    id: str
    priority: int
    trigger: Callable[[dict], bool]
    override: Callable[[dict], dict]   # channel -> value, only declared channels


@dataclass
class ReflexConfig:
    suck: bool = True
    cry: bool = True
    orient: bool = True


def _suck_trigger(obs: dict) -> bool:
    return obs["touch"]["mouth"] > 0.0


def _suck_override(obs: dict) -> dict:
    # A feeding infant stops vocalizing: the vocal channel is claimed too.
    return {"suck": 1.0, "vocal": {"kind": "none"}}


def _cry_trigger(obs: dict, threshold: float) -> bool:
    return obs["intero"]["thirst"] > threshold


def _cry_override(obs: dict) -> dict:
    loudness = min(1.0, obs["intero"]["thirst"])
    return {"vocal": {"kind": "cry", "loudness": round(loudness, 6)}}


def _orient_trigger(obs: dict) -> bool:
    return obs["audio"]["intensity"] > 0.0


def _orient_override(obs: dict) -> dict:
    rel = obs["audio"]["bearing"]   # egocentric: positive = left of gaze
    turn = max(-1.0, min(1.0, rel / HEAD_TURN_RATE))
    return {"head_turn": round(turn, 6)}


def default_reflexes(config: ReflexConfig | None = None,
                     cry_threshold: float = 0.6) -> list[ReflexRule]:
    config = config or ReflexConfig()
    rules: list[ReflexRule] = []
    if config.suck:
        rules.append(ReflexRule("suck", PRIORITY_SUCK, _suck_trigger, _suck_override))
    if config.cry:
        rules.append(ReflexRule(
            "cry", PRIORITY_CRY,
            lambda obs, t=cry_threshold: _cry_trigger(obs, t), _cry_override))
    if config.orient:
        rules.append(ReflexRule("orient", PRIORITY_ORIENT, _orient_trigger,
                                _orient_override))
    return rules


def evaluate(rules: list[ReflexRule], obs: dict) -> dict[str, Claim]:
    """Merge triggered overrides per channel by priority; empty if none fire."""
    claims: dict[str, Claim] = {}
    for rule in sorted(rules, key=lambda r: r.priority):
        if not rule.trigger(obs):
            continue
        for channel, value in rule.override(obs).items():
            claims[channel] = (value, rule.priority, rule.id)
    return claims


def merge_action(action: dict, claims: dict[str, Claim]) -> dict:
    """Overwrite the channels claimed by triggered reflexes; others pass through."""
    muscles = dict(action.get("muscles", {}))
    vocal = action.get("vocal", {"kind": "none"})
    for channel, (value, _prio, rule_id) in claims.items():
        if channel == "vocal":
            if vocal.get("kind") == "speech":
                log.debug("reflex %s dropped a speech frame", rule_id)
            vocal = value
        else:
            muscles[channel] = value
    return {"muscles": muscles, "vocal": vocal}


class WrappedPolicy:
    """Subsumption wrapper: the inner policy acts, triggered reflexes override."""

    def __init__(self, policy, rules: list[ReflexRule]):
        self.policy = policy
        self.rules = rules

    def act(self, obs: dict) -> dict:
        inner = self.policy.act(obs)
        return merge_action(inner, evaluate(self.rules, obs))


def wrap(policy, rules: list[ReflexRule]) -> WrappedPolicy:
    return WrappedPolicy(policy, rules)
