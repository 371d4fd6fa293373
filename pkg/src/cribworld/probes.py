"""Developmental-psychology probes runnable against any agent.

Probes build fresh sessions, run the agent on a copy of itself (unless it
opts in to mutation) and report pure functions of (agent, seeds).  The
preferential-looking score is the standard looking-time ratio: time on
target over time on either object, 0.5 when the gaze never lands on either.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field

from . import world as w
from .session import (AGENT_ID, CAREGIVER_ID, Session, SessionConfig,
                      config_fingerprint)
from .rng import splitmix64_next

LOOK_CONE = math.radians(15.0)
MEASURE_STEPS = 100
SERVICE_TIMEOUT = 2000

KIND_BY_NAME = {"caregiver": w.KIND_CAREGIVER, "toy": w.KIND_TOY,
                "bottle_water": w.KIND_BOTTLE_WATER, "bottle_milk": w.KIND_BOTTLE_MILK}


class ProbeConfigError(ValueError):
    pass


@dataclass
class ProbeReport:
    probe: str
    trials: int
    per_trial: list = field(default_factory=list)
    aggregate: object = None
    config_fingerprint: str = ""


def _agent_copy(agent):
    if getattr(agent, "probe_mutable", False):
        return agent
    return copy.deepcopy(agent)


def _entity_by_kind(session: Session, kind_name: str) -> w.Entity:
    if kind_name not in KIND_BY_NAME:
        raise ProbeConfigError(f"unknown entity kind {kind_name!r}")
    kind = KIND_BY_NAME[kind_name]
    for eid in sorted(session.world.entities):
        if session.world.entities[eid].kind == kind:
            return session.world.entities[eid]
    raise ProbeConfigError(f"no entity of kind {kind_name!r} in the world")


def _probe_config(base: SessionConfig | None, seed: int, thirst: float,
                  quiet_caregiver: bool = False) -> SessionConfig:
    cfg = copy.deepcopy(base) if base is not None else SessionConfig()
    if cfg.codec_seed is None:
        cfg.codec_seed = cfg.seed
    cfg.seed = seed
    cfg.start_stage = 4
    cfg.start_thirst = thirst
    cfg.record = None
    if quiet_caregiver:
        cfg.caregiver.play_intro_period = 10 ** 9
    return cfg


def preferential_looking(agent, word: str, target_kind: str, distractor_kind: str,
                         trials: int, seed: int = 0,
                         base_config: SessionConfig | None = None) -> ProbeReport:
    """Name an object, then measure where the gaze settles.

    Target and distractor sit two meters out at plus/minus thirty degrees
    (side randomized per trial); the caregiver utters the word once from a
    neutral spot straight ahead.
    """
    if target_kind not in KIND_BY_NAME or distractor_kind not in KIND_BY_NAME:
        raise ProbeConfigError(f"unknown kinds {target_kind!r} / {distractor_kind!r}")
    per_trial = []
    sm_state = seed
    for trial in range(trials):
        sm_state, word64 = splitmix64_next(sm_state)
        side = 1.0 if word64 & 1 else -1.0
        sm_state, session_seed = splitmix64_next(sm_state)
        cfg = _probe_config(base_config, session_seed & 0x7FFFFFFF, 0.0,
                            quiet_caregiver=True)
        session = Session(cfg)
        obs = session.reset()
        subject = _agent_copy(agent)

        agent_ent = session.world.entities[AGENT_ID]
        target = _entity_by_kind(session, target_kind)
        distractor = _entity_by_kind(session, distractor_kind)
        ang = math.radians(30.0)
        target.x = agent_ent.x + 2.0 * math.cos(side * ang)
        target.y = agent_ent.y + 2.0 * math.sin(side * ang)
        distractor.x = agent_ent.x + 2.0 * math.cos(-side * ang)
        distractor.y = agent_ent.y + 2.0 * math.sin(-side * ang)
        cg = session.world.entities[CAREGIVER_ID]
        cg.x, cg.y = agent_ent.x + 4.0, agent_ent.y
        session.world.touch_version()
        session.controller.enqueue_narration(word, 1)

        utter_steps = 2 + len(word) * cfg.codec.frames_per_symbol + 2
        for _ in range(utter_steps):
            obs = session.step(subject.act(obs))
        on_target = 0
        on_distractor = 0
        for _ in range(MEASURE_STEPS):
            obs = session.step(subject.act(obs))
            gaze = session.body.gaze
            tb = math.atan2(target.y - agent_ent.y, target.x - agent_ent.x)
            db = math.atan2(distractor.y - agent_ent.y, distractor.x - agent_ent.x)
            if abs(w.wrap_angle(gaze - tb)) <= LOOK_CONE:
                on_target += 1
            if abs(w.wrap_angle(gaze - db)) <= LOOK_CONE:
                on_distractor += 1
        looked = on_target + on_distractor
        fraction = on_target / looked if looked else 0.5
        per_trial.append({"side": side, "on_target": on_target,
                          "on_distractor": on_distractor,
                          "fraction": round(fraction, 6)})
        session.close()
    mean = sum(t["fraction"] for t in per_trial) / trials if trials else 0.0
    return ProbeReport(probe="preferential_looking", trials=trials,
                       per_trial=per_trial, aggregate=round(mean, 6),
                       config_fingerprint=config_fingerprint(
                           base_config or SessionConfig()))


def service_word_latency(agent, word: str, seed: int = 0,
                         base_config: SessionConfig | None = None,
                         prior_delivery: str | None = None,
                         timeout: int = SERVICE_TIMEOUT) -> ProbeReport:
    """Steps from a thirsty start until the matching substance is delivered."""
    cfg = _probe_config(base_config, seed, 0.65)
    session = Session(cfg)
    obs = session.reset()
    substance = session.vocabulary.get(word)
    if substance is None:
        raise ProbeConfigError(f"word {word!r} has no serviceable substance")
    session.controller.state.last_delivery = prior_delivery
    subject = _agent_copy(agent)
    latency = None
    serviced_words: list[str] = []
    cried = False
    for step in range(1, timeout + 1):
        action = subject.act(obs)
        if action.get("vocal", {}).get("kind") == "cry":
            cried = True
        obs = session.step(action)
        for ev in obs["events"]:
            if ev["type"] == "word_service" and ev["word"] not in serviced_words:
                serviced_words.append(ev["word"])
            if ev["type"] == "delivery" and ev["substance"] == substance:
                latency = step
        if latency is not None:
            break
    session.close()
    return ProbeReport(probe="service_word_latency", trials=1,
                       per_trial=[{"latency": latency,
                                   "serviced": word in serviced_words,
                                   "serviced_words": serviced_words,
                                   "cried": cried}],
                       aggregate=latency,
                       config_fingerprint=config_fingerprint(
                           base_config or SessionConfig()))


def milestone_report(agent, words=("WATER", "MILK"), seed: int = 0,
                     base_config: SessionConfig | None = None,
                     looking_trials: int = 10) -> ProbeReport:
    """First-words summary: serviced utterances, word list, looking scores."""
    produced: list[str] = []
    latencies: dict[str, object] = {}
    looking: dict[str, object] = {}
    distractor_for = {"WATER": "toy", "MILK": "toy"}
    for word in words:
        rep = service_word_latency(agent, word, seed=seed, base_config=base_config)
        trial = rep.per_trial[0]
        latencies[word] = rep.aggregate
        for serviced in trial["serviced_words"]:
            if serviced not in produced:
                produced.append(serviced)
        target_kind = "bottle_water" if word == "WATER" else "bottle_milk"
        look = preferential_looking(agent, word, target_kind,
                                    distractor_for.get(word, "toy"),
                                    trials=looking_trials, seed=seed,
                                    base_config=base_config)
        looking[word] = look.aggregate
    aggregate = {"first_word_produced": bool(produced),
                 "produced_words": produced,
                 "service_latency": latencies,
                 "preferential_looking": looking}
    return ProbeReport(probe="milestone_report", trials=len(words),
                       per_trial=[aggregate], aggregate=aggregate,
                       config_fingerprint=config_fingerprint(
                           base_config or SessionConfig()))
