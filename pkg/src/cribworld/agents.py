"""Reference policies: reflex-only, random babbler, and a Hebbian associator.

The associator closes the word-learning loop with plain co-occurrence
counting: audio bits heard shortly before thirst relief accumulate credit
proportional to the relief they preceded, and audio bits heard while an
object kind sits in the fovea accumulate visual credit.  Production emits the
top relief bits raw (an imperfect, "Wada"-like utterance), which outranks
crying but yields to sucking.  Any reward-like signal here is computed by the
agent itself from consecutive observations; the environment provides none.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .body import column_offset
from .reflexes import (PRIORITY_SUCK, ReflexConfig, default_reflexes,
                       evaluate, merge_action)
from .rng import Xoshiro256StarStar, sample_indices
from .session import NULL_ACTION, make_action

ASSOC_WINDOW = 20          # steps between hearing a bit and the relief it explains
ASSOC_MIN_COUNT = 5.0      # accumulated relief credit needed before speaking
RELIEF_DELTA = 0.02        # one-step thirst drop that counts as relief
PRODUCTION_REFRACTORY = 12
COMPREHEND_STEPS = 150
FOVEA_LO, FOVEA_HI = 6, 10  # central 4x4 patch of the 16x16 retina
FOVEA_KINDS = (3, 4, 5, 6)  # caregiver, toy, bottles
SPEECH_STAGE = 4

TAG_RELIEF = "relief"
TAG_THIRST_HIGH = "thirst_high"


def seen_tag(kind_code: int) -> str:
    return f"seen:{kind_code}"


def intrinsic_signal(prev_obs: dict, obs: dict) -> float:
    """Drive relief per step, positive when drives fall; agent-side only."""
    d_thirst = obs["intero"]["thirst"] - prev_obs["intero"]["thirst"]
    d_hunger = obs["intero"]["hunger"] - prev_obs["intero"]["hunger"]
    return -d_thirst - d_hunger


class NullAgent:
    """Does nothing at all; useful as a mute control."""

    def act(self, obs: dict) -> dict:
        return json.loads(json.dumps(NULL_ACTION))


class ReflexAgent:
    """Exactly the reflex layer merged over a null policy."""

    def __init__(self, cry_threshold: float = 0.6,
                 config: ReflexConfig | None = None):
        self.rules = default_reflexes(config, cry_threshold)

    def act(self, obs: dict) -> dict:
        return merge_action(make_action(), evaluate(self.rules, obs))


class BabblerAgent:
    """Random muscles and occasional random speech frames, seeded."""

    def __init__(self, seed: int = 0, babble_prob: float = 0.05,
                 dimension: int = 512, cardinality: int = 10):
        self.rng = Xoshiro256StarStar(seed)
        self.babble_prob = babble_prob
        self.dimension = dimension
        self.cardinality = cardinality

    def act(self, obs: dict) -> dict:
        rng = self.rng
        action = make_action(head_turn=round(rng.uniform(-1, 1), 6),
                             arm_turn=round(rng.uniform(-1, 1), 6),
                             arm_extend=round(rng.uniform(-1, 1), 6),
                             grasp=round(rng.random(), 6),
                             suck=round(rng.random(), 6))
        if rng.random() < self.babble_prob:
            bits = sample_indices(rng, self.dimension, self.cardinality)
            action["vocal"] = {"kind": "speech", "frame": bits}
        return action


@dataclass
class AssociationStore:
    """Non-negative, monotonically growing co-occurrence counts."""

    counts: dict[tuple[int, str], float] = field(default_factory=dict)

    def add(self, bit: int, tag: str, amount: float) -> None:
        if amount < 0:
            raise ValueError("counts only grow")
        key = (bit, tag)
        self.counts[key] = self.counts.get(key, 0.0) + amount

    def get(self, bit: int, tag: str) -> float:
        return self.counts.get((bit, tag), 0.0)

    def top_bits(self, tag: str, n: int) -> list[tuple[int, float]]:
        scored = [(bit, value) for (bit, t), value in self.counts.items()
                  if t == tag and value > 0.0]
        scored.sort(key=lambda kv: (-kv[1], kv[0]))
        return scored[:n]

    def to_json(self) -> str:
        payload = {f"{bit}|{tag}": round(value, 9)
                   for (bit, tag), value in sorted(self.counts.items())}
        return json.dumps({"counts": payload}, separators=(",", ":"), sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "AssociationStore":
        raw = json.loads(text)["counts"]
        store = AssociationStore()
        for key, value in raw.items():
            bit, tag = key.split("|", 1)
            store.counts[(int(bit), tag)] = float(value)
        return store


class AssociatorAgent:
    """Counting learner that produces its strongest relief bits as speech."""

    probe_mutable = False

    def __init__(self, cry_threshold: float = 0.6, frames_per_symbol: int = 3,
                 cardinality: int = 10, window: int = ASSOC_WINDOW,
                 min_count: float = ASSOC_MIN_COUNT,
                 refractory: int = PRODUCTION_REFRACTORY):
        self.store = AssociationStore()
        self.rules = default_reflexes(ReflexConfig(), cry_threshold)
        self.cry_threshold = cry_threshold
        self.fps = frames_per_symbol
        self.cardinality = cardinality
        self.window = window
        self.min_count = min_count
        self.refractory_steps = refractory
        self.audio_history: list[tuple[int, tuple[int, ...]]] = []
        self.prev_thirst: float | None = None
        self.producing = 0
        self.refractory = 0
        self.production_frame: list[int] = []
        self.utterance_bits: set[int] = set()
        self.hearing = False
        self.target_kind: int | None = None
        self.steer_until = -1
        self._observed_t = -1

    # -- learning ------------------------------------------------------------

    def observe(self, obs: dict) -> None:
        t = obs["t"]
        if t == self._observed_t:
            return
        self._observed_t = t
        bits = tuple(obs["audio"]["frame"])
        thirst = obs["intero"]["thirst"]

        if bits:
            self.audio_history.append((t, bits))
        self.audio_history = [(ts, bs) for ts, bs in self.audio_history
                              if t - ts <= self.window]

        if self.prev_thirst is not None:
            drop = self.prev_thirst - thirst
            if drop >= RELIEF_DELTA:
                # Each bit is credited once per relief event, however many
                # frames inside the window carried it.
                recent: set[int] = set()
                for _, bs in self.audio_history:
                    recent.update(bs)
                for bit in recent:
                    self.store.add(bit, TAG_RELIEF, drop)
        self.prev_thirst = thirst

        if bits:
            if thirst > self.cry_threshold:
                for bit in bits:
                    self.store.add(bit, TAG_THIRST_HIGH, 1.0)
            kinds = set()
            retina = obs["retina"]
            for r in range(FOVEA_LO, FOVEA_HI):
                for c in range(FOVEA_LO, FOVEA_HI):
                    kind = retina[r * 16 + c][0]
                    if kind in FOVEA_KINDS:
                        kinds.add(kind)
            for kind in kinds:
                for bit in bits:
                    self.store.add(bit, seen_tag(kind), 1.0)

        # Word comprehension: collect an utterance, score it on the silence edge.
        if bits:
            self.utterance_bits.update(bits)
            self.hearing = True
        elif self.hearing:
            self.hearing = False
            target = self._score_kinds(self.utterance_bits)
            self.utterance_bits = set()
            if target is not None:
                self.target_kind = target
                self.steer_until = t + COMPREHEND_STEPS

    def _score_kinds(self, bits: set[int]) -> int | None:
        best_kind, best_score = None, 0.0
        for kind in FOVEA_KINDS:
            tag = seen_tag(kind)
            score = sum(self.store.get(bit, tag) for bit in bits)
            if score > best_score:
                best_kind, best_score = kind, score
        return best_kind

    # -- production ------------------------------------------------------------

    def trained(self) -> bool:
        top = self.store.top_bits(TAG_RELIEF, self.cardinality)
        return (len(top) == self.cardinality
                and all(v >= self.min_count for _, v in top))

    def production_bits(self) -> list[int]:
        return sorted(bit for bit, _ in self.store.top_bits(TAG_RELIEF,
                                                            self.cardinality))

    def act(self, obs: dict) -> dict:
        self.observe(obs)
        t = obs["t"]
        inner = make_action()
        if self.target_kind is not None and t <= self.steer_until \
                and not obs["audio"]["frame"]:
            turn = self._steer(obs)
            if turn is not None:
                inner["muscles"]["head_turn"] = turn
        claims = evaluate(self.rules, obs)
        action = merge_action(inner, claims)

        vocal_claim = claims.get("vocal")
        suck_owns_vocal = vocal_claim is not None and vocal_claim[1] >= PRIORITY_SUCK
        wants = (obs["stage"] == SPEECH_STAGE
                 and obs["intero"]["thirst"] > self.cry_threshold
                 and not suck_owns_vocal and self.trained())

        if suck_owns_vocal:
            self.producing = 0
        elif self.producing > 0:
            action["vocal"] = {"kind": "speech", "frame": list(self.production_frame)}
            self.producing -= 1
            if self.producing == 0:
                self.refractory = self.refractory_steps
        elif wants:
            if self.refractory > 0:
                self.refractory -= 1
                action["vocal"] = {"kind": "none"}   # asking replaces crying
            else:
                self.production_frame = self.production_bits()
                action["vocal"] = {"kind": "speech",
                                   "frame": list(self.production_frame)}
                self.producing = self.fps - 1
                if self.producing == 0:
                    self.refractory = self.refractory_steps
        return action

    def _steer(self, obs: dict) -> float | None:
        retina = obs["retina"]
        offsets = [column_offset(c) for c in range(16)
                   if any(retina[r * 16 + c][0] == self.target_kind
                          for r in range(16))]
        if not offsets:
            return None
        mean = sum(offsets) / len(offsets)
        return round(max(-1.0, min(1.0, mean / 0.2)), 6)

    # -- persistence -------------------------------------------------------------

    def dump_store(self) -> str:
        return self.store.to_json()

    def load_store(self, text: str) -> None:
        self.store = AssociationStore.from_json(text)


AGENT_KINDS = ("reflex", "babbler", "associator", "null")


def make_agent(kind: str, seed: int = 0, cry_threshold: float = 0.6):
    if kind == "reflex":
        return ReflexAgent(cry_threshold)
    if kind == "babbler":
        return BabblerAgent(seed)
    if kind == "associator":
        return AssociatorAgent(cry_threshold)
    if kind == "null":
        return NullAgent()
    raise ValueError(f"unknown agent kind {kind!r}")
