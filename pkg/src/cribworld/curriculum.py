"""Developmental staging: fetus to twelve months in five stages.

Each stage gates sensors, action channels, which entities exist, and what the
caregiver is willing to do.  Capabilities only ever grow: later stages see
supersets of earlier ones, vision quality never degrades, audio noise never
increases.  The per-stage table below is the single source of truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

STAGE_NAMES = ("Fetus", "M0_3", "M3_6", "M6_9", "M9_12")

# The fetus stage is short so that thirst (rate 0.001/step) first crosses the
# cry threshold after feeding is already available.
DEFAULT_DURATIONS = (500, 5000, 5000, 5000, 5000)

VISION_OFF = "off"
VISION_BLUR = "blur4x4"
VISION_FULL = "full"
_VISION_RANK = {VISION_OFF: 0, VISION_BLUR: 1, VISION_FULL: 2}

ALL_ACTIONS = frozenset({"head_turn", "arm_turn", "arm_extend", "grasp", "suck",
                         "cry", "speech"})

MODE_IDLE = "Idle"
MODE_APPROACH = "Approach"
MODE_DELIVER = "Deliver"
MODE_FEEDING = "Feeding"
MODE_NARRATE = "Narrate"
MODE_PLAYINTRO = "PlayIntro"
MODE_RETURN = "Return"
WORD_SERVICE = "WordService"   # repertoire entry, not a mode


@dataclass(frozen=True)
class Stage:
    index: int
    name: str
    start_step: int


@dataclass(frozen=True)
class GatingMask:
    vision: str
    audio_extra_flips: int
    actions_enabled: frozenset[str]
    entity_kinds_present: frozenset[str]
    toys_present: int
    caregiver_repertoire: frozenset[str]


_BASE_KINDS = frozenset({"wall", "crib", "agent", "caregiver"})
_FEED_KINDS = _BASE_KINDS | {"bottle_water", "bottle_milk"}
_PLAY_KINDS = _FEED_KINDS | {"toy"}

_BASE_ACTIONS = frozenset({"head_turn", "arm_turn", "arm_extend", "suck", "cry"})
_FEED_MODES = frozenset({MODE_IDLE, MODE_APPROACH, MODE_DELIVER, MODE_FEEDING,
                         MODE_NARRATE, MODE_RETURN})

MASK_TABLE: tuple[GatingMask, ...] = (
    GatingMask(VISION_OFF, 2, _BASE_ACTIONS, _BASE_KINDS, 0,
               frozenset({MODE_IDLE})),
    GatingMask(VISION_BLUR, 0, _BASE_ACTIONS, _FEED_KINDS, 0, _FEED_MODES),
    GatingMask(VISION_FULL, 0, _BASE_ACTIONS, _PLAY_KINDS, 2,
               _FEED_MODES | {MODE_PLAYINTRO}),
    GatingMask(VISION_FULL, 0, _BASE_ACTIONS | {"grasp"}, _PLAY_KINDS, 4,
               _FEED_MODES | {MODE_PLAYINTRO}),
    GatingMask(VISION_FULL, 0, _BASE_ACTIONS | {"grasp", "speech"}, _PLAY_KINDS, 4,
               _FEED_MODES | {MODE_PLAYINTRO, WORD_SERVICE}),
)


@dataclass(frozen=True)
class StageSchedule:
    durations: tuple[int, ...] = DEFAULT_DURATIONS
    start_stage: int = 0
    starts: tuple[int, ...] = field(init=False, default=())

    def __post_init__(self):
        starts = []
        acc = 0
        for d in self.durations:
            starts.append(acc)
            acc += d
        object.__setattr__(self, "starts", tuple(starts))

    def stage_at(self, step: int) -> Stage:
        if step < 0:
            raise ValueError("step must be non-negative")
        idx = len(self.starts) - 1
        for i in range(len(self.starts) - 1, -1, -1):
            if step >= self.starts[i]:
                idx = i
                break
        idx = max(idx, self.start_stage)
        return Stage(idx, STAGE_NAMES[idx], self.starts[idx])

    def mask_at(self, step: int) -> GatingMask:
        return MASK_TABLE[self.stage_at(step).index]


def stage_at(schedule: StageSchedule, step: int) -> Stage:
    return schedule.stage_at(step)


_BLOCK_INDICES = [[r * 16 + c
                   for r in range(br, br + 4) for c in range(bc, bc + 4)]
                  for br in range(0, 16, 4) for bc in range(0, 16, 4)]


def blur_flat(kinds: list[int], depths: list[float]) -> tuple[list[int], list[float]]:
    """Block-average 16x16 down to 4x4 and upsample: modal kind, mean depth."""
    out_k = [0] * len(kinds)
    out_d = [0.0] * len(depths)
    for idx in _BLOCK_INDICES:
        first = kinds[idx[0]]
        depth_sum = 0.0
        uniform = True
        for i in idx:
            depth_sum += depths[i]
            if kinds[i] != first:
                uniform = False
        if uniform:
            modal = first
        else:
            counts: dict[int, int] = {}
            for i in idx:
                k = kinds[i]
                counts[k] = counts.get(k, 0) + 1
            modal = min(sorted(counts), key=lambda k: (-counts[k], k))
        mean_depth = round(depth_sum / len(idx), 6)
        for i in idx:
            out_k[i] = modal
            out_d[i] = mean_depth
    return out_k, out_d


def blur_retina(cells, n: int = 16, block: int = 4) -> list[list]:
    """Pair-cell variant of blur_flat for observation dicts."""
    kinds = [cell[0] for cell in cells]
    depths = [cell[1] for cell in cells]
    out_k, out_d = blur_flat(kinds, depths)
    return [[k, d] for k, d in zip(out_k, out_d)]


def gate_action(mask: GatingMask, action: dict) -> tuple[dict, list[dict]]:
    """Zero disabled action channels, flagging them with an action_gated event."""
    events: list[dict] = []
    muscles = dict(action.get("muscles", {}))
    vocal = action.get("vocal", {"kind": "none"})
    gated: list[str] = []
    for channel in ("head_turn", "arm_turn", "arm_extend", "grasp", "suck"):
        if channel not in mask.actions_enabled and muscles.get(channel, 0.0) != 0.0:
            muscles[channel] = 0.0
            gated.append(channel)
    if vocal.get("kind") == "speech" and "speech" not in mask.actions_enabled:
        vocal = {"kind": "none"}
        gated.append("speech")
    if vocal.get("kind") == "cry" and "cry" not in mask.actions_enabled:
        vocal = {"kind": "none"}
        gated.append("cry")
    if gated:
        events.append({"type": "action_gated", "channels": gated})
    return {"muscles": muscles, "vocal": vocal}, events


def apply_gating(mask: GatingMask, observation: dict,
                 action: dict) -> tuple[dict, dict, list[dict]]:
    """Gate an observation and an action through a stage mask.

    Vision off zeroes the retina, blur block-averages it; disabled action
    channels are zeroed with an `action_gated` event.  Audio noise is applied
    at sound delivery (it needs the session RNG), so this function is
    idempotent.
    """
    obs = dict(observation)
    if mask.vision == VISION_OFF:
        obs["retina"] = [[0, 0.0] for _ in observation["retina"]]
    elif mask.vision == VISION_BLUR:
        obs["retina"] = blur_retina(observation["retina"])
    gated_action, events = gate_action(mask, action)
    return obs, gated_action, events


def check_monotone(table=MASK_TABLE) -> list[str]:
    """Violations of the growth invariants between consecutive stages."""
    problems = []
    for i in range(len(table) - 1):
        a, b = table[i], table[i + 1]
        if not a.entity_kinds_present <= b.entity_kinds_present:
            problems.append(f"stage {i}->{i+1}: entity kinds shrink")
        if not a.actions_enabled <= b.actions_enabled:
            problems.append(f"stage {i}->{i+1}: actions shrink")
        if _VISION_RANK[a.vision] > _VISION_RANK[b.vision]:
            problems.append(f"stage {i}->{i+1}: vision degrades")
        if a.audio_extra_flips < b.audio_extra_flips:
            problems.append(f"stage {i}->{i+1}: audio noise grows")
        if a.toys_present > b.toys_present:
            problems.append(f"stage {i}->{i+1}: toys disappear")
        if not a.caregiver_repertoire <= b.caregiver_repertoire:
            problems.append(f"stage {i}->{i+1}: caregiver repertoire shrinks")
    return problems
