"""The infant body: muscle channels in, sensor bundles out.

The infant is immobile in its crib.  It can turn its head (gaze), swing and
extend one arm, set a grasp level, and suck.  Sensors are a 16x16 raycast
retina over a 120 degree field of view, an 8x8 torso touch grid with mouth /
hand / crib contact scalars, and proprioception.  All sensor outputs are pure
functions of (world, body).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import world as w

HEAD_TURN_RATE = 0.2     # radians per step at full command
ARM_TURN_RATE = 0.2
ARM_EXTEND_RATE = 0.1
SUCK_THRESHOLD = 0.5
INGEST_UNIT = 0.05       # drive units per step at suck=1.0
HAND_REACH = 0.6         # max hand distance from the shoulder at extension 1.0

RETINA_N = 16
FOV_DEG = 120.0
TOUCH_N = 8

_COL_OFFSETS = [math.radians(FOV_DEG / 2 - (i + 0.5) * (FOV_DEG / RETINA_N))
                for i in range(RETINA_N)]
# Rows fake elevation: extreme rows see a shorter range, so the observation
# keeps an image-like shape in a flat world.
_ROW_RANGES = [w.VIEW_RANGE * math.cos(off) for off in _COL_OFFSETS]


@dataclass
class MuscleCommand:
    head_turn: float = 0.0
    arm_turn: float = 0.0
    arm_extend: float = 0.0
    grasp: float = 0.0
    suck: float = 0.0

    def clamped(self) -> tuple["MuscleCommand", list[str]]:
        """Clamp every channel on ingestion; out-of-range is flagged, never rejected."""
        flagged: list[str] = []
        vals = {}
        for name, lo, hi in (("head_turn", -1.0, 1.0), ("arm_turn", -1.0, 1.0),
                             ("arm_extend", -1.0, 1.0), ("grasp", 0.0, 1.0),
                             ("suck", 0.0, 1.0)):
            v = float(getattr(self, name))
            c = w.clamp(v, lo, hi)
            if c != v:
                flagged.append(name)
            vals[name] = c
        return MuscleCommand(**vals), flagged


@dataclass
class AgentBody:
    x: float = w.CRIB_POS[0]
    y: float = w.CRIB_POS[1]
    gaze: float = 0.0
    arm_angle: float = 0.0
    arm_extension: float = 0.0
    grasp: float = 0.0
    suck: float = 0.0
    mouth_contact: int | None = None   # entity id of a bottle held to the mouth
    held_toy: int | None = None


@dataclass
class TouchGrid:
    torso: list[float] = field(default_factory=lambda: [0.0] * (TOUCH_N * TOUCH_N))
    mouth: float = 0.0
    hand: float = 0.0
    crib: float = 0.0


def apply_muscles(body: AgentBody, cmd: MuscleCommand) -> None:
    body.gaze = w.wrap_angle(body.gaze + cmd.head_turn * HEAD_TURN_RATE)
    body.arm_angle = w.wrap_angle(body.arm_angle + cmd.arm_turn * ARM_TURN_RATE)
    body.arm_extension = w.clamp(body.arm_extension + cmd.arm_extend * ARM_EXTEND_RATE,
                                 0.0, 1.0)
    body.grasp = cmd.grasp
    body.suck = cmd.suck


def hand_position(body: AgentBody) -> tuple[float, float]:
    r = body.arm_extension * HAND_REACH
    return (body.x + r * math.cos(body.arm_angle),
            body.y + r * math.sin(body.arm_angle))


def render_retina_flat(world: w.WorldState, body: AgentBody, agent_id: int,
                       present: set[int]) -> tuple[list[int], list[float]]:
    """Row-major 16x16 grid as flat (kinds, depths) lists.

    One raycast per column; each row masks hits beyond its range so the same
    bearing fades out toward the top and bottom of the image.
    """
    circles = w.visible_circles(world, agent_id, present)
    hits = []
    min_range = _ROW_RANGES[0]
    max_range = max(_ROW_RANGES)
    uniform = True
    for off in _COL_OFFSETS:
        kind, depth, meters = w.cast_ray(body.x, body.y, body.gaze + off,
                                         circles, world.room_size)
        if kind != w.KIND_NONE and meters > max_range:
            kind, depth, meters = w.KIND_NONE, 1.0, math.inf
        hits.append((kind, round(depth, 6), meters))
        if kind != w.KIND_NONE and meters > min_range:
            uniform = False
    if uniform:
        # Every hit is close enough to appear in all rows, so one row repeats.
        row_k = [kind for kind, _, _ in hits]
        row_d = [depth if kind != w.KIND_NONE else 1.0
                 for kind, depth, _ in hits]
        return row_k * RETINA_N, row_d * RETINA_N
    kinds: list[int] = []
    depths: list[float] = []
    for rng_r in _ROW_RANGES:
        for kind, depth, meters in hits:
            if kind != w.KIND_NONE and meters <= rng_r:
                kinds.append(kind)
                depths.append(depth)
            else:
                kinds.append(w.KIND_NONE)
                depths.append(1.0)
    return kinds, depths


def render_retina(world: w.WorldState, body: AgentBody, agent_id: int,
                  present: set[int]) -> list[tuple[int, float]]:
    """Row-major 16x16 grid of (kind_code, depth) pairs."""
    kinds, depths = render_retina_flat(world, body, agent_id, present)
    return list(zip(kinds, depths))


def sample_touch(world: w.WorldState, body: AgentBody, feeding: bool) -> TouchGrid:
    touch = TouchGrid()
    touch.crib = 1.0
    if body.mouth_contact is not None:
        touch.mouth = 1.0
    if body.held_toy is not None:
        touch.hand = body.grasp
    if feeding:
        # The caregiver supports the torso while feeding: a fixed central patch.
        for r in range(2, 6):
            for c in range(2, 6):
                touch.torso[r * TOUCH_N + c] = 1.0
    return touch


def ingest_if_sucking(world: w.WorldState, body: AgentBody) -> tuple[str, float] | None:
    """(substance, amount) when actively sucking on a bottle, else None."""
    if body.suck <= SUCK_THRESHOLD or body.mouth_contact is None:
        return None
    ent = world.entities.get(body.mouth_contact)
    if ent is None:
        return None
    if ent.kind == w.KIND_BOTTLE_WATER:
        return "water", INGEST_UNIT * body.suck
    if ent.kind == w.KIND_BOTTLE_MILK:
        return "milk", INGEST_UNIT * body.suck
    return None


def update_grasp(world: w.WorldState, body: AgentBody, agent_id: int,
                 present: set[int]) -> None:
    """Pick up / drop a toy based on grasp level and hand proximity."""
    if body.held_toy is not None:
        if body.grasp <= SUCK_THRESHOLD:
            ent = world.entities.get(body.held_toy)
            if ent is not None:
                ent.held_by = None
                ent.held_slot = ""
                world.touch_version()
            body.held_toy = None
        return
    if body.grasp <= SUCK_THRESHOLD:
        return
    hx, hy = hand_position(body)
    for ent in world.entities.values():
        if ent.kind != w.KIND_TOY or ent.id not in present or ent.held_by is not None:
            continue
        if math.hypot(ent.x - hx, ent.y - hy) <= 0.3:
            ent.held_by = agent_id
            ent.held_slot = "hand"
            body.held_toy = ent.id
            world.touch_version()
            return


def column_offset(col: int) -> float:
    """Egocentric bearing of a retina column center, radians (left positive)."""
    return _COL_OFFSETS[col]
