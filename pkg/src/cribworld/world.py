"""World core: room, entities, sound propagation, deterministic stepping.

The room is a 20x20 m continuous 2D box.  Entities are bounding circles (plus
the four boundary walls); sounds live exactly one step and are delivered on
the step after emission.  Advancing a world is a pure function of (state,
inputs), checked by hashing a canonical serialization with FNV-1a 64.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .rng import FNV64_OFFSET, Xoshiro256StarStar, fnv1a64

log = logging.getLogger(__name__)

ROOM_SIZE = 20.0
VIEW_RANGE = 10.0
CRY_RANGE = 28.0            # cries carry room-wide; see decisions ledger
SPEECH_RANGE = 8.0
SPEECH_FLIP_METERS = 4.0    # one extra bit flip per started 4 m of distance
CRY_FLOOR = 0.01

KIND_NONE = 0
KIND_WALL = 1
KIND_CRIB = 2
KIND_CAREGIVER = 3
KIND_TOY = 4
KIND_BOTTLE_WATER = 5
KIND_BOTTLE_MILK = 6
KIND_AGENT = 7

KIND_NAMES = {
    KIND_NONE: "none",
    KIND_WALL: "wall",
    KIND_CRIB: "crib",
    KIND_CAREGIVER: "caregiver",
    KIND_TOY: "toy",
    KIND_BOTTLE_WATER: "bottle_water",
    KIND_BOTTLE_MILK: "bottle_milk",
    KIND_AGENT: "agent",
}

KIND_RADII = {
    KIND_CRIB: 0.5,
    KIND_CAREGIVER: 0.3,
    KIND_TOY: 0.2,
    KIND_BOTTLE_WATER: 0.15,
    KIND_BOTTLE_MILK: 0.15,
    KIND_AGENT: 0.25,
}

CRIB_POS = (4.0, 4.0)
IDLE_POST = (16.0, 16.0)
BOTTLE_WATER_HOME = (16.4, 16.0)
BOTTLE_MILK_HOME = (15.6, 16.0)

HAND_OFFSET = 0.25   # carried item sits this far along the holder's facing
MOUTH_OFFSET = 0.3   # mouth-held bottle sits this far along the agent's gaze


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi


def clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


@dataclass
class Entity:
    id: int
    kind: int
    name: str
    x: float
    y: float
    facing: float = 0.0
    color_code: int = 0
    held_by: int | None = None
    held_slot: str = ""          # "hand" or "mouth" while held
    home_x: float = 0.0
    home_y: float = 0.0
    min_stage: int = 0           # first curriculum stage at which it exists
    radius: float = field(init=False, default=0.0)

    def __post_init__(self):
        self.radius = KIND_RADII.get(self.kind, 0.0)


@dataclass(frozen=True)
class SoundEvent:
    source_id: int
    x: float
    y: float
    kind: str                    # "cry" | "speech" | "ambient"
    emitted_step: int
    loudness: float = 0.0        # cry only
    frame: tuple[int, ...] = ()  # speech only


@dataclass(frozen=True)
class ReceivedSound:
    source_id: int
    kind: str
    intensity: float
    bearing: float               # absolute bearing from the listener, radians
    frame: tuple[int, ...] = ()


# World commands, applied in order by step_world.

@dataclass(frozen=True)
class CmdMove:
    entity_id: int
    x: float
    y: float
    facing: float


@dataclass(frozen=True)
class CmdAttach:
    entity_id: int
    holder_id: int
    slot: str                    # "hand" | "mouth"


@dataclass(frozen=True)
class CmdRelease:
    entity_id: int
    x: float
    y: float


@dataclass
class WorldState:
    step: int
    entities: dict[int, Entity]
    pending_sounds: list[SoundEvent]
    rng: Xoshiro256StarStar
    room_size: float = ROOM_SIZE
    version: int = 0   # bumps whenever any entity field may have changed

    def entity(self, entity_id: int) -> Entity:
        return self.entities[entity_id]

    def touch_version(self) -> None:
        """Call after mutating entities directly (outside step_world)."""
        self.version += 1


def audible(world: WorldState, listener_xy: tuple[float, float],
            event: SoundEvent) -> ReceivedSound | None:
    """Propagate one sound event to a listener position.

    Cries fall off linearly over CRY_RANGE and drop out below CRY_FLOOR.
    Speech is delivered within SPEECH_RANGE, with floor(d / 4) extra bit
    flips applied to the frame (drawn from the world stream).
    """
    lx, ly = listener_xy
    dx, dy = event.x - lx, event.y - ly
    d = math.hypot(dx, dy)
    bearing = math.atan2(dy, dx) if d > 1e-12 else 0.0
    if event.kind == "cry":
        intensity = event.loudness * max(0.0, 1.0 - d / CRY_RANGE)
        if intensity < CRY_FLOOR:
            return None
        return ReceivedSound(event.source_id, "cry", intensity, bearing)
    if event.kind == "speech":
        if d > SPEECH_RANGE:
            return None
        flips = int(d // SPEECH_FLIP_METERS)
        frame = event.frame
        if flips > 0 and frame:
            from .codec import apply_noise
            frame = apply_noise(frame, flips, world.rng, dimension=512)
        intensity = max(0.1, 1.0 - d / SPEECH_RANGE)
        return ReceivedSound(event.source_id, "speech", intensity, bearing, frame)
    return None


def _ray_walls(ox: float, oy: float, dx: float, dy: float, size: float) -> float:
    best = math.inf
    if dx > 1e-12:
        best = min(best, (size - ox) / dx)
    elif dx < -1e-12:
        best = min(best, -ox / dx)
    if dy > 1e-12:
        best = min(best, (size - oy) / dy)
    elif dy < -1e-12:
        best = min(best, -oy / dy)
    return best


def visible_circles(world: WorldState, exclude_id: int | None,
                    present: set[int] | None) -> list[tuple[float, float, float, int]]:
    """(x, y, radius, kind) tuples for every raycastable entity."""
    circles = []
    for ent in world.entities.values():
        if ent.kind == KIND_WALL or ent.id == exclude_id or ent.radius <= 0.0:
            continue
        if present is not None and ent.id not in present:
            continue
        circles.append((ent.x, ent.y, ent.radius, ent.kind))
    return circles


def cast_ray(ox: float, oy: float, angle: float, circles, room_size: float
             ) -> tuple[int, float, float]:
    """Nearest hit as (kind_code, normalized depth, raw meters)."""
    dx, dy = math.cos(angle), math.sin(angle)
    best_t = _ray_walls(ox, oy, dx, dy, room_size)
    best_kind = KIND_WALL if math.isfinite(best_t) else KIND_NONE
    sqrt = math.sqrt
    for cx, cy, r, kind in circles:
        fx, fy = cx - ox, cy - oy
        dist2 = fx * fx + fy * fy
        if dist2 <= r * r:
            continue       # inside the circle: invisible, like the crib
        b = fx * dx + fy * dy
        if b <= 0.0 or b >= best_t + r:
            continue
        disc = b * b - dist2 + r * r
        if disc < 0.0:
            continue
        t = b - sqrt(disc)
        if 0.0 < t < best_t:
            best_t, best_kind = t, kind
    if not math.isfinite(best_t):
        return KIND_NONE, 1.0, math.inf
    return best_kind, min(best_t / VIEW_RANGE, 1.0), best_t


def raycast(world: WorldState, origin: tuple[float, float], angle: float,
            exclude_id: int | None = None,
            present: set[int] | None = None) -> tuple[int, float, float]:
    """Nearest hit along the ray: (kind_code, normalized depth, raw meters).

    Depth is distance / VIEW_RANGE clamped to 1.0; no hit reports
    (KIND_NONE, 1.0, inf).  `present` restricts which entity ids exist.
    """
    circles = visible_circles(world, exclude_id, present)
    return cast_ray(origin[0], origin[1], angle, circles, world.room_size)


def _update_held_positions(world: WorldState, gaze: float) -> None:
    for ent in world.entities.values():
        if ent.held_by is None:
            continue
        holder = world.entities.get(ent.held_by)
        if holder is None:
            continue
        if ent.held_slot == "mouth":
            ang = gaze if holder.kind == KIND_AGENT else holder.facing
            off = MOUTH_OFFSET
        else:
            ang = holder.facing
            off = HAND_OFFSET
        ent.x = holder.x + off * math.cos(ang)
        ent.y = holder.y + off * math.sin(ang)


def step_world(world: WorldState, commands, new_sounds, agent_gaze: float = 0.0,
               events: list | None = None, scene_changed: bool = False) -> None:
    """Apply commands, roll sounds over, advance the step counter in place."""
    size = world.room_size
    applied = False
    for cmd in commands:
        ent = world.entities.get(cmd.entity_id)
        if ent is None:
            log.warning("stale command for missing entity %s", cmd.entity_id)
            if events is not None:
                events.append({"type": "stale_command", "entity": cmd.entity_id})
            continue
        if isinstance(cmd, CmdMove):
            ent.x = clamp(cmd.x, 0.0, size)
            ent.y = clamp(cmd.y, 0.0, size)
            ent.facing = wrap_angle(cmd.facing)
            applied = True
        elif isinstance(cmd, CmdAttach):
            if cmd.holder_id not in world.entities:
                log.warning("stale attach: holder %s missing", cmd.holder_id)
                if events is not None:
                    events.append({"type": "stale_command", "entity": cmd.holder_id})
                continue
            ent.held_by = cmd.holder_id
            ent.held_slot = cmd.slot
            applied = True
        elif isinstance(cmd, CmdRelease):
            ent.held_by = None
            ent.held_slot = ""
            ent.x = clamp(cmd.x, 0.0, size)
            ent.y = clamp(cmd.y, 0.0, size)
            applied = True
    # Held positions derive from holder pose and gaze, so they can only move
    # when a command was applied or the gaze changed.
    if applied or scene_changed:
        _update_held_positions(world, agent_gaze)
        world.version += 1
    world.pending_sounds = list(new_sounds)
    world.step += 1


def entity_string(e: Entity) -> str:
    held = str(e.held_by) if e.held_by is not None else "-"
    return (f"e={e.id},{e.kind},{e.name},{e.x:.6f},{e.y:.6f},{e.facing:.6f},"
            f"{e.color_code},{held},{e.held_slot or '-'}")


def canonical_entities(world: WorldState) -> str:
    """Entity block of the canonical form: sorted by id, 6-decimal floats."""
    return "|".join(entity_string(world.entities[eid])
                    for eid in sorted(world.entities))


def canonical_suffix(world: WorldState) -> str:
    """Sound, RNG and step block; cheap to rebuild every step."""
    parts: list[str] = []
    for s in world.pending_sounds:
        bits = ".".join(str(b) for b in s.frame)
        parts.append(
            f"snd={s.source_id},{s.kind},{s.x:.6f},{s.y:.6f},{s.emitted_step},"
            f"{s.loudness:.6f},{bits}")
    rw = world.rng.state_words()
    parts.append(f"rng={rw[0]},{rw[1]},{rw[2]},{rw[3]}")
    parts.append(f"s={world.step}")
    return "|".join(parts)


def canonical_serialize(world: WorldState) -> str:
    return canonical_entities(world) + "|" + canonical_suffix(world)


class WorldHasher:
    """FNV-1a over the canonical serialization, resuming from cached states.

    Per-entity hash states are memoized in id order; only entities from the
    first changed one onward are re-hashed (movers carry the highest ids), and
    the cheap sound/rng/step suffix is always re-hashed.
    """

    def __init__(self):
        self._version = None
        self._states: list[tuple[str, int]] = []
        self._state = FNV64_OFFSET

    def hash(self, world: WorldState) -> int:
        if world.version != self._version:
            self._version = world.version
            state = FNV64_OFFSET
            cached = self._states
            rebuilt: list[tuple[str, int]] = []
            reuse = True
            for i, eid in enumerate(sorted(world.entities)):
                chunk = entity_string(world.entities[eid]) + "|"
                if reuse and i < len(cached) and cached[i][0] == chunk:
                    state = cached[i][1]
                    rebuilt.append(cached[i])
                else:
                    reuse = False
                    state = fnv1a64(chunk.encode("utf-8"), state)
                    rebuilt.append((chunk, state))
            self._states = rebuilt
            self._state = state
        return fnv1a64(canonical_suffix(world).encode("utf-8"), self._state)


def world_hash(world: WorldState) -> int:
    return fnv1a64(canonical_serialize(world).encode("utf-8"))
