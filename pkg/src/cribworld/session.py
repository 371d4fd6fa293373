"""Session facade: reset/step lifecycle, observation schema, recording, replay.

A session owns one world, one infant body, one caregiver and one PRNG stream.
Determinism contract: (config, action sequence) fixes the episode log bit for
bit.  The stream is seeded with splitmix64 and drawn in a fixed order: the
codebook first, then entity placement, then per-step needs.

Observations are plain dicts shaped exactly like their wire form.  They never
contain a reward, return or score field; agents derive any such signal
themselves from consecutive observations.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from . import body as B
from . import drives as D
from . import world as w
from .caregiver import CaregiverController, CaregiverParams
from .codec import (DEFAULT_CARDINALITY, DEFAULT_DIMENSION, DEFAULT_FRAMES_PER_SYMBOL,
                    DEFAULT_GAP_FRAMES, DEFAULT_THETA_MIN, SdrCodebook,
                    build_codebook, codebook_from_rng, validate_frame)
from .curriculum import (DEFAULT_DURATIONS, MODE_FEEDING, STAGE_NAMES,
                         VISION_BLUR, VISION_OFF, StageSchedule, blur_flat,
                         gate_action)
from .reflexes import ReflexConfig, default_reflexes, evaluate, merge_action
from .rng import Xoshiro256StarStar, fnv1a64

PROTOCOL_VERSION = "1"
TOY_NAMES = ("BALL", "DUCK", "CUBE", "BEAR")

# Movers carry the highest ids so the canonical-hash prefix stays cacheable.
AGENT_ID = 0
CRIB_ID = 1
FIRST_TOY_ID = 2
FIRST_WALL_ID = 6
CAREGIVER_ID = 10
BOTTLE_WATER_ID = 11
BOTTLE_MILK_ID = 12


class ConfigError(ValueError):
    """Invalid session config; the message starts with the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class NoSessionError(RuntimeError):
    pass


class ActionDecodeError(ValueError):
    pass


@dataclass
class CodecParams:
    dimension: int = DEFAULT_DIMENSION
    cardinality_k: int = DEFAULT_CARDINALITY
    frames_per_symbol: int = DEFAULT_FRAMES_PER_SYMBOL
    gap_frames: int = DEFAULT_GAP_FRAMES
    theta_min: int = DEFAULT_THETA_MIN


@dataclass
class SessionConfig:
    seed: int = 7
    codec_seed: int | None = None        # share one language across worlds
    start_stage: int = 0
    start_thirst: float = 0.0
    server_reflexes: bool = False
    record: str | None = None
    codec: CodecParams = field(default_factory=CodecParams)
    drives: D.DriveParams = field(default_factory=D.DriveParams)
    caregiver: CaregiverParams = field(default_factory=CaregiverParams)
    durations: tuple[int, ...] = DEFAULT_DURATIONS
    reflexes: ReflexConfig = field(default_factory=ReflexConfig)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["durations"] = list(self.durations)
        return d

    @staticmethod
    def from_dict(data: dict) -> "SessionConfig":
        if not isinstance(data, dict):
            raise ConfigError("config", "must be a JSON object")
        cfg = SessionConfig()

        def _num(path, value, lo=None, hi=None, integer=False):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(path, "must be a number")
            if integer and int(value) != value:
                raise ConfigError(path, "must be an integer")
            if lo is not None and value < lo:
                raise ConfigError(path, f"must be >= {lo}")
            if hi is not None and value > hi:
                raise ConfigError(path, f"must be <= {hi}")
            return int(value) if integer else float(value)

        known = {"seed", "codec_seed", "start_stage", "start_thirst",
                 "server_reflexes", "record", "codec", "drives", "caregiver",
                 "durations", "reflexes"}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown config field")
        if "seed" in data:
            cfg.seed = _num("seed", data["seed"], lo=0, integer=True)
        if data.get("codec_seed") is not None:
            cfg.codec_seed = _num("codec_seed", data["codec_seed"], lo=0, integer=True)
        if "start_stage" in data:
            cfg.start_stage = _num("start_stage", data["start_stage"], lo=0,
                                   hi=len(STAGE_NAMES) - 1, integer=True)
        if "start_thirst" in data:
            cfg.start_thirst = _num("start_thirst", data["start_thirst"], 0.0, 1.0)
        if "server_reflexes" in data:
            if not isinstance(data["server_reflexes"], bool):
                raise ConfigError("server_reflexes", "must be a boolean")
            cfg.server_reflexes = data["server_reflexes"]
        if data.get("record") is not None:
            if not isinstance(data["record"], str):
                raise ConfigError("record", "must be a path string")
            cfg.record = data["record"]
        codec = data.get("codec", {})
        for name, lo in (("dimension", 1), ("cardinality_k", 1),
                         ("frames_per_symbol", 1), ("gap_frames", 0), ("theta_min", 0)):
            if name in codec:
                setattr(cfg.codec, name, _num(f"codec.{name}", codec[name], lo=lo,
                                              integer=True))
        if cfg.codec.cardinality_k > cfg.codec.dimension:
            raise ConfigError("codec.cardinality_k", "must not exceed codec.dimension")
        drv = data.get("drives", {})
        for name in ("thirst_rate", "hunger_rate"):
            if name in drv:
                setattr(cfg.drives, name, _num(f"drives.{name}", drv[name], lo=0.0))
        if "cry_threshold" in drv:
            cfg.drives.cry_threshold = _num("drives.cry_threshold",
                                            drv["cry_threshold"], 0.0, 1.0)
            if not 0.0 < cfg.drives.cry_threshold < 1.0:
                raise ConfigError("drives.cry_threshold", "must be inside (0, 1)")
        cg = data.get("caregiver", {})
        for name, integer in (("walk_speed", False), ("cry_intensity_threshold", False),
                              ("narration_repeats", True), ("feeding_timeout", True),
                              ("word_overlap_threshold", False),
                              ("play_intro_period", True), ("play_intro_dwell", True)):
            if name in cg:
                value = _num(f"caregiver.{name}", cg[name], lo=0, integer=integer)
                if value <= 0:
                    raise ConfigError(f"caregiver.{name}", "must be positive")
                setattr(cfg.caregiver, name, value)
        if "durations" in data:
            durs = data["durations"]
            if not isinstance(durs, list) or len(durs) != len(STAGE_NAMES):
                raise ConfigError("durations",
                                  f"must be a list of {len(STAGE_NAMES)} step counts")
            out = []
            for i, dur in enumerate(durs):
                out.append(_num(f"durations[{i}]", dur, integer=True))
            for i, dur in enumerate(out):
                if dur < 1:
                    raise ConfigError(f"durations[{i}]",
                                      "stage start steps must be strictly increasing "
                                      "(every duration must be >= 1)")
            cfg.durations = tuple(out)
        rfl = data.get("reflexes", {})
        for name in ("suck", "cry", "orient"):
            if name in rfl:
                if not isinstance(rfl[name], bool):
                    raise ConfigError(f"reflexes.{name}", "must be a boolean")
                setattr(cfg.reflexes, name, rfl[name])
        return cfg


NULL_ACTION = {"muscles": {"head_turn": 0.0, "arm_turn": 0.0, "arm_extend": 0.0,
                           "grasp": 0.0, "suck": 0.0},
               "vocal": {"kind": "none"}}


def make_action(head_turn=0.0, arm_turn=0.0, arm_extend=0.0, grasp=0.0, suck=0.0,
                vocal=None) -> dict:
    return {"muscles": {"head_turn": head_turn, "arm_turn": arm_turn,
                        "arm_extend": arm_extend, "grasp": grasp, "suck": suck},
            "vocal": vocal or {"kind": "none"}}


def normalize_action(action, dimension: int) -> tuple[dict, list[str]]:
    """Canonical clamped action dict; flags name the clamped channels."""
    if not isinstance(action, dict):
        raise ActionDecodeError("action must be an object")
    muscles_in = action.get("muscles", {})
    if not isinstance(muscles_in, dict):
        raise ActionDecodeError("action.muscles must be an object")
    cmd = B.MuscleCommand()
    for name in ("head_turn", "arm_turn", "arm_extend", "grasp", "suck"):
        if name in muscles_in:
            v = muscles_in[name]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ActionDecodeError(f"action.muscles.{name} must be a finite number")
            setattr(cmd, name, float(v))
    cmd, flagged = cmd.clamped()
    vocal_in = action.get("vocal") or {"kind": "none"}
    if not isinstance(vocal_in, dict):
        raise ActionDecodeError("action.vocal must be an object")
    kind = vocal_in.get("kind", "none")
    if kind == "none":
        vocal = {"kind": "none"}
    elif kind == "cry":
        loud = vocal_in.get("loudness", 1.0)
        if isinstance(loud, bool) or not isinstance(loud, (int, float)) or not math.isfinite(loud):
            raise ActionDecodeError("action.vocal.loudness must be a finite number")
        clamped = w.clamp(float(loud), 0.0, 1.0)
        if clamped != loud:
            flagged.append("loudness")
        vocal = {"kind": "cry", "loudness": round(clamped, 6)}
    elif kind == "speech":
        frame = vocal_in.get("frame", [])
        if not isinstance(frame, (list, tuple)):
            raise ActionDecodeError("action.vocal.frame must be an index array")
        try:
            bits = validate_frame(sorted(set(int(i) for i in frame)), dimension)
        except (TypeError, ValueError) as exc:
            raise ActionDecodeError(f"action.vocal.frame invalid: {exc}") from exc
        vocal = {"kind": "speech", "frame": list(bits)}
    else:
        raise ActionDecodeError(f"action.vocal.kind {kind!r} is not one of none|cry|speech")
    return {"muscles": {"head_turn": cmd.head_turn, "arm_turn": cmd.arm_turn,
                        "arm_extend": cmd.arm_extend, "grasp": cmd.grasp,
                        "suck": cmd.suck},
            "vocal": vocal}, flagged


def dumps(obj) -> str:
    """Canonical JSON for logs and the wire: compact separators, no key sorting."""
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def scan_forbidden_keys(obj, tokens=("reward", "return", "score")) -> list[str]:
    """Key names anywhere in a JSON value that smell like a reward channel."""
    hits: list[str] = []

    def visit(node, path):
        if isinstance(node, dict):
            for k, v in node.items():
                lowered = str(k).lower()
                if any(tok in lowered for tok in tokens):
                    hits.append(f"{path}.{k}" if path else str(k))
                visit(v, f"{path}.{k}" if path else str(k))
        elif isinstance(node, list):
            for i, v in enumerate(node):
                visit(v, f"{path}[{i}]")

    visit(obj, "")
    return hits


class Session:
    """One live environment instance; strictly sequential stepping."""

    def __init__(self, config: SessionConfig | None = None):
        self.config = config or SessionConfig()
        self._live = False
        self._record_fh = None
        self._hasher = w.WorldHasher()

    # -- lifecycle -----------------------------------------------------------

    def reset(self) -> dict:
        cfg = self.config
        self.rng = Xoshiro256StarStar(cfg.seed)
        if cfg.codec_seed is not None:
            self.codebook = build_codebook(cfg.codec_seed, cfg.codec.dimension,
                                           cfg.codec.cardinality_k)
        else:
            self.codebook = codebook_from_rng(self.rng, cfg.codec.dimension,
                                              cfg.codec.cardinality_k, cfg.seed)
        self.schedule = StageSchedule(cfg.durations, cfg.start_stage)
        entities = self._place_entities(self.rng)
        self.world = w.WorldState(step=0, entities=entities, pending_sounds=[],
                                  rng=self.rng)
        self.body = B.AgentBody()
        self.drive_state = D.DriveState(thirst=cfg.start_thirst)
        self.controller = CaregiverController(
            CAREGIVER_ID, AGENT_ID, self.codebook, cfg.caregiver,
            cfg.codec.frames_per_symbol, cfg.codec.gap_frames, cfg.codec.theta_min)
        self.vocabulary = {"WATER": "water", "MILK": "milk"}
        self.reflex_rules = default_reflexes(cfg.reflexes, cfg.drives.cry_threshold)
        self._events: list[dict] = []
        self._smemo_step = -1
        self._smemo = None
        self._retina_key = None
        self._retina_flat = ([0] * 256, [0.0] * 256)
        self._retina_json = None
        self._audio = {"frame": [], "intensity": 0.0, "bearing": 0.0}
        self._last_obs = self._build_observation()
        self._live = True
        if self._record_fh:
            self._record_fh.close()
        self._record_fh = None
        if cfg.record:
            self._record_fh = open(cfg.record, "w", encoding="utf-8")
            header = {"type": "header", "version": PROTOCOL_VERSION,
                      "config": self._config_for_log()}
            self._record_fh.write(dumps(header) + "\n")
            self._write_record(None, self._last_obs)
        return self._last_obs

    def close(self) -> None:
        if self._record_fh:
            self._record_fh.close()
            self._record_fh = None
        self._live = False

    def _config_for_log(self) -> dict:
        d = self.config.to_dict()
        d["record"] = None
        return d

    def _place_entities(self, rng: Xoshiro256StarStar) -> dict[int, w.Entity]:
        ents: dict[int, w.Entity] = {}
        ax, ay = w.CRIB_POS
        px, py = w.IDLE_POST
        ents[AGENT_ID] = w.Entity(AGENT_ID, w.KIND_AGENT, "BABY", ax, ay)
        ents[CRIB_ID] = w.Entity(CRIB_ID, w.KIND_CRIB, "CRIB", ax, ay)
        # Toy placement is the only random part of the layout.
        placed: list[tuple[float, float]] = []
        for i, name in enumerate(TOY_NAMES):
            while True:
                tx = 1.0 + 18.0 * rng.random()
                ty = 1.0 + 18.0 * rng.random()
                if math.hypot(tx - ax, ty - ay) < 2.5:
                    continue
                if math.hypot(tx - px, ty - py) < 2.5:
                    continue
                if any(math.hypot(tx - qx, ty - qy) < 1.0 for qx, qy in placed):
                    continue
                break
            placed.append((tx, ty))
            ents[FIRST_TOY_ID + i] = w.Entity(
                FIRST_TOY_ID + i, w.KIND_TOY, name, tx, ty, color_code=i + 1,
                home_x=tx, home_y=ty, min_stage=2 if i < 2 else 3)
        half = w.ROOM_SIZE / 2
        for j, (wx, wy) in enumerate(((half, 0.0), (w.ROOM_SIZE, half),
                                      (half, w.ROOM_SIZE), (0.0, half))):
            ents[FIRST_WALL_ID + j] = w.Entity(FIRST_WALL_ID + j, w.KIND_WALL,
                                               "WALL", wx, wy)
        ents[CAREGIVER_ID] = w.Entity(CAREGIVER_ID, w.KIND_CAREGIVER, "MOTHER",
                                      px, py, home_x=px, home_y=py)
        bwx, bwy = w.BOTTLE_WATER_HOME
        bmx, bmy = w.BOTTLE_MILK_HOME
        ents[BOTTLE_WATER_ID] = w.Entity(BOTTLE_WATER_ID, w.KIND_BOTTLE_WATER,
                                         "WATER", bwx, bwy, home_x=bwx, home_y=bwy,
                                         min_stage=1)
        ents[BOTTLE_MILK_ID] = w.Entity(BOTTLE_MILK_ID, w.KIND_BOTTLE_MILK,
                                        "MILK", bmx, bmy, home_x=bmx, home_y=bmy,
                                        min_stage=1)
        return ents

    # -- stepping ------------------------------------------------------------

    def _stage_and_mask(self):
        step = self.world.step
        if self._smemo_step != step:
            stage = self.schedule.stage_at(step)
            self._smemo = (stage, self.schedule.mask_at(step))
            self._smemo_step = step
        return self._smemo

    def _present_ids(self) -> set[int]:
        _, mask = self._stage_and_mask()
        present: set[int] = set()
        toy_budget = mask.toys_present
        for ent in self.world.entities.values():
            kind_name = w.KIND_NAMES[ent.kind]
            if kind_name not in mask.entity_kinds_present:
                continue
            if ent.kind == w.KIND_TOY:
                if ent.id - FIRST_TOY_ID >= toy_budget:
                    continue
            present.add(ent.id)
        return present

    def step(self, action) -> dict:
        if not self._live:
            raise NoSessionError("step() before reset()")
        cfg = self.config
        world = self.world
        self._events = []

        normalized, clamped = normalize_action(action, cfg.codec.dimension)
        if clamped:
            self._events.append({"type": "action_clamped", "channels": clamped})
        _, mask_now = self._stage_and_mask()
        gated_action, gate_events = gate_action(mask_now, normalized)
        self._events.extend(gate_events)
        if cfg.server_reflexes:
            gated_action = merge_action(gated_action,
                                        evaluate(self.reflex_rules, self._last_obs))

        old_gaze = self.body.gaze
        B.apply_muscles(self.body, B.MuscleCommand(**gated_action["muscles"]))
        present = self._present_ids()
        B.update_grasp(world, self.body, AGENT_ID, present)

        agent = world.entities[AGENT_ID]
        agent.facing = self.body.gaze
        new_sounds: list[w.SoundEvent] = []
        vocal = gated_action["vocal"]
        if vocal["kind"] == "cry":
            new_sounds.append(w.SoundEvent(AGENT_ID, agent.x, agent.y, "cry",
                                           world.step, loudness=vocal["loudness"]))
        elif vocal["kind"] == "speech":
            new_sounds.append(w.SoundEvent(AGENT_ID, agent.x, agent.y, "speech",
                                           world.step,
                                           frame=tuple(vocal["frame"])))

        # Sounds pending from the previous step are delivered now, caregiver
        # first, then the agent; both orders are fixed for the PRNG stream.
        cg = world.entities[CAREGIVER_ID]
        heard_cg = []
        for ev in world.pending_sounds:
            if ev.source_id == CAREGIVER_ID:
                continue
            got = w.audible(world, (cg.x, cg.y), ev)
            if got is not None:
                heard_cg.append(got)
        heard_agent = []
        for ev in world.pending_sounds:
            got = w.audible(world, (agent.x, agent.y), ev)
            if got is not None:
                heard_agent.append(got)

        commands, cg_sounds, cg_events = self.controller.step(
            world, heard_cg, mask_now, self.vocabulary, present, self.body.gaze)
        self._events.extend(cg_events)
        new_sounds.extend(cg_sounds)

        self._audio = self._mix_audio(heard_agent, mask_now)

        w.step_world(world, commands, new_sounds, agent_gaze=self.body.gaze,
                     events=self._events,
                     scene_changed=self.body.gaze != old_gaze)
        self._sync_mouth()

        D.tick(self.drive_state, cfg.drives)
        meal = B.ingest_if_sucking(world, self.body)
        if meal is not None:
            D.ingest(self.drive_state, meal[0], meal[1])

        self._last_obs = self._build_observation()
        if self._record_fh:
            self._write_record(normalized, self._last_obs)
        return self._last_obs

    def _sync_mouth(self) -> None:
        self.body.mouth_contact = None
        for ent in self.world.entities.values():
            if ent.held_by == AGENT_ID and ent.held_slot == "mouth":
                self.body.mouth_contact = ent.id

    def _mix_audio(self, heard, mask) -> dict:
        bits: set[int] = set()
        intensity = 0.0
        bearing_abs = 0.0
        got_speech = False
        for snd in heard:
            if snd.kind == "speech":
                bits.update(snd.frame)
                got_speech = True
            if snd.intensity > intensity:
                intensity = snd.intensity
                bearing_abs = snd.bearing
        if got_speech and mask.audio_extra_flips > 0:
            from .codec import apply_noise
            bits = set(apply_noise(tuple(sorted(bits)), mask.audio_extra_flips,
                                   self.rng, self.config.codec.dimension))
        if intensity <= 0.0:
            return {"frame": [], "intensity": 0.0, "bearing": 0.0}
        rel = w.wrap_angle(bearing_abs - self.body.gaze)
        return {"frame": sorted(bits), "intensity": round(intensity, 6),
                "bearing": round(rel, 6)}

    def _build_observation(self) -> dict:
        world = self.world
        stage, mask = self._stage_and_mask()
        if mask.vision == VISION_OFF:
            key = ("off",)
            if key != self._retina_key:
                self._retina_key = key
                self._retina_flat = ([0] * 256, [0.0] * 256)
                self._retina_json = None
        else:
            # The scene version plus stage pins the retina exactly; idle
            # stretches reuse the previous render.
            key = (world.version, stage.index)
            if key != self._retina_key:
                present = self._present_ids()
                kinds, depths = B.render_retina_flat(world, self.body, AGENT_ID,
                                                     present)
                if mask.vision == VISION_BLUR:
                    kinds, depths = blur_flat(kinds, depths)
                self._retina_key = key
                self._retina_flat = (kinds, depths)
                self._retina_json = None
        kinds, depths = self._retina_flat
        feeding = self.controller.state.mode == MODE_FEEDING
        touch = B.sample_touch(world, self.body, feeding)
        obs = {
            "t": world.step,
            "stage": stage.index,
            "retina": [[k, d] for k, d in zip(kinds, depths)],
            "audio": dict(self._audio),
            "touch": {"torso": touch.torso,
                      "mouth": touch.mouth,
                      "hand": round(touch.hand, 6),
                      "crib": touch.crib},
            "proprio": {"gaze": round(self.body.gaze, 6),
                        "arm_angle": round(self.body.arm_angle, 6),
                        "arm_extension": round(self.body.arm_extension, 6),
                        "grasp": round(self.body.grasp, 6)},
            "intero": {"thirst": round(self.drive_state.thirst, 6),
                       "hunger": round(self.drive_state.hunger, 6)},
            "events": list(self._events),
        }
        self._events = []
        return obs

    # -- recording / replay ----------------------------------------------------

    def world_hash(self) -> str:
        return f"{self._hasher.hash(self.world):016x}"

    def _write_record(self, action, obs) -> None:
        # The retina dominates the row's bytes and rarely changes, so its JSON
        # fragment is cached alongside the flat render; the assembled line is
        # byte-identical to dumps() of the whole row.
        if self._retina_json is None:
            self._retina_json = dumps(obs["retina"])
        rest = {k: v for k, v in obs.items() if k != "retina"}
        obs_json = dumps(rest)
        obs_json = (obs_json[: obs_json.index('"audio"')]
                    + '"retina":' + self._retina_json + ","
                    + obs_json[obs_json.index('"audio"'):])
        self._record_fh.write(
            f'{{"t":{obs["t"]},"action":{dumps(action)},"obs":{obs_json},'
            f'"world_hash":"{self.world_hash()}"}}\n')

    def flush(self) -> None:
        if self._record_fh:
            self._record_fh.flush()


@dataclass
class ReplayReport:
    steps: int = 0
    divergence_t: int | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.divergence_t is None


class ReplayParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def replay(log_path: str) -> ReplayReport:
    """Re-run a recorded episode and compare every observation and hash."""
    with open(log_path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ReplayParseError(1, "empty log")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ReplayParseError(1, f"bad JSON: {exc}") from exc
    if header.get("type") != "header" or "config" not in header:
        raise ReplayParseError(1, "missing header")
    config = SessionConfig.from_dict(header["config"])
    config.record = None
    session = Session(config)
    report = ReplayReport()
    expected_t = 0
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ReplayParseError(line_no, f"bad JSON: {exc}") from exc
        if not isinstance(row, dict) or "t" not in row or "obs" not in row \
                or "world_hash" not in row:
            raise ReplayParseError(line_no, "row missing t/obs/world_hash")
        if row["t"] != expected_t:
            raise ReplayParseError(line_no, f"t={row['t']} out of order")
        if row["t"] == 0:
            obs = session.reset()
        else:
            obs = session.step(row["action"])
        report.steps += 1
        if session.world_hash() != row["world_hash"]:
            report.divergence_t = row["t"]
            report.detail = "world_hash mismatch"
            return report
        if obs != row["obs"]:
            report.divergence_t = row["t"]
            report.detail = "observation mismatch"
            return report
        expected_t += 1
    return report


def config_fingerprint(config: SessionConfig) -> str:
    payload = dumps(config.to_dict())
    return f"{fnv1a64(payload.encode('utf-8')):016x}"
