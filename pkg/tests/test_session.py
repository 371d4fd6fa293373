"""Session facade: lifecycle, determinism, schema purity, record/replay."""

import json

import pytest

from cribworld.session import (ActionDecodeError, ConfigError, NoSessionError,
                               NULL_ACTION, ReplayParseError, Session,
                               SessionConfig, config_fingerprint, dumps,
                               make_action, normalize_action, replay,
                               scan_forbidden_keys)


def cry_action(loudness=1.0):
    return make_action(vocal={"kind": "cry", "loudness": loudness})


# -- reset ----------------------------------------------------------------------

def test_reset_is_reproducible():
    a = Session(SessionConfig(seed=7)).reset()
    b = Session(SessionConfig(seed=7)).reset()
    assert dumps(a) == dumps(b)


def test_reset_initial_conditions():
    obs = Session(SessionConfig(seed=7)).reset()
    assert obs["t"] == 0
    assert obs["stage"] == 0
    assert obs["intero"] == {"thirst": 0.0, "hunger": 0.0}
    assert obs["retina"] == [[0, 0.0]] * 256   # fetal vision is off
    assert obs["audio"] == {"frame": [], "intensity": 0.0, "bearing": 0.0}


def test_reset_applies_start_overrides():
    obs = Session(SessionConfig(seed=7, start_stage=4, start_thirst=0.65)).reset()
    assert obs["stage"] == 4
    assert obs["intero"]["thirst"] == 0.65


def test_step_before_reset_raises():
    with pytest.raises(NoSessionError):
        Session(SessionConfig()).step(NULL_ACTION)


# -- config validation --------------------------------------------------------------

def test_config_defaults_complete():
    cfg = SessionConfig.from_dict({})
    assert cfg.seed == 7
    assert cfg.durations == (500, 5000, 5000, 5000, 5000)


def test_config_rejects_zero_duration():
    with pytest.raises(ConfigError) as err:
        SessionConfig.from_dict({"durations": [0, 1, 1, 1, 1]})
    assert err.value.path == "durations[0]"


def test_config_rejects_unknown_field():
    with pytest.raises(ConfigError) as err:
        SessionConfig.from_dict({"rewards": True})
    assert "rewards" in str(err.value)


def test_config_rejects_bad_threshold():
    with pytest.raises(ConfigError) as err:
        SessionConfig.from_dict({"drives": {"cry_threshold": 1.5}})
    assert err.value.path == "drives.cry_threshold"


def test_config_round_trips_through_dict():
    cfg = SessionConfig.from_dict({"seed": 3, "caregiver": {"walk_speed": 0.2},
                                   "codec": {"cardinality_k": 8}})
    again = SessionConfig.from_dict(cfg.to_dict())
    assert again == cfg


def test_config_fingerprint_stable():
    assert config_fingerprint(SessionConfig()) == config_fingerprint(SessionConfig())
    assert config_fingerprint(SessionConfig(seed=8)) != config_fingerprint(SessionConfig())


# -- action normalization ----------------------------------------------------------

def test_normalize_fills_defaults():
    action, flagged = normalize_action({"muscles": {}, "vocal": {"kind": "none"}}, 512)
    assert action == NULL_ACTION
    assert flagged == []


def test_normalize_clamps_and_flags():
    action, flagged = normalize_action(
        {"muscles": {"head_turn": 9.0}, "vocal": {"kind": "cry", "loudness": -2}}, 512)
    assert action["muscles"]["head_turn"] == 1.0
    assert action["vocal"]["loudness"] == 0.0
    assert set(flagged) == {"head_turn", "loudness"}


def test_normalize_speech_frame_sorted_unique():
    action, _ = normalize_action(
        {"muscles": {}, "vocal": {"kind": "speech", "frame": [5, 1, 5, 3]}}, 512)
    assert action["vocal"]["frame"] == [1, 3, 5]


@pytest.mark.parametrize("bad", [
    "nope",
    {"muscles": "x", "vocal": {"kind": "none"}},
    {"muscles": {"head_turn": "fast"}, "vocal": {"kind": "none"}},
    {"muscles": {}, "vocal": {"kind": "hum"}},
    {"muscles": {}, "vocal": {"kind": "speech", "frame": [999]}},
    {"muscles": {}, "vocal": {"kind": "cry", "loudness": float("nan")}},
])
def test_normalize_rejects_malformed(bad):
    with pytest.raises(ActionDecodeError):
        normalize_action(bad, 512)


def test_session_survives_bad_action():
    session = Session(SessionConfig(seed=7))
    session.reset()
    with pytest.raises(ActionDecodeError):
        session.step({"muscles": {}, "vocal": {"kind": "hum"}})
    obs = session.step(NULL_ACTION)
    assert obs["t"] == 1


# -- stepping ------------------------------------------------------------------------

def test_null_step_ticks_drives():
    session = Session(SessionConfig(seed=7))
    session.reset()
    obs = session.step(NULL_ACTION)
    assert obs["t"] == 1
    assert obs["intero"]["thirst"] == pytest.approx(0.001)


def test_cry_reaches_caregiver_across_the_room():
    session = Session(SessionConfig(seed=7, start_stage=1))
    session.reset()
    session.step(cry_action(1.0))
    session.step(NULL_ACTION)   # cry delivered, caregiver reacts
    assert session.controller.state.mode == "Approach"


def test_reflex_wrapper_server_side():
    config = SessionConfig(seed=7, server_reflexes=True)
    session = Session(config)
    obs = session.reset()
    crossing = None
    for _ in range(620):
        obs = session.step(NULL_ACTION)
        if crossing is None and obs["intero"]["thirst"] > 0.6:
            crossing = obs["t"]
            break
    assert crossing is not None
    # Next step the server-side reflex cries on the agent's behalf.
    session.step(NULL_ACTION)
    assert session.world.pending_sounds and session.world.pending_sounds[0].kind == "cry"


def test_action_gated_event_for_speech_before_s4():
    session = Session(SessionConfig(seed=7, start_stage=1))
    session.reset()
    obs = session.step(make_action(vocal={"kind": "speech", "frame": [1, 2, 3]}))
    assert {"type": "action_gated", "channels": ["speech"]} in obs["events"]


def test_determinism_bit_exact_over_500_steps():
    def run():
        session = Session(SessionConfig(seed=13))
        obs = session.reset()
        lines = [dumps(obs)]
        for i in range(500):
            obs = session.step(cry_action(0.8) if i % 50 == 0 else NULL_ACTION)
            lines.append(dumps(obs))
            lines.append(session.world_hash())
        return lines
    assert run() == run()


# -- schema purity ----------------------------------------------------------------

def test_scan_forbidden_keys_finds_planted():
    assert scan_forbidden_keys({"a": {"reward": 1}}) == ["a.reward"]
    assert scan_forbidden_keys({"Returns": []}) == ["Returns"]
    assert scan_forbidden_keys({"zscore": 2}) == ["zscore"]
    assert scan_forbidden_keys({"clean": {"x": [1, 2]}}) == []


def test_observation_has_no_reward_like_field():
    session = Session(SessionConfig(seed=7))
    obs = session.reset()
    assert scan_forbidden_keys(obs) == []
    for _ in range(5):
        obs = session.step(NULL_ACTION)
        assert scan_forbidden_keys(obs) == []


# -- record / replay -----------------------------------------------------------------

def record_episode(tmp_path, seed=7, steps=300, name="ep.jsonl"):
    path = tmp_path / name
    session = Session(SessionConfig(seed=seed, record=str(path)))
    obs = session.reset()
    for i in range(steps):
        obs = session.step(cry_action(0.9) if i % 40 == 0 else NULL_ACTION)
    session.close()
    return path


def test_replay_fresh_recording_verifies(tmp_path):
    path = record_episode(tmp_path)
    report = replay(str(path))
    assert report.ok
    assert report.steps == 301


def test_replay_detects_tampered_hash(tmp_path):
    path = record_episode(tmp_path)
    lines = path.read_text().splitlines()
    row = json.loads(lines[100])
    row["world_hash"] = "0" * 16
    lines[100] = dumps(row)
    path.write_text("\n".join(lines) + "\n")
    report = replay(str(path))
    assert not report.ok
    assert report.divergence_t == row["t"]
    assert report.detail == "world_hash mismatch"


def test_replay_detects_tampered_observation(tmp_path):
    path = record_episode(tmp_path)
    lines = path.read_text().splitlines()
    row = json.loads(lines[50])
    row["obs"]["intero"]["thirst"] = 0.999
    lines[50] = dumps(row)
    path.write_text("\n".join(lines) + "\n")
    report = replay(str(path))
    assert not report.ok
    assert report.divergence_t == row["t"]


def test_replay_rejects_truncated_rows(tmp_path):
    path = record_episode(tmp_path)
    lines = path.read_text().splitlines()
    lines[10] = lines[10][: len(lines[10]) // 2]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ReplayParseError) as err:
        replay(str(path))
    assert err.value.line_no == 11


def test_record_rows_strictly_increasing(tmp_path):
    path = record_episode(tmp_path, steps=50)
    lines = path.read_text().splitlines()
    header = json.loads(lines[0])
    assert header["type"] == "header"
    ts = [json.loads(line)["t"] for line in lines[1:]]
    assert ts == list(range(51))


def test_double_recording_byte_identical(tmp_path):
    a = record_episode(tmp_path, steps=200, name="a.jsonl")
    b = record_episode(tmp_path, steps=200, name="b.jsonl")
    assert a.read_bytes() == b.read_bytes()


def test_record_rows_match_plain_dumps(tmp_path):
    # The assembled row (cached retina fragment) must equal dumps() of the
    # parsed row exactly.
    path = record_episode(tmp_path, steps=40)
    for line in path.read_text().splitlines()[1:]:
        assert dumps(json.loads(line)) == line
