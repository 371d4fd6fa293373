"""Developmental staging: stage lookup, gating, growth invariants."""

import pytest
from hypothesis import given, settings, strategies as st

from cribworld.curriculum import (DEFAULT_DURATIONS, MASK_TABLE, StageSchedule,
                                  apply_gating, blur_retina, check_monotone,
                                  stage_at)
from cribworld.session import NULL_ACTION, make_action

SCHEDULE = StageSchedule()


def test_stage_zero_at_reset():
    assert stage_at(SCHEDULE, 0).name == "Fetus"


def test_boundary_belongs_to_later_stage():
    first_boundary = DEFAULT_DURATIONS[0]
    assert stage_at(SCHEDULE, first_boundary - 1).index == 0
    assert stage_at(SCHEDULE, first_boundary).index == 1


def test_last_stage_extends_forever():
    assert stage_at(SCHEDULE, 10 ** 9).name == "M9_12"


def test_negative_step_rejected():
    with pytest.raises(ValueError):
        stage_at(SCHEDULE, -1)


def test_start_stage_floor():
    schedule = StageSchedule(start_stage=4)
    assert schedule.stage_at(0).index == 4
    assert schedule.stage_at(10 ** 6).index == 4


@given(st.integers(min_value=0, max_value=50000), st.integers(min_value=1, max_value=1000))
@settings(max_examples=50)
def test_stage_monotone_in_step(step, delta):
    assert stage_at(SCHEDULE, step + delta).index >= stage_at(SCHEDULE, step).index


def test_mask_table_monotone():
    assert check_monotone() == []


def test_mask_table_pinned_rows():
    s0, s1, s2, s3, s4 = MASK_TABLE
    assert s0.vision == "off" and s0.audio_extra_flips == 2
    assert "grasp" not in s0.actions_enabled and "speech" not in s0.actions_enabled
    assert s0.caregiver_repertoire == frozenset({"Idle"})
    assert s1.vision == "blur4x4" and "Feeding" in s1.caregiver_repertoire
    assert s2.vision == "full" and s2.toys_present == 2
    assert "PlayIntro" in s2.caregiver_repertoire
    assert "grasp" in s3.actions_enabled and s3.toys_present == 4
    assert "speech" in s4.actions_enabled
    assert "WordService" in s4.caregiver_repertoire


def _fake_obs(retina):
    return {"retina": retina, "audio": {"frame": [], "intensity": 0.0, "bearing": 0.0}}


def test_gating_vision_off_zeroes_retina():
    obs = _fake_obs([[3, 0.5]] * 256)
    gated, _, _ = apply_gating(MASK_TABLE[0], obs, NULL_ACTION)
    assert gated["retina"] == [[0, 0.0]] * 256


def test_gating_blur_blocks_uniform():
    cells = [[(r * 16 + c) % 3 + 1, ((r * 16 + c) % 7) / 10] for r in range(16)
             for c in range(16)]
    gated, _, _ = apply_gating(MASK_TABLE[1], _fake_obs(cells), NULL_ACTION)
    retina = gated["retina"]
    for br in range(0, 16, 4):
        for bc in range(0, 16, 4):
            block = [retina[r * 16 + c] for r in range(br, br + 4)
                     for c in range(bc, bc + 4)]
            assert all(cell == block[0] for cell in block)


def test_gating_full_vision_untouched():
    cells = [[5, 0.25]] * 256
    gated, _, _ = apply_gating(MASK_TABLE[2], _fake_obs(cells), NULL_ACTION)
    assert gated["retina"] == cells


def test_gating_zeroes_speech_before_s4():
    action = make_action(vocal={"kind": "speech", "frame": [1, 2]})
    _, gated, events = apply_gating(MASK_TABLE[1], _fake_obs([[0, 1.0]] * 256), action)
    assert gated["vocal"] == {"kind": "none"}
    assert events == [{"type": "action_gated", "channels": ["speech"]}]


def test_gating_zeroes_grasp_before_s3():
    action = make_action(grasp=0.8)
    _, gated, events = apply_gating(MASK_TABLE[2], _fake_obs([[0, 1.0]] * 256), action)
    assert gated["muscles"]["grasp"] == 0.0
    assert events[0]["channels"] == ["grasp"]


def test_gating_allows_speech_in_s4():
    action = make_action(vocal={"kind": "speech", "frame": [1]})
    _, gated, events = apply_gating(MASK_TABLE[4], _fake_obs([[0, 1.0]] * 256), action)
    assert gated["vocal"]["kind"] == "speech"
    assert events == []


def test_gating_idempotent():
    cells = [[(r + c) % 4, (c % 9) / 10] for r in range(16) for c in range(16)]
    action = make_action(grasp=0.5, vocal={"kind": "speech", "frame": [7]})
    for mask in MASK_TABLE:
        once_obs, once_act, _ = apply_gating(mask, _fake_obs(cells), action)
        twice_obs, twice_act, again_events = apply_gating(mask, once_obs, once_act)
        assert twice_obs["retina"] == once_obs["retina"]
        assert twice_act == once_act
        assert again_events == []


def test_blur_modal_kind_tie_breaks_low():
    cells = [[1, 0.1]] * 8 + [[2, 0.3]] * 8
    cells = cells * 16
    out = blur_retina(cells)
    assert out[0][0] in (1, 2)
    left_block = out[0]
    assert left_block[0] == 1   # uniform kind-1 block keeps kind 1


def test_schedule_starts_strictly_increasing():
    schedule = StageSchedule((1, 1, 1, 1, 5))
    assert list(schedule.starts) == [0, 1, 2, 3, 4]
