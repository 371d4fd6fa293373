"""Caregiver FSM: transition table, cry service, word service, narration."""

import itertools
import math

from cribworld import world as w
from cribworld.caregiver import (PHASE_CARRY, PHASE_DWELL, PHASE_FETCH,
                                 PHASE_NONE, PHASE_PUTBACK, fsm_next)
from cribworld.codec import encode_utterance
from cribworld.curriculum import MASK_TABLE
from cribworld.rng import Xoshiro256StarStar
from cribworld.session import Session, SessionConfig, NULL_ACTION
from cribworld.world import ReceivedSound

MODES = ["Idle", "Approach", "Deliver", "Feeding", "Narrate", "PlayIntro", "Return"]
PHASES = {"PlayIntro": [PHASE_FETCH, PHASE_CARRY, PHASE_DWELL, PHASE_PUTBACK]}
FLAGS = ("service", "cry", "intro_due", "arrived", "feeding_done",
         "narration_done", "dwell_done", "aborted")


def test_fsm_totality_and_determinism():
    # Every (mode, phase, flag combination) has exactly one valid successor.
    valid = set()
    for mode in MODES:
        for phase in PHASES.get(mode, [PHASE_NONE]):
            valid.add((mode, phase))
    count = 0
    for mode in MODES:
        for phase in PHASES.get(mode, [PHASE_NONE]):
            for bits in itertools.product((False, True), repeat=len(FLAGS)):
                flags = dict(zip(FLAGS, bits))
                out1 = fsm_next(mode, phase, **flags)
                out2 = fsm_next(mode, phase, **flags)
                assert out1 == out2
                assert out1 in valid, (mode, phase, flags, out1)
                count += 1
    # 6 single-phase modes + 4 PlayIntro phases, against every flag combination.
    assert count == 10 * 2 ** len(FLAGS)


def test_fsm_pinned_rows():
    assert fsm_next("Idle", "", service=False, cry=True, intro_due=False,
                    arrived=False, feeding_done=False, narration_done=True,
                    dwell_done=False, aborted=False) == ("Approach", "")
    assert fsm_next("Idle", "", service=True, cry=False, intro_due=False,
                    arrived=False, feeding_done=False, narration_done=True,
                    dwell_done=False, aborted=False) == ("Approach", "")
    assert fsm_next("Approach", "", service=False, cry=False, intro_due=False,
                    arrived=True, feeding_done=False, narration_done=True,
                    dwell_done=False, aborted=False) == ("Deliver", "")
    assert fsm_next("Feeding", "", service=False, cry=False, intro_due=False,
                    arrived=False, feeding_done=True, narration_done=True,
                    dwell_done=False, aborted=False) == ("Return", "")
    assert fsm_next("Feeding", "", service=False, cry=False, intro_due=False,
                    arrived=False, feeding_done=True, narration_done=False,
                    dwell_done=False, aborted=False) == ("Narrate", "")


# -- scenario-level behavior through the session --------------------------------


def run_session(seed=7, steps=0, config=None, agent=None):
    session = Session(config or SessionConfig(seed=seed))
    obs = session.reset()
    events = []
    for _ in range(steps):
        action = agent.act(obs) if agent else NULL_ACTION
        obs = session.step(action)
        events.extend(obs["events"])
    return session, obs, events


def test_idle_plus_cry_approaches_water_first():
    session, obs, _ = run_session()
    ctrl = session.controller
    assert ctrl.state.mode == "Idle"
    heard = [ReceivedSound(0, "cry", 0.5, 0.0)]
    ctrl.state.last_cry_heard = -10
    session.world.step = 10
    commands, sounds, events = ctrl.step(session.world, heard, MASK_TABLE[1],
                                         session.vocabulary, set(), 0.0)
    assert ctrl.state.mode == "Approach"
    assert ctrl.state.substance == "water"


def test_quiet_cry_ignored():
    session, obs, _ = run_session()
    ctrl = session.controller
    heard = [ReceivedSound(0, "cry", 0.1, 0.0)]   # below the 0.2 threshold
    ctrl.step(session.world, heard, MASK_TABLE[1], session.vocabulary, set(), 0.0)
    assert ctrl.state.mode == "Idle"


def test_substance_alternation():
    session, _, _ = run_session()
    ctrl = session.controller
    ctrl.state.last_delivery = "water"
    heard = [ReceivedSound(0, "cry", 0.5, 0.0)]
    ctrl.state.last_cry_heard = session.world.step
    ctrl.step(session.world, heard, MASK_TABLE[1], session.vocabulary, set(), 0.0)
    assert ctrl.state.substance == "milk"


def test_cry_in_fetus_stage_stays_idle():
    session, _, _ = run_session()
    ctrl = session.controller
    heard = [ReceivedSound(0, "cry", 0.9, 0.0)]
    ctrl.step(session.world, heard, MASK_TABLE[0], session.vocabulary, set(), 0.0)
    assert ctrl.state.mode == "Idle"


def _speech(frames):
    return [ReceivedSound(0, "speech", 1.0, 0.0, f) for f in frames]


def _hear_stream(session, frames):
    ctrl = session.controller
    events = []
    for snd in _speech(frames):
        ctrl._hear([snd], MASK_TABLE[4], session.vocabulary, session.world.step,
                   events)
    ctrl._hear([], MASK_TABLE[4], session.vocabulary, session.world.step, events)
    return events


def test_exact_water_stream_serviced():
    session, _, _ = run_session()
    stream = encode_utterance(session.codebook, "WATER")
    events = _hear_stream(session, [f for f in stream.frames if f])
    assert session.controller.state.pending_service == "water"
    assert any(ev["type"] == "word_service" and ev["word"] == "WATER"
               for ev in events)


def test_corrupted_water_stream_serviced():
    # The "Wada" case: 3 of 10 bits wrong per frame leaves overlap 7 >= 6.
    session, _, _ = run_session()
    cb = session.codebook
    rng = Xoshiro256StarStar(99)
    frames = []
    for sym in "WATER":
        clean = set(cb.table[sym])
        others = [b for b in range(512) if b not in clean]
        drop = sorted(clean)[:3]
        keep = clean.difference(drop)
        extra = [others[rng.randrange(len(others))] for _ in range(3)]
        corrupted = tuple(sorted(keep | set(extra)))
        frames.extend([corrupted] * 3)
    events = _hear_stream(session, frames)
    assert session.controller.state.pending_service == "water"


def test_ball_stream_not_serviced():
    session, _, _ = run_session()
    stream = encode_utterance(session.codebook, "BALL")
    _hear_stream(session, [f for f in stream.frames if f])
    assert session.controller.state.pending_service == ""


def test_word_service_needs_stage_repertoire():
    session, _, _ = run_session()
    stream = encode_utterance(session.codebook, "WATER")
    ctrl = session.controller
    for snd in _speech([f for f in stream.frames if f]):
        ctrl._hear([snd], MASK_TABLE[1], session.vocabulary, 0, [])
    ctrl._hear([], MASK_TABLE[1], session.vocabulary, 0, [])
    assert ctrl.state.pending_service == ""


def test_prefix_production_serviced():
    # A learned one-letter "Wada" production counts as a WATER request.
    session, _, _ = run_session()
    wbits = session.codebook.table["W"]
    events = _hear_stream(session, [wbits, wbits, wbits])
    assert session.controller.state.pending_service == "water"


def test_low_overlap_not_serviced():
    session, _, _ = run_session()
    cb = session.codebook
    weak = cb.table["W"][:5]   # overlap 5 < threshold 6
    _hear_stream(session, [weak, weak, weak])
    assert session.controller.state.pending_service == ""


# -- liveness and narration -------------------------------------------------------


def test_cry_to_deliver_within_travel_bound():
    from cribworld.agents import ReflexAgent
    session = Session(SessionConfig(seed=7))
    obs = session.reset()
    agent = ReflexAgent()
    first_cry = deliver = narration = None
    for _ in range(1000):
        action = agent.act(obs)
        if first_cry is None and action["vocal"]["kind"] == "cry":
            first_cry = obs["t"]
        obs = session.step(action)
        for ev in obs["events"]:
            if ev["type"] == "delivery" and deliver is None:
                deliver = obs["t"]
            if ev["type"] == "narration_started" and narration is None:
                narration = obs["t"]
        if deliver and narration:
            break
    session.close()
    assert first_cry is not None and deliver is not None
    distance = math.hypot(12.0, 12.0)
    bound = math.ceil(distance / 0.1) + 10
    assert deliver - first_cry <= bound
    assert narration is not None
    assert 0 <= narration - deliver <= 5
    assert session.controller.state.last_delivery == "water"


def test_narration_repeats_twice():
    session = Session(SessionConfig(seed=7))
    obs = session.reset()
    from cribworld.agents import ReflexAgent
    agent = ReflexAgent()
    started = 0
    for _ in range(1000):
        obs = session.step(agent.act(obs))
        started += sum(1 for ev in obs["events"]
                       if ev["type"] == "narration_started"
                       and ev["utterance"] == "WATER")
        if started and session.controller.state.mode == "Return":
            break
    session.close()
    assert started == 2
