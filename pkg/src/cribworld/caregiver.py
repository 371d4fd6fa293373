"""Scripted caregiver: investigates cries, delivers and narrates, introduces
objects, answers learned words.

The caregiver is a finite-state machine over {Idle, Approach, Deliver,
Feeding, Narrate, PlayIntro, Return}.  Narration is emitted one speech frame
per step from a queue and may interleave with any mode (she talks while she
feeds).  She cannot read the agent's drives: cry-triggered deliveries
alternate substances starting with water, while word-triggered deliveries
bring exactly what was asked for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import world as w
from .codec import SdrCodebook, SdrStream, decode_runs, encode_utterance
from .curriculum import (GatingMask, MODE_APPROACH, MODE_DELIVER, MODE_FEEDING,
                         MODE_IDLE, MODE_NARRATE, MODE_PLAYINTRO, MODE_RETURN,
                         WORD_SERVICE)

DELIVER_RANGE = 0.5
ARRIVE_EPS = 0.15
PICKUP_RANGE = 0.3
QUIET_STEPS = 100           # cry silence that ends a feeding
REPEAT_GAP_FRAMES = 20      # silence between narration repeats; >= the
                            # associator window so repeats stay distinct
NARRATION_LEAD_FRAMES = 1   # narration starts as she steps back from the crib
FEED_STANDOFF = 1.2         # she sits back here while the infant feeds, so
                            # the mouth bottle owns the fovea
PLAY_DISTANCE = 1.0         # presented object sits this far along the gaze
PHASE_ABORT_STEPS = 800

PHASE_NONE = ""
PHASE_FETCH = "fetch"
PHASE_CARRY = "carry"
PHASE_DWELL = "dwell"
PHASE_PUTBACK = "putback"


@dataclass
class CaregiverParams:
    walk_speed: float = 0.1
    cry_intensity_threshold: float = 0.2
    narration_repeats: int = 2
    feeding_timeout: int = 300
    word_overlap_threshold: float = 6.0
    play_intro_period: int = 400
    play_intro_dwell: int = 200


@dataclass
class CaregiverState:
    mode: str = MODE_IDLE
    phase: str = PHASE_NONE
    substance: str = ""            # Approach/Deliver/Feeding target
    play_toy: int | None = None
    last_delivery: str | None = None
    pending_service: str = ""
    speech_buffer: list[tuple[int, ...]] = field(default_factory=list)
    narration_queue: list = field(default_factory=list)
    feeding_since: int = -1
    last_cry_heard: int = -1
    dwell_since: int = -1
    phase_since: int = 0
    last_play_end: int = 0
    next_toy: int = 0


def fsm_next(mode: str, phase: str, *, service: bool, cry: bool, intro_due: bool,
             arrived: bool, feeding_done: bool, narration_done: bool,
             dwell_done: bool, aborted: bool) -> tuple[str, str]:
    """Pure successor function; every (mode, input) pair has one successor."""
    if mode == MODE_IDLE:
        if service:
            return MODE_APPROACH, PHASE_NONE
        if cry:
            return MODE_APPROACH, PHASE_NONE
        if intro_due:
            return MODE_PLAYINTRO, PHASE_FETCH
        return MODE_IDLE, PHASE_NONE
    if mode == MODE_APPROACH:
        if arrived:
            return MODE_DELIVER, PHASE_NONE
        return MODE_APPROACH, PHASE_NONE
    if mode == MODE_DELIVER:
        return MODE_FEEDING, PHASE_NONE
    if mode == MODE_FEEDING:
        if feeding_done:
            return (MODE_RETURN, PHASE_NONE) if narration_done else (MODE_NARRATE, PHASE_NONE)
        return MODE_FEEDING, PHASE_NONE
    if mode == MODE_NARRATE:
        if service:
            return MODE_APPROACH, PHASE_NONE
        if narration_done:
            return MODE_RETURN, PHASE_NONE
        return MODE_NARRATE, PHASE_NONE
    if mode == MODE_PLAYINTRO:
        if aborted:
            return MODE_RETURN, PHASE_NONE
        if service:
            return MODE_APPROACH, PHASE_NONE
        if phase == PHASE_FETCH:
            return (MODE_PLAYINTRO, PHASE_CARRY) if arrived else (MODE_PLAYINTRO, PHASE_FETCH)
        if phase == PHASE_CARRY:
            return (MODE_PLAYINTRO, PHASE_DWELL) if arrived else (MODE_PLAYINTRO, PHASE_CARRY)
        if phase == PHASE_DWELL:
            return (MODE_PLAYINTRO, PHASE_PUTBACK) if dwell_done else (MODE_PLAYINTRO, PHASE_DWELL)
        # putback
        return (MODE_RETURN, PHASE_NONE) if arrived else (MODE_PLAYINTRO, PHASE_PUTBACK)
    if mode == MODE_RETURN:
        if service:
            return MODE_APPROACH, PHASE_NONE
        if arrived:
            return MODE_IDLE, PHASE_NONE
        return MODE_RETURN, PHASE_NONE
    raise ValueError(f"unknown caregiver mode {mode!r}")


class CaregiverController:
    """Owns one caregiver entity in one world."""

    def __init__(self, caregiver_id: int, agent_id: int, codebook: SdrCodebook,
                 params: CaregiverParams, frames_per_symbol: int, gap_frames: int,
                 theta_min: int):
        self.id = caregiver_id
        self.agent_id = agent_id
        self.codebook = codebook
        self.params = params
        self.fps = frames_per_symbol
        self.gap = gap_frames
        self.theta_min = theta_min
        self.state = CaregiverState()

    # -- speech ------------------------------------------------------------

    def enqueue_narration(self, name: str, repeats: int, lead: int = 0) -> None:
        stream = encode_utterance(self.codebook, name, self.fps, self.gap)
        if lead > 0:
            self.state.narration_queue.extend([None] * lead)
        for rep in range(repeats):
            if rep > 0:
                self.state.narration_queue.extend([None] * REPEAT_GAP_FRAMES)
            self.state.narration_queue.append(("start", name))
            self.state.narration_queue.extend(
                f if f else None for f in stream.frames)

    def _emit_narration(self, me: w.Entity, step: int, sounds: list,
                        events: list) -> None:
        queue = self.state.narration_queue
        while queue:
            item = queue.pop(0)
            if isinstance(item, tuple) and item and item[0] == "start":
                events.append({"type": "narration_started", "utterance": item[1]})
                continue
            if item is not None:
                sounds.append(w.SoundEvent(self.id, me.x, me.y, "speech", step,
                                           frame=item))
            break

    def _hear(self, heard, mask: GatingMask, vocabulary: dict[str, str],
              step: int, events: list) -> None:
        got_agent_speech = False
        for snd in heard:
            if snd.source_id == self.id:
                continue
            if snd.kind == "cry" and snd.intensity >= self.params.cry_intensity_threshold:
                self.state.last_cry_heard = step
            elif snd.kind == "speech" and snd.source_id == self.agent_id:
                if WORD_SERVICE in mask.caregiver_repertoire:
                    self.state.speech_buffer.append(snd.frame)
                    got_agent_speech = True
        if self.state.speech_buffer and not got_agent_speech:
            self._decode_buffer(vocabulary, events)

    def _decode_buffer(self, vocabulary: dict[str, str], events: list) -> None:
        """Silence boundary: decode the buffered utterance and maybe serve it.

        Early productions are partial ("Wada"), so a decoded word counts if it
        is a non-empty prefix of a vocabulary word and the mean best-overlap
        across frames clears the leniency threshold.
        """
        frames = tuple(self.state.speech_buffer)
        self.state.speech_buffer = []
        stream = SdrStream(frames=frames, dimension=self.codebook.dimension,
                           frames_per_symbol=self.fps, gap_frames=self.gap)
        runs = decode_runs(self.codebook, stream, self.theta_min)
        word = "".join(r.symbol for r in runs if r.symbol is not None)
        total_frames = sum(r.frame_count for r in runs)
        if not word or total_frames == 0:
            return
        mean_overlap = sum(r.mean_best_overlap * r.frame_count for r in runs) / total_frames
        if mean_overlap < self.params.word_overlap_threshold:
            return
        for vocab_word in sorted(vocabulary):
            if vocab_word.startswith(word):
                self.state.pending_service = vocabulary[vocab_word]
                events.append({"type": "word_service", "heard": word,
                               "word": vocab_word,
                               "substance": vocabulary[vocab_word]})
                return

    # -- movement helpers ----------------------------------------------------

    def _walk_toward(self, me: w.Entity, tx: float, ty: float,
                     commands: list) -> float:
        dx, dy = tx - me.x, ty - me.y
        dist = math.hypot(dx, dy)
        if dist < 1e-9:
            return 0.0
        step_len = min(self.params.walk_speed, dist)
        ang = math.atan2(dy, dx)
        commands.append(w.CmdMove(self.id, me.x + step_len * math.cos(ang),
                                  me.y + step_len * math.sin(ang), ang))
        return dist - step_len

    def _bottle_for(self, world: w.WorldState, substance: str) -> w.Entity | None:
        kind = w.KIND_BOTTLE_WATER if substance == "water" else w.KIND_BOTTLE_MILK
        for ent in world.entities.values():
            if ent.kind == kind:
                return ent
        return None

    def _drop_carried_toy(self, world: w.WorldState, commands: list) -> None:
        if self.state.play_toy is not None:
            toy = world.entities.get(self.state.play_toy)
            if toy is not None and toy.held_by == self.id:
                commands.append(w.CmdRelease(toy.id, toy.x, toy.y))
            self.state.play_toy = None

    # -- main step -------------------------------------------------------------

    def step(self, world: w.WorldState, heard, mask: GatingMask,
             vocabulary: dict[str, str], present: set[int],
             agent_gaze: float) -> tuple[list, list, list]:
        """One caregiver decision step: (world commands, sounds, events)."""
        st = self.state
        me = world.entities[self.id]
        agent = world.entities[self.agent_id]
        step = world.step
        commands: list = []
        sounds: list = []
        events: list = []

        self._hear(heard, mask, vocabulary, step, events)
        self._emit_narration(me, step, sounds, events)

        # Input flags for the transition table.
        fresh_cry = (st.last_cry_heard == step and MODE_APPROACH in mask.caregiver_repertoire)
        service = bool(st.pending_service)
        toys = [world.entities[i] for i in sorted(present)
                if world.entities[i].kind == w.KIND_TOY
                and world.entities[i].held_by is None]
        intro_due = (MODE_PLAYINTRO in mask.caregiver_repertoire and bool(toys)
                     and step - st.last_play_end >= self.params.play_intro_period)
        feeding_done = st.mode == MODE_FEEDING and (
            step - st.last_cry_heard >= QUIET_STEPS
            or step - st.feeding_since >= self.params.feeding_timeout)
        narration_done = not st.narration_queue
        dwell_done = st.phase == PHASE_DWELL and step - st.dwell_since >= self.params.play_intro_dwell
        aborted = st.mode == MODE_PLAYINTRO and step - st.phase_since >= PHASE_ABORT_STEPS

        arrived = False
        target: tuple[float, float] | None = None
        if st.mode == MODE_APPROACH:
            bottle = self._bottle_for(world, st.substance)
            if bottle is None:
                st.mode, st.phase = MODE_RETURN, PHASE_NONE
                events.append({"type": "caregiver_abort", "reason": "no_bottle"})
                bottle = None
            elif bottle.held_by != self.id:
                if math.hypot(bottle.x - me.x, bottle.y - me.y) <= PICKUP_RANGE:
                    commands.append(w.CmdAttach(bottle.id, self.id, "hand"))
                else:
                    target = (bottle.x, bottle.y)
            else:
                d = math.hypot(agent.x - me.x, agent.y - me.y)
                if d <= DELIVER_RANGE:
                    arrived = True
                else:
                    target = (agent.x, agent.y)
        elif st.mode == MODE_RETURN:
            d = math.hypot(w.IDLE_POST[0] - me.x, w.IDLE_POST[1] - me.y)
            if d <= ARRIVE_EPS:
                arrived = True
            else:
                target = w.IDLE_POST
        elif st.mode == MODE_PLAYINTRO:
            if st.phase == PHASE_FETCH:
                toy = world.entities.get(st.play_toy) if st.play_toy is not None else None
                if toy is None or toy.held_by is not None:
                    aborted = True
                elif math.hypot(toy.x - me.x, toy.y - me.y) <= PICKUP_RANGE:
                    commands.append(w.CmdAttach(toy.id, self.id, "hand"))
                    arrived = True
                else:
                    target = (toy.x, toy.y)
            elif st.phase == PHASE_CARRY:
                ux, uy = math.cos(agent_gaze), math.sin(agent_gaze)
                stand = (agent.x + (PLAY_DISTANCE + w.HAND_OFFSET) * ux,
                         agent.y + (PLAY_DISTANCE + w.HAND_OFFSET) * uy)
                if math.hypot(stand[0] - me.x, stand[1] - me.y) <= ARRIVE_EPS:
                    arrived = True
                else:
                    target = stand
            elif st.phase == PHASE_PUTBACK:
                toy = world.entities.get(st.play_toy) if st.play_toy is not None else None
                if toy is None:
                    aborted = True
                elif math.hypot(toy.home_x - me.x, toy.home_y - me.y) <= PICKUP_RANGE:
                    commands.append(w.CmdRelease(toy.id, toy.home_x, toy.home_y))
                    st.play_toy = None
                    arrived = True
                else:
                    target = (toy.home_x, toy.home_y)

        prev_mode, prev_phase = st.mode, st.phase
        st.mode, st.phase = fsm_next(
            st.mode, st.phase, service=service, cry=fresh_cry, intro_due=intro_due,
            arrived=arrived, feeding_done=feeding_done,
            narration_done=narration_done, dwell_done=dwell_done, aborted=aborted)

        if (st.mode, st.phase) != (prev_mode, prev_phase):
            events.append({"type": "caregiver_mode", "from": prev_mode,
                           "to": st.mode, "phase": st.phase})
            self._on_transition(world, prev_mode, prev_phase, service, fresh_cry,
                                intro_due, toys, commands, events, step, aborted)
            target = None   # act on the new mode next step

        # Movement happens while staying in a goal-directed mode.
        if target is not None and (st.mode, st.phase) == (prev_mode, prev_phase):
            self._walk_toward(me, target[0], target[1], commands)
        elif st.mode in (MODE_FEEDING, MODE_NARRATE) or st.phase == PHASE_DWELL:
            d = math.hypot(me.x - agent.x, me.y - agent.y)
            if st.mode in (MODE_FEEDING, MODE_NARRATE) and d < FEED_STANDOFF - ARRIVE_EPS:
                # Sit back so the mouth bottle, not her, fills the infant's fovea.
                ang = math.atan2(me.y - agent.y, me.x - agent.x)
                self._walk_toward(me, agent.x + FEED_STANDOFF * math.cos(ang),
                                  agent.y + FEED_STANDOFF * math.sin(ang), commands)
            else:
                face = math.atan2(agent.y - me.y, agent.x - me.x)
                if abs(w.wrap_angle(face - me.facing)) > 1e-9:
                    commands.append(w.CmdMove(self.id, me.x, me.y, face))

        return commands, sounds, events

    def _on_transition(self, world: w.WorldState, prev_mode: str, prev_phase: str,
                       service: bool, cry: bool, intro_due: bool, toys,
                       commands: list, events: list, step: int,
                       aborted: bool) -> None:
        st = self.state
        if st.mode == MODE_APPROACH:
            if prev_mode == MODE_PLAYINTRO:
                self._drop_carried_toy(world, commands)
                st.last_play_end = step
            if service:
                st.substance = st.pending_service
                st.pending_service = ""
            else:
                st.substance = "water" if st.last_delivery != "water" else "milk"
        elif st.mode == MODE_DELIVER:
            bottle = self._bottle_for(world, st.substance)
            if bottle is not None:
                commands.append(w.CmdAttach(bottle.id, self.agent_id, "mouth"))
                self.enqueue_narration(bottle.name, self.params.narration_repeats,
                                       lead=NARRATION_LEAD_FRAMES)
                events.append({"type": "delivery", "substance": st.substance,
                               "entity": bottle.id})
            st.last_delivery = st.substance
            st.feeding_since = step
            st.last_cry_heard = step
        elif st.mode == MODE_RETURN:
            if prev_mode == MODE_FEEDING:
                self._detach_bottle(world, commands)
                events.append({"type": "feeding_ended"})
            if prev_mode == MODE_PLAYINTRO:
                if aborted:
                    self._drop_carried_toy(world, commands)
                    events.append({"type": "caregiver_abort", "reason": "playintro"})
                st.last_play_end = step
        elif st.mode == MODE_NARRATE:
            if prev_mode == MODE_FEEDING:
                self._detach_bottle(world, commands)
                events.append({"type": "feeding_ended"})
        elif st.mode == MODE_PLAYINTRO and st.phase == PHASE_FETCH:
            choice = toys[st.next_toy % len(toys)] if toys else None
            st.next_toy += 1
            st.play_toy = choice.id if choice else None
            st.phase_since = step
        elif st.mode == MODE_IDLE:
            self._stow_bottles(world, commands)
        if st.mode == MODE_PLAYINTRO and st.phase == PHASE_DWELL:
            st.dwell_since = step
            toy = world.entities.get(st.play_toy) if st.play_toy is not None else None
            if toy is not None:
                self.enqueue_narration(toy.name, self.params.narration_repeats)
        if st.mode == MODE_PLAYINTRO and st.phase != prev_phase:
            st.phase_since = step

    def _detach_bottle(self, world: w.WorldState, commands: list) -> None:
        for ent in world.entities.values():
            if ent.kind in (w.KIND_BOTTLE_WATER, w.KIND_BOTTLE_MILK) \
                    and ent.held_by == self.agent_id:
                commands.append(w.CmdAttach(ent.id, self.id, "hand"))

    def _stow_bottles(self, world: w.WorldState, commands: list) -> None:
        for ent in world.entities.values():
            if ent.kind in (w.KIND_BOTTLE_WATER, w.KIND_BOTTLE_MILK) \
                    and ent.held_by == self.id:
                commands.append(w.CmdRelease(ent.id, ent.home_x, ent.home_y))
