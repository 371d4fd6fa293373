/**
 * Example agents for the SDK: a seeded random babbler and a counting
 * associator that mirrors the reference baseline's learning rule (relief
 * credit, deduplicated per relief event and weighted by the thirst drop,
 * inside a 20-step window; production of the top ten relief bits once the
 * counts mature, outranking the cry reflex but yielding to sucking).
 */

import { Action, NULL_ACTION, Observation } from "./protocol.js";
import { ProtocolError, RemoteEnv } from "./client.js";

const ASSOC_WINDOW = 20;
const ASSOC_MIN_COUNT = 5.0;
const RELIEF_DELTA = 0.02;
const REFRACTORY = 12;
const CRY_THRESHOLD = 0.6;
const SPEECH_STAGE = 4;
const FRAMES_PER_SYMBOL = 3;
const CARDINALITY = 10;

export type Agent = (obs: Observation) => Action;

/** Deterministic 32-bit generator; good enough for a babbling baseline. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomAgent(seed: number): Agent {
  const rng = mulberry32(seed);
  return () => {
    const action: Action = {
      muscles: {
        head_turn: rng() * 2 - 1,
        arm_turn: rng() * 2 - 1,
        arm_extend: rng() * 2 - 1,
        grasp: rng(),
        suck: rng(),
      },
      vocal: { kind: "none" },
    };
    if (rng() < 0.05) {
      const bits = new Set<number>();
      while (bits.size < CARDINALITY) bits.add(Math.floor(rng() * 512));
      action.vocal = { kind: "speech", frame: [...bits].sort((a, b) => a - b) };
    }
    return action;
  };
}

export class AssociatorExample {
  private counts = new Map<number, number>();   // relief credit per audio bit
  private history: Array<{ t: number; bits: number[] }> = [];
  private prevThirst: number | null = null;
  private producing = 0;
  private refractory = 0;
  private frame: number[] = [];

  observe(obs: Observation): void {
    const bits = obs.audio.frame;
    const t = obs.t;
    if (bits.length) this.history.push({ t, bits });
    this.history = this.history.filter((h) => t - h.t <= ASSOC_WINDOW);
    const thirst = obs.intero.thirst;
    if (this.prevThirst !== null) {
      const drop = this.prevThirst - thirst;
      if (drop >= RELIEF_DELTA) {
        const recent = new Set<number>();
        for (const h of this.history) for (const b of h.bits) recent.add(b);
        for (const b of recent) this.counts.set(b, (this.counts.get(b) ?? 0) + drop);
      }
    }
    this.prevThirst = thirst;
  }

  topBits(): Array<[number, number]> {
    return [...this.counts.entries()]
      .sort(([ba, va], [bb, vb]) => (vb - va) || (ba - bb))
      .slice(0, CARDINALITY);
  }

  trained(): boolean {
    const top = this.topBits();
    return top.length === CARDINALITY && top.every(([, v]) => v >= ASSOC_MIN_COUNT);
  }

  act(obs: Observation): Action {
    this.observe(obs);
    const thirsty = obs.intero.thirst > CRY_THRESHOLD;
    const sucking = obs.touch.mouth > 0;
    if (sucking) {
      this.producing = 0;
      return { muscles: { ...NULL_ACTION.muscles, suck: 1 }, vocal: { kind: "none" } };
    }
    const action: Action = { muscles: { ...NULL_ACTION.muscles }, vocal: { kind: "none" } };
    if (obs.audio.intensity > 0) {
      const turn = Math.max(-1, Math.min(1, obs.audio.bearing / 0.2));
      action.muscles.head_turn = turn;
    }
    const wants = obs.stage === SPEECH_STAGE && thirsty && this.trained();
    if (this.producing > 0) {
      action.vocal = { kind: "speech", frame: [...this.frame] };
      this.producing -= 1;
      if (this.producing === 0) this.refractory = REFRACTORY;
    } else if (wants) {
      if (this.refractory > 0) {
        this.refractory -= 1;          // asking replaces crying
      } else {
        this.frame = this.topBits().map(([b]) => b).sort((a, b) => a - b);
        action.vocal = { kind: "speech", frame: [...this.frame] };
        this.producing = FRAMES_PER_SYMBOL - 1;
      }
    } else if (thirsty) {
      action.vocal = { kind: "cry", loudness: Math.min(1, obs.intero.thirst) };
    }
    return action;
  }
}

export interface RunSummary {
  steps: number;
  observations: number;
  deliveries: number;
  wordServices: number;
}

/** Drive a bundled example agent over an open connection. */
export async function runExampleAgent(env: RemoteEnv, kind: "random" | "associator",
                                      steps: number,
                                      config: Record<string, unknown> = {}):
    Promise<RunSummary> {
  const agent: Agent = kind === "random"
    ? randomAgent(1234)
    : (() => {
        const inner = new AssociatorExample();
        return (obs: Observation) => inner.act(obs);
      })();
  let obs = await env.reset(config);
  const summary: RunSummary = { steps: 0, observations: 1, deliveries: 0,
                                wordServices: 0 };
  for (let i = 0; i < steps; i++) {
    obs = await env.step(agent(obs));
    summary.steps += 1;
    summary.observations += 1;
    for (const ev of obs.events) {
      if (ev.type === "delivery") summary.deliveries += 1;
      if (ev.type === "word_service") summary.wordServices += 1;
    }
  }
  return summary;
}

export { ProtocolError };
