/**
 * Wire protocol types and the canonical JSON dialect.
 *
 * The server speaks newline-delimited JSON produced by Python's json module,
 * where float-typed fields keep a trailing ".0" even for integral values.
 * Outgoing client messages must match that dialect byte for byte (the golden
 * transcripts are compared raw), so muscle channels and cry loudness are
 * wrapped as Float values and rendered Python-style.
 */

import { z } from "zod";

export const PROTOCOL = "cribworld-ndjson-1";

/** A number that is float-typed on the wire ("1.0", not "1"). */
export class Float {
  constructor(readonly value: number) {}
}

export function formatFloat(v: number): string {
  if (Number.isInteger(v) && Math.abs(v) < 1e15) {
    return `${v.toFixed(1)}`;
  }
  return String(v);
}

/** Compact, insertion-ordered, Float-aware JSON — the server's own dialect. */
export function stableStringify(value: unknown): string {
  if (value instanceof Float) return formatFloat(value.value);
  if (value === null) return "null";
  if (typeof value === "boolean") return value ? "true" : "false";
  if (typeof value === "number") {
    if (!Number.isFinite(value)) throw new Error("non-finite number on the wire");
    return String(value);
  }
  if (typeof value === "string") return JSON.stringify(value);
  if (Array.isArray(value)) {
    return `[${value.map(stableStringify).join(",")}]`;
  }
  if (typeof value === "object") {
    const parts = Object.entries(value as Record<string, unknown>).map(
      ([k, v]) => `${JSON.stringify(k)}:${stableStringify(v)}`,
    );
    return `{${parts.join(",")}}`;
  }
  throw new Error(`cannot serialize ${typeof value}`);
}

// -- actions -------------------------------------------------------------------

export interface Muscles {
  head_turn?: number;
  arm_turn?: number;
  arm_extend?: number;
  grasp?: number;
  suck?: number;
}

export type Vocal =
  | { kind: "none" }
  | { kind: "cry"; loudness: number }
  | { kind: "speech"; frame: number[] };

export interface Action {
  muscles: Muscles;
  vocal: Vocal;
}

export const NULL_ACTION: Action = {
  muscles: { head_turn: 0, arm_turn: 0, arm_extend: 0, grasp: 0, suck: 0 },
  vocal: { kind: "none" },
};

const MUSCLE_ORDER = ["head_turn", "arm_turn", "arm_extend", "grasp", "suck"] as const;

/** Canonical action payload: five float muscles in fixed order plus vocal. */
export function actionPayload(action: Action): Record<string, unknown> {
  const muscles: Record<string, Float> = {};
  for (const name of MUSCLE_ORDER) {
    muscles[name] = new Float(action.muscles[name] ?? 0);
  }
  let vocal: Record<string, unknown>;
  if (action.vocal.kind === "cry") {
    vocal = { kind: "cry", loudness: new Float(action.vocal.loudness) };
  } else if (action.vocal.kind === "speech") {
    vocal = { kind: "speech", frame: action.vocal.frame.map((b) => Math.trunc(b)) };
  } else {
    vocal = { kind: "none" };
  }
  return { muscles, vocal };
}

/**
 * Re-mark float-typed fields on a message parsed from JSON text (parsing
 * loses the int/float distinction). Used when replaying recorded transcripts.
 */
export function markFloats(message: Record<string, unknown>): Record<string, unknown> {
  if (message["type"] !== "act") return message;
  const data = message["data"] as Record<string, unknown> | undefined;
  if (!data) return message;
  const muscles = data["muscles"] as Record<string, unknown> | undefined;
  if (muscles) {
    for (const key of Object.keys(muscles)) {
      if (typeof muscles[key] === "number") muscles[key] = new Float(muscles[key] as number);
    }
  }
  const vocal = data["vocal"] as Record<string, unknown> | undefined;
  if (vocal && typeof vocal["loudness"] === "number") {
    vocal["loudness"] = new Float(vocal["loudness"] as number);
  }
  return message;
}

// -- server messages --------------------------------------------------------------

export const ObservationSchema = z.strictObject({
  t: z.number().int(),
  stage: z.number().int(),
  retina: z.array(z.tuple([z.number().int(), z.number()])).length(256),
  audio: z.strictObject({
    frame: z.array(z.number().int()),
    intensity: z.number(),
    bearing: z.number(),
  }),
  touch: z.strictObject({
    torso: z.array(z.number()).length(64),
    mouth: z.number(),
    hand: z.number(),
    crib: z.number(),
  }),
  proprio: z.strictObject({
    gaze: z.number(),
    arm_angle: z.number(),
    arm_extension: z.number(),
    grasp: z.number(),
  }),
  intero: z.strictObject({ thirst: z.number(), hunger: z.number() }),
  events: z.array(z.looseObject({ type: z.string() })),
});

export type Observation = z.infer<typeof ObservationSchema>;

export const HelloSchema = z.looseObject({
  type: z.literal("hello"),
  version: z.string(),
  protocol: z.literal(PROTOCOL),
  messages: z.array(z.string()),
});

export const ServerMessageSchema = z.union([
  HelloSchema,
  z.strictObject({ type: z.literal("obs"), data: ObservationSchema }),
  z.strictObject({ type: z.literal("end") }),
  z.strictObject({
    type: z.literal("error"),
    code: z.string(),
    message: z.string(),
  }),
]);

export type ServerMessage = z.infer<typeof ServerMessageSchema>;

export interface SessionConfig {
  seed?: number;
  codec_seed?: number;
  start_stage?: number;
  start_thirst?: number;
  server_reflexes?: boolean;
  durations?: number[];
  codec?: Record<string, number>;
  drives?: Record<string, number>;
  caregiver?: Record<string, number>;
  reflexes?: Record<string, boolean>;
}

const REWARD_TOKENS = ["reward", "return", "score"];

/** Key names anywhere in a message that look like a reward channel. */
export function scanForbiddenKeys(node: unknown, path = ""): string[] {
  const hits: string[] = [];
  if (Array.isArray(node)) {
    node.forEach((v, i) => hits.push(...scanForbiddenKeys(v, `${path}[${i}]`)));
  } else if (node !== null && typeof node === "object") {
    for (const [k, v] of Object.entries(node as Record<string, unknown>)) {
      const lowered = k.toLowerCase();
      if (REWARD_TOKENS.some((tok) => lowered.includes(tok))) {
        hits.push(path ? `${path}.${k}` : k);
      }
      hits.push(...scanForbiddenKeys(v, path ? `${path}.${k}` : k));
    }
  }
  return hits;
}
