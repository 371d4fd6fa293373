/**
 * Liveness: the bundled random agent runs 1000 steps over the wire without a
 * single protocol error, and the observation stream stays reward-free.
 */

import { describe, expect, it } from "vitest";

import { runExampleAgent } from "../src/agents.js";
import { scanForbiddenKeys } from "../src/protocol.js";
import { spawnServer } from "./helpers.js";

describe("random example agent", () => {
  it("runs 1000 steps without protocol errors", async () => {
    const env = await spawnServer();
    try {
      const summary = await runExampleAgent(env, "random", 1000, { seed: 123 });
      expect(summary.steps).toBe(1000);
      expect(summary.observations).toBe(1001);
      expect(env.lastObservation?.t).toBe(1000);
      for (const line of env.receivedLines) {
        expect(scanForbiddenKeys(JSON.parse(line))).toEqual([]);
      }
      await env.end();
    } finally {
      env.close();
    }
  }, 120_000);

  it("zero steps is an immediate clean close", async () => {
    const env = await spawnServer();
    try {
      const summary = await runExampleAgent(env, "random", 0, { seed: 123 });
      expect(summary.steps).toBe(0);
      expect(summary.observations).toBe(1);
      await env.end();
    } finally {
      env.close();
    }
  }, 30_000);

  it("same seed gives the same observation stream", async () => {
    async function run(): Promise<string> {
      const env = await spawnServer();
      try {
        await runExampleAgent(env, "random", 40, { seed: 9 });
        return env.receivedLines.join("\n");
      } finally {
        env.close();
      }
    }
    expect(await run()).toEqual(await run());
  }, 60_000);
});
