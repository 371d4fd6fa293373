/** TCP transport: connect to a spawned server, run a session, close. */

import { spawn } from "node:child_process";
import { describe, expect, it } from "vitest";

import { RemoteEnv } from "../src/client.js";
import { PYTHON, REPO_ROOT } from "./helpers.js";

function startTcpServer(): Promise<{ port: number; kill: () => void }> {
  return new Promise((resolve, reject) => {
    const child = spawn(PYTHON, ["-m", "cribworld.cli", "serve", "--listen",
                                 "127.0.0.1:0"], { cwd: REPO_ROOT });
    let stderr = "";
    child.stderr.setEncoding("utf-8");
    child.stderr.on("data", (chunk: string) => {
      stderr += chunk;
      const match = stderr.match(/listening on 127\.0\.0\.1:(\d+)/);
      if (match) resolve({ port: Number(match[1]), kill: () => child.kill() });
    });
    child.on("error", reject);
    child.on("exit", (code) => {
      if (!stderr.includes("listening")) reject(new Error(`server exited ${code}`));
    });
  });
}

describe("tcp transport", () => {
  it("runs a session over a socket", async () => {
    const server = await startTcpServer();
    try {
      const env = await RemoteEnv.connectTcp("127.0.0.1", server.port);
      const obs = await env.reset({ seed: 7 });
      expect(obs.t).toBe(0);
      const next = await env.step({ muscles: { head_turn: 1 },
                                    vocal: { kind: "none" } });
      expect(next.proprio.gaze).toBeCloseTo(0.2, 9);
      await env.end();
    } finally {
      server.kill();
    }
  }, 60_000);

  it("parallel connections hold isolated sessions", async () => {
    const server = await startTcpServer();
    try {
      const a = await RemoteEnv.connectTcp("127.0.0.1", server.port);
      const b = await RemoteEnv.connectTcp("127.0.0.1", server.port);
      const obsA = await a.reset({ seed: 7 });
      const obsB = await b.reset({ seed: 7 });
      expect(obsA).toEqual(obsB);
      await a.step({ muscles: { head_turn: 1 }, vocal: { kind: "none" } });
      const stillB = await b.step({ muscles: {}, vocal: { kind: "none" } });
      expect(stillB.proprio.gaze).toBe(0);
      await a.end();
      await b.end();
    } finally {
      server.kill();
    }
  }, 60_000);
});
