/**
 * RemoteEnv: a thin, lossless mirror of the wire contract.
 *
 * One connection carries one session; requests are strictly sequential and
 * every client message gets exactly one reply line. Server `error` replies
 * surface as ProtocolError exceptions and leave the session usable, matching
 * the server's own semantics. No simulation logic lives here.
 */

import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { connect, type Socket } from "node:net";

import {
  Action,
  Observation,
  ServerMessage,
  ServerMessageSchema,
  SessionConfig,
  actionPayload,
  stableStringify,
} from "./protocol.js";

export class ProtocolError extends Error {
  constructor(readonly code: string, message: string) {
    super(message);
    this.name = "ProtocolError";
  }
}

export class ConnectionClosedError extends Error {
  constructor(message = "connection closed") {
    super(message);
    this.name = "ConnectionClosedError";
  }
}

interface Transport {
  write(data: string): void;
  close(): void;
}

type Waiter = {
  resolve: (msg: ServerMessage) => void;
  reject: (err: Error) => void;
};

export class RemoteEnv {
  /** Raw lines sent and received, for conformance checks. */
  readonly sentLines: string[] = [];
  readonly receivedLines: string[] = [];
  hello?: ServerMessage;
  lastObservation?: Observation;

  private buffer = "";
  private waiters: Waiter[] = [];
  private closed = false;
  private transport!: Transport;
  private child?: ChildProcessWithoutNullStreams;
  private socket?: Socket;

  private constructor() {}

  /** Spawn a child process serving the protocol on its stdio. */
  static async spawnStdio(command: string, args: string[],
                          options: { cwd?: string } = {}): Promise<RemoteEnv> {
    const env = new RemoteEnv();
    const child = spawn(command, args, { cwd: options.cwd, stdio: "pipe" });
    env.child = child;
    env.transport = {
      write: (data) => child.stdin.write(data),
      close: () => {
        child.stdin.end();
        child.kill();
      },
    };
    child.stdout.setEncoding("utf-8");
    child.stdout.on("data", (chunk: string) => env.feed(chunk));
    child.on("close", () => env.handleClosed());
    await env.awaitHello();
    return env;
  }

  /** Connect to a TCP endpoint serving the protocol. */
  static async connectTcp(host: string, port: number): Promise<RemoteEnv> {
    const env = new RemoteEnv();
    const socket = connect({ host, port });
    env.socket = socket;
    env.transport = {
      write: (data) => socket.write(data),
      close: () => socket.destroy(),
    };
    socket.setEncoding("utf-8");
    socket.on("data", (chunk: string) => env.feed(chunk));
    socket.on("close", () => env.handleClosed());
    await new Promise<void>((resolve, reject) => {
      socket.once("connect", resolve);
      socket.once("error", reject);
    });
    await env.awaitHello();
    return env;
  }

  private feed(chunk: string): void {
    this.buffer += chunk;
    let idx: number;
    while ((idx = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, idx);
      this.buffer = this.buffer.slice(idx + 1);
      if (!line.trim()) continue;
      this.receivedLines.push(line);
      const parsed = ServerMessageSchema.parse(JSON.parse(line));
      const waiter = this.waiters.shift();
      if (waiter) waiter.resolve(parsed);
    }
  }

  private handleClosed(): void {
    this.closed = true;
    for (const waiter of this.waiters.splice(0)) {
      waiter.reject(new ConnectionClosedError());
    }
  }

  private nextMessage(): Promise<ServerMessage> {
    if (this.closed) return Promise.reject(new ConnectionClosedError());
    return new Promise((resolve, reject) => this.waiters.push({ resolve, reject }));
  }

  private async awaitHello(): Promise<void> {
    const promise = this.nextMessage();
    const msg = await promise;
    if (msg.type !== "hello") throw new ProtocolError("bad_greeting",
                                                      `expected hello, got ${msg.type}`);
    this.hello = msg;
  }

  /** Send one message object (already Float-marked) and await its reply. */
  async sendRaw(message: Record<string, unknown>): Promise<ServerMessage> {
    if (this.closed) throw new ConnectionClosedError();
    const line = stableStringify(message);
    const reply = this.nextMessage();
    this.sentLines.push(line);
    this.transport.write(line + "\n");
    return reply;
  }

  async reset(config: SessionConfig = {}): Promise<Observation> {
    const reply = await this.sendRaw({ type: "reset", config });
    if (reply.type === "error") throw new ProtocolError(reply.code, reply.message);
    if (reply.type !== "obs") throw new ProtocolError("bad_reply", reply.type);
    this.lastObservation = reply.data;
    return reply.data;
  }

  async step(action: Action): Promise<Observation> {
    const reply = await this.sendRaw({ type: "act", data: actionPayload(action) });
    if (reply.type === "error") throw new ProtocolError(reply.code, reply.message);
    if (reply.type !== "obs") throw new ProtocolError("bad_reply", reply.type);
    this.lastObservation = reply.data;
    return reply.data;
  }

  /** Graceful shutdown: the server acknowledges with its own `end`. */
  async end(): Promise<void> {
    const reply = await this.sendRaw({ type: "end" });
    if (reply.type !== "end") throw new ProtocolError("bad_reply", reply.type);
    this.close();
  }

  close(): void {
    if (!this.closed) {
      this.closed = true;
      this.transport.close();
    }
    if (this.child) this.child.kill();
    if (this.socket) this.socket.destroy();
  }
}
