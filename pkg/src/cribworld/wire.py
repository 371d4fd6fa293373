"""Newline-delimited JSON wire protocol: one message per line, UTF-8.

Message types: `hello` (server greeting), `reset`, `obs`, `act`, `end`,
`error`.  One session per connection; a protocol violation is answered with
an `error` carrying a machine-readable code and leaves the session intact;
dropping the connection ends the session cleanly.
"""

from __future__ import annotations

import json
import socketserver
import sys

from .session import (ActionDecodeError, ConfigError, NoSessionError,
                      PROTOCOL_VERSION, Session, SessionConfig, dumps)

HELLO = {
    "type": "hello",
    "version": PROTOCOL_VERSION,
    "protocol": "cribworld-ndjson-1",
    "messages": ["reset", "act", "end"],
    "obs_fields": ["t", "stage", "retina", "audio", "touch", "proprio",
                   "intero", "events"],
}

ERR_PARSE = "parse_error"
ERR_BAD_MESSAGE = "bad_message"
ERR_BAD_CONFIG = "bad_config"
ERR_BAD_ACTION = "bad_action"
ERR_NO_SESSION = "no_session"
ERR_INTERNAL = "internal"


def error_message(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


class SessionChannel:
    """Protocol state machine for one connection."""

    def __init__(self):
        self.session: Session | None = None
        self.done = False

    def greeting(self) -> dict:
        return HELLO

    def handle_line(self, line: str) -> list[dict]:
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            return [error_message(ERR_PARSE, f"bad JSON: {exc}")]
        if not isinstance(msg, dict) or "type" not in msg:
            return [error_message(ERR_BAD_MESSAGE, "message must be an object with a type")]
        mtype = msg["type"]
        if mtype == "reset":
            try:
                config = SessionConfig.from_dict(msg.get("config") or {})
                config.record = None   # the wire never writes server-side files
                if self.session is not None:
                    self.session.close()
                self.session = Session(config)
                obs = self.session.reset()
            except ConfigError as exc:
                return [error_message(ERR_BAD_CONFIG, str(exc))]
            return [{"type": "obs", "data": obs}]
        if mtype == "act":
            if self.session is None:
                return [error_message(ERR_NO_SESSION, "act before reset")]
            try:
                obs = self.session.step(msg.get("data"))
            except ActionDecodeError as exc:
                return [error_message(ERR_BAD_ACTION, str(exc))]
            except NoSessionError as exc:
                return [error_message(ERR_NO_SESSION, str(exc))]
            return [{"type": "obs", "data": obs}]
        if mtype == "end":
            self.close()
            self.done = True
            return [{"type": "end"}]
        return [error_message(ERR_BAD_MESSAGE, f"unknown message type {mtype!r}")]

    def close(self) -> None:
        if self.session is not None:
            self.session.close()
            self.session = None


def serve_stdio(stdin=None, stdout=None) -> int:
    """Serve exactly one session over stdin/stdout."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    channel = SessionChannel()

    def send(msg: dict) -> None:
        stdout.write(dumps(msg) + "\n")
        stdout.flush()

    send(channel.greeting())
    try:
        for line in stdin:
            if not line.strip():
                continue
            for response in channel.handle_line(line):
                send(response)
            if channel.done:
                break
    except KeyboardInterrupt:
        send({"type": "end"})
    finally:
        channel.close()
    return 0


class _WireHandler(socketserver.StreamRequestHandler):
    def handle(self):
        channel = SessionChannel()
        self.wfile.write((dumps(channel.greeting()) + "\n").encode("utf-8"))
        try:
            for raw in self.rfile:
                line = raw.decode("utf-8")
                if not line.strip():
                    continue
                for response in channel.handle_line(line):
                    self.wfile.write((dumps(response) + "\n").encode("utf-8"))
                if channel.done:
                    break
        except (ConnectionError, BrokenPipeError):
            pass
        finally:
            channel.close()


class WireServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def serve_tcp(host: str, port: int) -> WireServer:
    """Bind and return a server; the caller drives serve_forever()."""
    return WireServer((host, port), _WireHandler)
