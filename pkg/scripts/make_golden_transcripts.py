#!/usr/bin/env python3
"""Regenerate the frozen wire-protocol transcripts under tests/golden/.

Run from the repo root after any intentional protocol change, then review the
diff; conformance tests (and the client SDK's) compare against these bytes.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cribworld.session import dumps  # noqa: E402
from cribworld.wire import SessionChannel  # noqa: E402

GOLDEN = pathlib.Path(__file__).resolve().parents[1] / "tests" / "golden"

SCENARIOS = {
    "hello_reset": [
        {"type": "reset", "config": {"seed": 7}},
        {"type": "end"},
    ],
    "session_acts": [
        {"type": "reset", "config": {"seed": 7}},
        {"type": "act", "data": {"muscles": {"head_turn": 0.0, "arm_turn": 0.0,
                                             "arm_extend": 0.0, "grasp": 0.0,
                                             "suck": 0.0},
                                 "vocal": {"kind": "none"}}},
        {"type": "act", "data": {"muscles": {"head_turn": 1.0, "arm_turn": -0.5,
                                             "arm_extend": 0.25, "grasp": 0.0,
                                             "suck": 0.0},
                                 "vocal": {"kind": "cry", "loudness": 0.75}}},
        {"type": "act", "data": {"muscles": {"head_turn": 0.0, "arm_turn": 0.0,
                                             "arm_extend": 0.0, "grasp": 0.0,
                                             "suck": 1.0},
                                 "vocal": {"kind": "speech",
                                           "frame": [3, 77, 200, 449]}}},
        {"type": "end"},
    ],
    "errors": [
        {"type": "act", "data": {"muscles": {}, "vocal": {"kind": "none"}}},
        {"type": "mystery"},
        {"type": "reset", "config": {"seed": 11, "start_stage": 4,
                                     "start_thirst": 0.5}},
        {"type": "act", "data": {"muscles": {"head_turn": 2.5},
                                 "vocal": {"kind": "none"}}},
        {"type": "end"},
    ],
}


def main() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, client_lines in SCENARIOS.items():
        channel = SessionChannel()
        server_lines = [channel.greeting()]
        for msg in client_lines:
            server_lines.extend(channel.handle_line(dumps(msg)))
        (GOLDEN / f"{name}.in.jsonl").write_text(
            "".join(dumps(m) + "\n" for m in client_lines), encoding="utf-8")
        (GOLDEN / f"{name}.out.jsonl").write_text(
            "".join(dumps(m) + "\n" for m in server_lines), encoding="utf-8")
        print(f"wrote {name}: {len(client_lines)} in / {len(server_lines)} out")
    return 0


if __name__ == "__main__":
    sys.exit(main())
