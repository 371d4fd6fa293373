#!/usr/bin/env python3
"""Run the canonical water loop with the reflex agent and print its timeline."""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cribworld.agents import ReflexAgent
from cribworld.session import Session, SessionConfig


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--steps", type=int, default=2000)
    args = parser.parse_args()

    session = Session(SessionConfig(seed=args.seed))
    agent = ReflexAgent()
    obs = session.reset()
    prev_thirst = 0.0
    for _ in range(args.steps):
        action = agent.act(obs)
        obs = session.step(action)
        t = obs["t"]
        if prev_thirst <= 0.6 < obs["intero"]["thirst"]:
            print(f"t={t:5d} thirst crossed 0.6 -> crying starts")
        prev_thirst = obs["intero"]["thirst"]
        for ev in obs["events"]:
            if ev["type"] == "caregiver_mode":
                print(f"t={t:5d} caregiver {ev['from']} -> {ev['to']}"
                      + (f" ({ev['phase']})" if ev.get("phase") else ""))
            elif ev["type"] == "delivery":
                print(f"t={t:5d} {ev['substance']} bottle delivered, "
                      f"thirst={obs['intero']['thirst']:.3f}")
            elif ev["type"] == "narration_started":
                print(f"t={t:5d} caregiver says {ev['utterance']!r}")
    session.close()
    print(f"final: thirst={obs['intero']['thirst']:.3f} "
          f"hunger={obs['intero']['hunger']:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
