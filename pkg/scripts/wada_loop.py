#!/usr/bin/env python3
"""Train the associator, then watch it ask for water with its first word."""

import argparse
import copy
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cribworld.agents import AssociatorAgent, TAG_RELIEF
from cribworld.session import Session, SessionConfig


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--train-seed", type=int, default=42)
    parser.add_argument("--train-steps", type=int, default=13000)
    parser.add_argument("--episodes", type=int, default=10)
    args = parser.parse_args()

    print(f"training associator for {args.train_steps} steps "
          f"(seed {args.train_seed}) ...")
    session = Session(SessionConfig(seed=args.train_seed))
    agent = AssociatorAgent()
    obs = session.reset()
    exposures = 0
    for _ in range(args.train_steps):
        obs = session.step(agent.act(obs))
        exposures += sum(1 for ev in obs["events"] if ev["type"] == "delivery")
    codebook = session.codebook
    session.close()

    top = agent.store.top_bits(TAG_RELIEF, 10)
    owners = sorted({sym for bit, _ in top for sym in codebook.alphabet
                     if bit in codebook.table[sym]})
    print(f"paired exposures: {exposures}; trained: {agent.trained()}")
    print(f"strongest relief bits belong to letters: {''.join(owners)}")

    wins = 0
    for i in range(args.episodes):
        config = SessionConfig(seed=100 + i, codec_seed=args.train_seed,
                               start_stage=4, start_thirst=0.65)
        es = Session(config)
        eobs = es.reset()
        subject = copy.deepcopy(agent)
        cried = False
        outcome = "timeout"
        for step in range(1, 2001):
            action = subject.act(eobs)
            if action["vocal"]["kind"] == "cry":
                cried = True
            eobs = es.step(action)
            for ev in eobs["events"]:
                if ev["type"] == "word_service":
                    print(f"  episode {i}: caregiver heard {ev['heard']!r} "
                          f"-> {ev['word']} at t={step}")
                if ev["type"] == "delivery" and ev["substance"] == "water":
                    outcome = f"water at t={step}" + (" (but cried)" if cried else "")
                    break
            else:
                continue
            break
        es.close()
        wins += outcome.startswith("water") and not cried
        print(f"  episode {i}: {outcome}")
    print(f"serviced without crying: {wins}/{args.episodes}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
