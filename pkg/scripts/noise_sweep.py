#!/usr/bin/env python3
"""Codec robustness sweep: stream decode accuracy as per-frame flips grow."""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cribworld.codec import SdrStream, apply_noise, build_codebook, \
    decode_stream, encode_utterance
from cribworld.rng import Xoshiro256StarStar


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--max-flips", type=int, default=6)
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--word", default=None,
                        help="sweep a whole word instead of single letters")
    args = parser.parse_args()

    codebook = build_codebook(args.seed)
    rng = Xoshiro256StarStar(args.seed ^ 0xACCE55)
    targets = [args.word] if args.word else list(codebook.alphabet)
    print(f"{'flips':>5} {'accuracy':>9}")
    for flips in range(args.max_flips + 1):
        correct = total = 0
        for target in targets:
            clean = encode_utterance(codebook, target)
            for _ in range(args.trials):
                noisy = SdrStream(
                    frames=tuple(apply_noise(f, flips, rng, codebook.dimension)
                                 for f in clean.frames),
                    dimension=clean.dimension,
                    frames_per_symbol=clean.frames_per_symbol,
                    gap_frames=clean.gap_frames)
                correct += decode_stream(codebook, noisy) == target
                total += 1
        print(f"{flips:>5} {correct / total:>9.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
