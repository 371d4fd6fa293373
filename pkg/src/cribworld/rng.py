"""Deterministic, cross-language-reproducible PRNG.

A session owns a single xoshiro256** stream seeded through splitmix64.  All
randomness in a session is drawn from that one stream in a fixed order
(codebook, then entity placement, then per-step needs), so an equal seed plus
an equal action sequence reproduces an episode bit for bit.  Python's
`random` module is deliberately not used anywhere in the simulation.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state once; returns (new_state, output word)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, (z ^ (z >> 31)) & MASK64


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """xoshiro256** with splitmix64 seeding; state is four u64 words."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        sm = seed & MASK64
        sm, self.s0 = splitmix64_next(sm)
        sm, self.s1 = splitmix64_next(sm)
        sm, self.s2 = splitmix64_next(sm)
        sm, self.s3 = splitmix64_next(sm)

    def next_u64(self) -> int:
        result = (_rotl((self.s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (self.s1 << 17) & MASK64
        self.s2 ^= self.s0
        self.s3 ^= self.s1
        self.s1 ^= self.s2
        self.s0 ^= self.s3
        self.s2 ^= t
        self.s3 = _rotl(self.s3, 45)
        return result

    def randrange(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("randrange() requires n >= 1")
        threshold = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            u = self.next_u64()
            if u < threshold:
                return u % n

    def random(self) -> float:
        """Float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def state_words(self) -> tuple[int, int, int, int]:
        return (self.s0, self.s1, self.s2, self.s3)

    def set_state(self, words) -> None:
        self.s0, self.s1, self.s2, self.s3 = (int(w) & MASK64 for w in words)


def sample_indices(rng: Xoshiro256StarStar, n: int, k: int) -> list[int]:
    """k distinct indices from [0, n), sorted; partial Fisher-Yates."""
    if not 0 <= k <= n:
        raise ValueError(f"cannot sample {k} distinct indices from [0, {n})")
    pool = list(range(n))
    for i in range(k):
        j = i + rng.randrange(n - i)
        pool[i], pool[j] = pool[j], pool[i]
    return sorted(pool[:k])


FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3


def fnv1a64(data: bytes, h: int = FNV64_OFFSET) -> int:
    """FNV-1a 64-bit hash; `h` lets callers resume from a saved prefix state."""
    prime = FNV64_PRIME
    for b in data:
        h = ((h ^ b) * prime) & MASK64
    return h
