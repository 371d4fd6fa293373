"""PRNG determinism and sampling helpers."""

import pytest
from hypothesis import given, strategies as st

from cribworld.rng import (Xoshiro256StarStar, fnv1a64, sample_indices,
                           splitmix64_next)


def test_same_seed_same_stream():
    a = Xoshiro256StarStar(7)
    b = Xoshiro256StarStar(7)
    assert [a.next_u64() for _ in range(64)] == [b.next_u64() for _ in range(64)]


def test_different_seeds_differ():
    a = Xoshiro256StarStar(7)
    b = Xoshiro256StarStar(8)
    assert [a.next_u64() for _ in range(8)] != [b.next_u64() for _ in range(8)]


def test_splitmix_is_pure():
    assert splitmix64_next(0) == splitmix64_next(0)
    state1, out1 = splitmix64_next(12345)
    state2, out2 = splitmix64_next(state1)
    assert (out1, out2) != (0, 0)
    assert state1 != state2


def test_state_roundtrip():
    a = Xoshiro256StarStar(99)
    a.next_u64()
    words = a.state_words()
    b = Xoshiro256StarStar(0)
    b.set_state(words)
    assert [a.next_u64() for _ in range(16)] == [b.next_u64() for _ in range(16)]


@given(st.integers(min_value=0, max_value=2**64 - 1),
       st.integers(min_value=1, max_value=1000))
def test_randrange_in_bounds(seed, n):
    rng = Xoshiro256StarStar(seed)
    for _ in range(8):
        assert 0 <= rng.randrange(n) < n


def test_random_unit_interval():
    rng = Xoshiro256StarStar(5)
    values = [rng.random() for _ in range(1000)]
    assert all(0.0 <= v < 1.0 for v in values)
    assert 0.4 < sum(values) / len(values) < 0.6


@given(st.integers(min_value=0, max_value=2**32),
       st.integers(min_value=0, max_value=64))
def test_sample_indices_distinct_sorted(seed, k):
    rng = Xoshiro256StarStar(seed)
    out = sample_indices(rng, 512, k)
    assert len(out) == k
    assert out == sorted(set(out))
    assert all(0 <= i < 512 for i in out)


def test_sample_indices_rejects_bad_k():
    rng = Xoshiro256StarStar(0)
    with pytest.raises(ValueError):
        sample_indices(rng, 10, 11)


def test_fnv1a64_known_vectors():
    # Standard FNV-1a test vectors.
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_fnv1a64_resumable():
    whole = fnv1a64(b"hello world")
    partial = fnv1a64(b" world", fnv1a64(b"hello"))
    assert whole == partial
