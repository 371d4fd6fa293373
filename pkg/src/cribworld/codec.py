"""Sparse speech codec.

Utterances over A-Z plus space are encoded as sequences of sparse binary
frames over a 512-dimensional space.  Each letter owns a random set of
exactly k (default 10) active indices; a letter is held for a fixed number of
consecutive frames and a space becomes a run of silent (empty) frames.
Decoding segments a stream at silent frames, chops each voiced stretch into
letter-sized blocks and majority-votes the per-frame nearest-letter matches.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rng import Xoshiro256StarStar, sample_indices

ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"

DEFAULT_DIMENSION = 512
DEFAULT_CARDINALITY = 10
DEFAULT_FRAMES_PER_SYMBOL = 3
DEFAULT_GAP_FRAMES = 2
DEFAULT_THETA_MIN = 4

Frame = tuple[int, ...]

SILENCE: Frame = ()


class CodebookCollisionError(ValueError):
    """Two distinct symbols ended up with identical index sets."""


class InvalidParameterError(ValueError):
    pass


class InvalidSymbolError(ValueError):
    pass


@dataclass(frozen=True)
class SdrCodebook:
    """Immutable letter -> sorted index set table; shareable across sessions."""

    dimension: int
    cardinality_k: int
    seed: int
    table: dict[str, Frame]
    alphabet: str = ALPHABET

    def frame_for(self, symbol: str) -> Frame:
        try:
            return self.table[symbol]
        except KeyError:
            raise InvalidSymbolError(f"symbol {symbol!r} is not in the codebook") from None


@dataclass(frozen=True)
class SdrStream:
    """Ordered frames plus the timing constants they were encoded with."""

    frames: tuple[Frame, ...]
    dimension: int = DEFAULT_DIMENSION
    frames_per_symbol: int = DEFAULT_FRAMES_PER_SYMBOL
    gap_frames: int = DEFAULT_GAP_FRAMES

    def __len__(self) -> int:
        return len(self.frames)


@dataclass
class RunDecode:
    """One letter-sized block of a voiced stretch after majority voting."""

    symbol: str | None
    start: int
    frame_count: int
    votes: dict[str, int] = field(default_factory=dict)
    mean_best_overlap: float = 0.0


@dataclass
class FrameDecode:
    symbol: str | None          # None means silence
    score: int = 0
    ambiguous: bool = False

    @property
    def is_silence(self) -> bool:
        return self.symbol is None


def validate_frame(frame, dimension: int) -> Frame:
    out = tuple(int(i) for i in frame)
    prev = -1
    for i in out:
        if i <= prev:
            raise InvalidParameterError("frame indices must be strictly increasing")
        if not 0 <= i < dimension:
            raise InvalidParameterError(f"frame index {i} outside [0, {dimension})")
        prev = i
    return out


def codebook_from_rng(rng: Xoshiro256StarStar, dimension: int, cardinality_k: int,
                      seed_label: int) -> SdrCodebook:
    """Draw the per-letter index sets from an existing stream, in alphabet order."""
    if cardinality_k <= 0 or dimension <= 0:
        raise InvalidParameterError("dimension and cardinality_k must be positive")
    if cardinality_k > dimension:
        raise InvalidParameterError(
            f"cardinality_k={cardinality_k} exceeds dimension={dimension}")
    table: dict[str, Frame] = {}
    seen: dict[Frame, str] = {}
    for symbol in ALPHABET:
        indices = tuple(sample_indices(rng, dimension, cardinality_k))
        if indices in seen:
            raise CodebookCollisionError(
                f"symbols {seen[indices]!r} and {symbol!r} drew identical index sets")
        seen[indices] = symbol
        table[symbol] = indices
    return SdrCodebook(dimension=dimension, cardinality_k=cardinality_k,
                       seed=seed_label, table=table)


def build_codebook(seed: int, dimension: int = DEFAULT_DIMENSION,
                   cardinality_k: int = DEFAULT_CARDINALITY) -> SdrCodebook:
    rng = Xoshiro256StarStar(seed)
    return codebook_from_rng(rng, dimension, cardinality_k, seed_label=seed)


def encode_utterance(codebook: SdrCodebook, text: str,
                     frames_per_symbol: int = DEFAULT_FRAMES_PER_SYMBOL,
                     gap_frames: int = DEFAULT_GAP_FRAMES) -> SdrStream:
    if frames_per_symbol <= 0:
        raise InvalidParameterError("frames_per_symbol must be positive")
    if gap_frames < 0:
        raise InvalidParameterError("gap_frames must be non-negative")
    frames: list[Frame] = []
    for pos, ch in enumerate(text):
        if ch == " ":
            frames.extend([SILENCE] * gap_frames)
        elif ch in codebook.table:
            frames.extend([codebook.table[ch]] * frames_per_symbol)
        else:
            raise InvalidSymbolError(f"character {ch!r} at position {pos} is not encodable")
    return SdrStream(frames=tuple(frames), dimension=codebook.dimension,
                     frames_per_symbol=frames_per_symbol, gap_frames=gap_frames)


def apply_noise(frame, flips: int, rng: Xoshiro256StarStar,
                dimension: int = DEFAULT_DIMENSION) -> Frame:
    """Toggle membership of `flips` distinct positions; the input is untouched."""
    if flips < 0 or flips > dimension:
        raise InvalidParameterError(f"flips must be in [0, {dimension}]")
    if flips == 0:
        return tuple(frame)
    active = set(frame)
    for pos in sample_indices(rng, dimension, flips):
        if pos in active:
            active.discard(pos)
        else:
            active.add(pos)
    return tuple(sorted(active))


def overlap(a, b) -> int:
    """Size of the index intersection of two frames."""
    return len(set(a) & set(b))


def decode_frame(codebook: SdrCodebook, frame,
                 theta_min: int = DEFAULT_THETA_MIN) -> FrameDecode:
    if not frame:
        return FrameDecode(symbol=None)
    active = set(frame)
    best_symbol = None
    best_score = -1
    tied = False
    for symbol in codebook.alphabet:
        score = len(active & set(codebook.table[symbol]))
        if score > best_score:
            best_symbol, best_score, tied = symbol, score, False
        elif score == best_score:
            tied = True
    if best_score < theta_min:
        return FrameDecode(symbol=None, score=best_score)
    return FrameDecode(symbol=best_symbol, score=best_score, ambiguous=tied)


def decode_runs(codebook: SdrCodebook, stream: SdrStream,
                theta_min: int = DEFAULT_THETA_MIN) -> list[RunDecode]:
    """Chop voiced stretches into frames_per_symbol blocks and vote each block."""
    fps = max(1, stream.frames_per_symbol)
    decodes = [decode_frame(codebook, f, theta_min) for f in stream.frames]
    runs: list[RunDecode] = []
    i = 0
    n = len(stream.frames)
    while i < n:
        if decodes[i].is_silence:
            i += 1
            continue
        j = i
        while j < n and not decodes[j].is_silence:
            j += 1
        for start in range(i, j, fps):
            block = decodes[start:min(start + fps, j)]
            votes: dict[str, int] = {}
            score_sum = 0
            for d in block:
                score_sum += d.score
                if d.symbol is not None:
                    votes[d.symbol] = votes.get(d.symbol, 0) + 1
            winner = None
            for symbol, count in sorted(votes.items()):
                if count * 2 > len(block):
                    winner = symbol
                    break
            runs.append(RunDecode(symbol=winner, start=start, frame_count=len(block),
                                  votes=votes,
                                  mean_best_overlap=score_sum / len(block)))
        i = j
    return runs


def decode_stream_report(codebook: SdrCodebook, stream: SdrStream,
                         theta_min: int = DEFAULT_THETA_MIN) -> tuple[str, list[RunDecode]]:
    """Decoded text plus the blocks that had no majority and were dropped.

    Silence runs between voiced stretches are turned back into spaces, one per
    gap_frames silent frames, so zero-noise decoding inverts encoding for any
    letters-and-inner-spaces text; leading and trailing silence decode to
    nothing (an all-silence stream is the empty string).
    """
    decodes = [decode_frame(codebook, f, theta_min) for f in stream.frames]
    runs = decode_runs(codebook, stream, theta_min)
    runs_by_start = {r.start: r for r in runs}
    dropped = [r for r in runs if r.symbol is None]

    pieces: list[str] = []   # alternating silence-run and stretch chunks
    i = 0
    n = len(stream.frames)
    fps = max(1, stream.frames_per_symbol)
    saw_stretch = False
    pending_gap = ""
    while i < n:
        if decodes[i].is_silence:
            j = i
            while j < n and decodes[j].is_silence:
                j += 1
            if saw_stretch and stream.gap_frames > 0:
                pending_gap = " " * ((j - i) // stream.gap_frames)
            i = j
        else:
            j = i
            while j < n and not decodes[j].is_silence:
                j += 1
            if pending_gap:
                pieces.append(pending_gap)
            pending_gap = ""
            saw_stretch = True
            for start in range(i, j, fps):
                run = runs_by_start[start]
                if run.symbol is not None:
                    pieces.append(run.symbol)
            i = j
    return "".join(pieces), dropped


def decode_stream(codebook: SdrCodebook, stream: SdrStream,
                  theta_min: int = DEFAULT_THETA_MIN) -> str:
    text, _ = decode_stream_report(codebook, stream, theta_min)
    return text


def stream_to_lists(stream: SdrStream) -> list[list[int]]:
    """Wire form: a JSON-ready array of index arrays."""
    return [list(f) for f in stream.frames]


def stream_from_lists(frames, dimension: int = DEFAULT_DIMENSION,
                      frames_per_symbol: int = DEFAULT_FRAMES_PER_SYMBOL,
                      gap_frames: int = DEFAULT_GAP_FRAMES) -> SdrStream:
    return SdrStream(frames=tuple(validate_frame(f, dimension) for f in frames),
                     dimension=dimension, frames_per_symbol=frames_per_symbol,
                     gap_frames=gap_frames)
