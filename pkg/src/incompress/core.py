"""Seeded randomness and trial statistics shared by every experiment.

The generator is fixed in-repo so that any implementation can reproduce the
exact value streams:

* ``splitmix64``: ``state += 0x9E3779B97F4A7C15``; then
  ``z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9``,
  ``z = (z ^ z >> 27) * 0x94D049BB133111EB``, output ``z ^ z >> 31``
  (all arithmetic mod 2**64).
* ``derive_seed(base, t)`` is output number ``t + 1`` of a splitmix64
  sequence whose state starts at ``base``.  The finalizer is a bijection and
  ``base + (t + 1) * gamma`` is injective in ``t`` (gamma is odd), so distinct
  trials always get distinct seeds.
* A stream seeded with ``seed`` is xoshiro256** whose four state words are the
  first four splitmix64 outputs from state ``seed``.
* ``below(bound)`` takes ``w = (bound - 1).bit_length()`` bit chunks from the
  low end of the current 64-bit word.  When fewer than ``w`` unused bits
  remain the rest of the word is dropped and a fresh word is drawn.  Chunks
  ``>= bound`` are rejected.  ``bound == 1`` consumes nothing.

A bit string of length n is n successive ``below(2)`` draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns ``(new_state, output)``."""
    state = (state + GOLDEN_GAMMA) & MASK64
    return state, _mix64(state)


def derive_seed(base: int, trial: int) -> int:
    """Seed for trial number ``trial`` of a batch seeded with ``base``."""
    if trial < 0:
        raise ValueError("trial index must be non-negative")
    return _mix64((base + (trial + 1) * GOLDEN_GAMMA) & MASK64)


def derive_seeds(base: int, trials: int) -> np.ndarray:
    """Vectorized ``derive_seed`` for trials ``0..trials-1`` (uint64 array)."""
    with np.errstate(over="ignore"):
        idx = np.arange(1, trials + 1, dtype=np.uint64)
        z = np.uint64(base & MASK64) + idx * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


def _initial_state(seed: int) -> list[int]:
    state = seed & MASK64
    words = []
    for _ in range(4):
        state, out = splitmix64(state)
        words.append(out)
    return words


class Rng:
    """Scalar xoshiro256** stream; the reference for :class:`StreamBatch`."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._s = _initial_state(self.seed)
        self.position = 0
        self._word = 0
        self._avail = 0

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        self.position += 1
        return result

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by chunked rejection sampling."""
        if bound < 1:
            raise ValueError("bound must be positive")
        width = (bound - 1).bit_length()
        if width == 0:
            return 0
        mask = (1 << width) - 1
        while True:
            if self._avail < width:
                self._word = self.next_u64()
                self._avail = 64
            value = self._word & mask
            self._word >>= width
            self._avail -= width
            if value < bound:
                return value

    def bits(self, n: int) -> str:
        return "".join("1" if self.below(2) else "0" for _ in range(n))


def _as_u64(x) -> np.ndarray:
    return np.asarray(x, dtype=np.uint64)


class StreamBatch:
    """Many independent xoshiro256** streams advanced in lockstep.

    Row ``r`` produces exactly the words of ``Rng(seeds[r])``.
    """

    def __init__(self, seeds: Iterable[int] | np.ndarray):
        seeds = np.atleast_1d(_as_u64(np.asarray(seeds, dtype=np.uint64)))
        rows = [_initial_state(int(s)) for s in seeds]
        state = np.array(rows, dtype=np.uint64).reshape(len(seeds), 4)
        self._s = [state[:, i].copy() for i in range(4)]
        self.size = len(seeds)

    def _next(self) -> np.ndarray:
        s0, s1, s2, s3 = self._s
        with np.errstate(over="ignore"):
            x = s1 * np.uint64(5)
            x = (x << np.uint64(7)) | (x >> np.uint64(57))
            result = x * np.uint64(9)
        t = s1 << np.uint64(17)
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3[:] = (s3 << np.uint64(45)) | (s3 >> np.uint64(19))
        return result

    def select(self, rows: np.ndarray) -> None:
        """Keep only the given rows (index array or boolean mask)."""
        self._s = [part[rows] for part in self._s]
        self.size = len(self._s[0])

    def words(self, count: int) -> np.ndarray:
        out = np.empty((self.size, count), dtype=np.uint64)
        for c in range(count):
            out[:, c] = self._next()
        return out


class UniformBatch:
    """Per-row streams of ``below(bound)`` draws, generated in bulk.

    Only valid for streams that make no other draws, which is how the batch
    simulators use them.
    """

    def __init__(self, seeds, bound: int):
        if bound < 2:
            raise ValueError("bound must be at least 2")
        self.bound = bound
        self.width = (bound - 1).bit_length()
        self.per_word = 64 // self.width
        self._streams = StreamBatch(seeds)
        self._buf = np.zeros((self._streams.size, 0), dtype=np.int64)
        self._count = np.zeros(self._streams.size, dtype=np.int64)

    def _refill(self, need: int) -> None:
        rows = self._streams.size
        accept = self.bound / (1 << self.width)
        short = int(need - self._count.min())
        n_words = max(1, math.ceil(short / (self.per_word * accept) * 1.1) + 1)
        words = self._streams.words(n_words)
        shifts = np.arange(self.per_word, dtype=np.uint64) * np.uint64(self.width)
        mask = np.uint64((1 << self.width) - 1)
        chunks = ((words[:, :, None] >> shifts) & mask).reshape(rows, -1).astype(np.int64)
        valid = chunks < self.bound
        n_valid = valid.sum(axis=1)
        # stable sort brings accepted chunks to the front, order preserved
        order = np.argsort(~valid, axis=1, kind="stable")
        packed = np.take_along_axis(chunks, order, axis=1)
        width = int((self._count + n_valid).max())
        buf = np.zeros((rows, width), dtype=np.int64)
        buf[:, : self._buf.shape[1]] = self._buf
        cols = np.arange(packed.shape[1])
        r, c = np.nonzero(cols[None, :] < n_valid[:, None])
        buf[r, self._count[r] + c] = packed[r, c]
        self._buf = buf
        self._count = self._count + n_valid

    def select(self, rows: np.ndarray) -> None:
        """Drop every row not in ``rows``; the kept streams continue unchanged."""
        self._streams.select(rows)
        self._buf = self._buf[rows]
        self._count = self._count[rows]

    def take(self, count: int) -> np.ndarray:
        """Next ``count`` draws for every row, shape ``(rows, count)``."""
        while self._count.min() < count:
            self._refill(count)
        out = self._buf[:, :count].copy()
        self._buf = self._buf[:, count:]
        self._count = self._count - count
        return out


def random_bits(rng: Rng, n: int) -> np.ndarray:
    """``n`` draws of ``below(2)`` as a uint8 array, fast path for fresh word boundaries."""
    if rng._avail:
        return np.fromiter((rng.below(2) for _ in range(n)), dtype=np.uint8, count=n)
    n_words = n // 64
    words = np.array([rng.next_u64() for _ in range(n_words)], dtype=np.uint64)
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    rest = n - 64 * n_words
    if rest:
        tail = np.fromiter((rng.below(2) for _ in range(rest)), dtype=np.uint8, count=rest)
        bits = np.concatenate([bits, tail])
    return bits.astype(np.uint8)


@dataclass(frozen=True)
class TrialSummary:
    count: int
    mean: float
    sample_std: float
    ci95_low: float
    ci95_high: float
    min: float
    max: float

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "sample_std": self.sample_std,
            "ci95_low": self.ci95_low,
            "ci95_high": self.ci95_high,
            "min": self.min,
            "max": self.max,
        }


def summarize(samples: Sequence[float]) -> TrialSummary:
    """Mean, (n-1)-denominator std and normal-approximation 95% CI."""
    values = sorted(float(x) for x in samples)
    count = len(values)
    if count == 0:
        raise ValueError("no samples")
    mean = math.fsum(values) / count
    lo, hi = values[0], values[-1]
    # rounding can push an fsum mean a hair outside [min, max]
    mean = min(max(mean, lo), hi)
    if count == 1:
        std = 0.0
    else:
        std = math.sqrt(math.fsum((x - mean) ** 2 for x in values) / (count - 1))
    half = 1.96 * std / math.sqrt(count)
    return TrialSummary(count, mean, std, mean - half, mean + half, lo, hi)
