"""Unit-step random walks in k dimensions.

Each step is one of 2k moves, drawn with ``below(2 * k)``: move ``v`` acts on
dimension ``v // 2`` with direction ``+1`` if ``v % 2`` else ``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Rng, TrialSummary, UniformBatch, derive_seeds, summarize

# trials are simulated in chunks of at most this many steps in total
_CHUNK_STEPS = 2_000_000


@dataclass(frozen=True)
class WalkRecord:
    k: int
    n: int
    steps: tuple[int, ...]
    displacement: tuple[int, ...]
    max_excursion: tuple[int, ...]

    def check(self) -> None:
        assert sum(self.steps) == self.n
        for m, d, big_m in zip(self.steps, self.displacement, self.max_excursion):
            assert abs(d) <= big_m <= m
            assert (d - m) % 2 == 0


@dataclass
class WalkStats:
    k: int
    n: int
    trials: int
    abs_displacement: list[TrialSummary]
    max_excursion: list[TrialSummary]
    steps: list[TrialSummary]
    records: list[WalkRecord] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "trials": self.trials,
            "dimensions": [
                {
                    "dim": d,
                    "abs_displacement": self.abs_displacement[d].to_dict(),
                    "max_excursion": self.max_excursion[d].to_dict(),
                    "steps": self.steps[d].to_dict(),
                }
                for d in range(self.k)
            ],
        }


def _records_from_moves(k: int, moves: np.ndarray) -> list[WalkRecord]:
    """Records for a ``(trials, n)`` array of moves in ``0..2k-1``."""
    trials, n = moves.shape
    dims = moves >> 1
    signs = (moves & 1).astype(np.int32) * 2 - 1
    steps = np.zeros((trials, k), dtype=np.int64)
    disp = np.zeros((trials, k), dtype=np.int64)
    peak = np.zeros((trials, k), dtype=np.int64)
    for d in range(k):
        on = dims == d
        steps[:, d] = on.sum(axis=1)
        if n:
            pos = np.cumsum(np.where(on, signs, 0), axis=1, dtype=np.int32)
            disp[:, d] = pos[:, -1]
            peak[:, d] = np.abs(pos).max(axis=1)
    return [
        WalkRecord(k, n, tuple(steps[r].tolist()), tuple(disp[r].tolist()), tuple(peak[r].tolist()))
        for r in range(trials)
    ]


def walk_from_moves(k: int, moves) -> WalkRecord:
    moves = np.asarray(moves, dtype=np.int64).reshape(1, -1)
    if moves.size and (moves.min() < 0 or moves.max() >= 2 * k):
        raise ValueError(f"moves must lie in 0..{2 * k - 1}")
    return _records_from_moves(k, moves)[0]


def simulate_walk(k: int, n: int, seed: int) -> WalkRecord:
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = Rng(seed)
    moves = [rng.below(2 * k) for _ in range(n)]
    return walk_from_moves(k, moves)


def walk_records(k: int, n: int, trials: int, seed: int) -> list[WalkRecord]:
    """``simulate_walk(k, n, derive_seed(seed, t))`` for every trial t, in bulk."""
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    seeds = derive_seeds(seed, trials)
    chunk = max(1, _CHUNK_STEPS // max(n, 1))
    records: list[WalkRecord] = []
    for lo in range(0, trials, chunk):
        part = seeds[lo : lo + chunk]
        if n == 0:
            moves = np.zeros((len(part), 0), dtype=np.int64)
        else:
            moves = UniformBatch(part, 2 * k).take(n)
        records.extend(_records_from_moves(k, moves))
    return records


def walk_batch(k: int, n: int, trials: int, seed: int = 0) -> WalkStats:
    records = walk_records(k, n, trials, seed)
    per_dim = range(k)
    return WalkStats(
        k,
        n,
        trials,
        [summarize([abs(r.displacement[d]) for r in records]) for d in per_dim],
        [summarize([r.max_excursion[d] for r in records]) for d in per_dim],
        [summarize([r.steps[d] for r in records]) for d in per_dim],
        records,
    )
