"""The Monopolist Game and the multinomial counting bound behind it.

k players start with I/k units each.  Every round a uniformly chosen player
wins k - 1 units and every other player pays one.  Players at or below zero
keep playing; the game ends at the first round where at least k - 1 players
are at or below zero.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .core import Rng, TrialSummary, UniformBatch, derive_seeds, summarize

_BLOCK = 256


@dataclass(frozen=True)
class GameOutcome:
    terminated: bool
    rounds: int
    winner: int | None
    winners: tuple[int, ...] | None = None


@dataclass
class MonopolyStats:
    k: int
    capital: int
    trials: int
    max_rounds: int
    rounds: TrialSummary | None
    median_rounds: float | None
    unterminated: int
    outcomes: list[GameOutcome] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "I": self.capital,
            "trials": self.trials,
            "max_rounds": self.max_rounds,
            "terminated": self.trials - self.unterminated,
            "unterminated": self.unterminated,
            "median_rounds": self.median_rounds,
            "rounds": self.rounds.to_dict() if self.rounds else None,
        }


def _validate(k: int, capital: int, max_rounds: int | None) -> int:
    if k < 2:
        raise ValueError("need at least k=2 players")
    if capital <= 0 or capital % k:
        raise ValueError(f"total capital I={capital} must be positive and divisible by k={k}")
    if max_rounds is None:
        return 10 * capital * capital
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1")
    return max_rounds


def capitals_after(k: int, capital: int, wins: Sequence[int], rounds: int) -> list[int]:
    """Closed form: I/k + (k - 1) n_i - (rounds - n_i) for each player."""
    return [capital // k + (k - 1) * w - (rounds - w) for w in wins]


def replay(k: int, capital: int, winners: Sequence[int]) -> Iterator[list[int]]:
    """Capitals after each round of a winner sequence, by direct bookkeeping."""
    caps = [capital // k] * k
    for w in winners:
        for p in range(k):
            caps[p] += k - 1 if p == w else -1
        yield list(caps)


def _finished(caps: Sequence[int], k: int) -> bool:
    return sum(c <= 0 for c in caps) >= k - 1


def play(k: int, capital: int, seed: int, max_rounds: int | None = None, keep_winners: bool = False) -> GameOutcome:
    max_rounds = _validate(k, capital, max_rounds)
    rng = Rng(seed)
    caps = [capital // k] * k
    history = [] if keep_winners else None
    for r in range(1, max_rounds + 1):
        w = rng.below(k)
        for p in range(k):
            caps[p] += k - 1 if p == w else -1
        if history is not None:
            history.append(w)
        if _finished(caps, k):
            top = max(range(k), key=caps.__getitem__)
            return GameOutcome(True, r, top, tuple(history) if history is not None else None)
    return GameOutcome(False, max_rounds, None, tuple(history) if history is not None else None)


def play_many(k: int, capital: int, trials: int, seed: int = 0, max_rounds: int | None = None) -> list[GameOutcome]:
    """``play(k, I, derive_seed(seed, t), max_rounds)`` for every trial t, in lockstep."""
    max_rounds = _validate(k, capital, max_rounds)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    draws = UniformBatch(derive_seeds(seed, trials), k)
    start = capital // k
    live = np.arange(trials)
    wins = np.zeros((trials, k), dtype=np.int64)
    done_at = np.zeros(trials, dtype=np.int64)
    winner = np.full(trials, -1, dtype=np.int64)
    played = 0
    players = np.arange(k)
    while played < max_rounds and len(live):
        block = min(_BLOCK, max_rounds - played)
        w = draws.take(block)
        counts = wins[:, None, :] + np.cumsum(w[:, :, None] == players, axis=1)
        rounds = played + np.arange(1, block + 1)
        caps = start + k * counts - rounds[None, :, None]
        over = (caps <= 0).sum(axis=2) >= k - 1
        hit = over.any(axis=1)
        first = np.argmax(over, axis=1)
        rows = np.flatnonzero(hit)
        done_at[live[rows]] = played + first[rows] + 1
        winner[live[rows]] = np.argmax(caps[rows, first[rows]], axis=1)
        keep = ~hit
        live = live[keep]
        wins = counts[keep, -1, :]
        draws.select(keep)
        played += block
    out = []
    for t in range(trials):
        if done_at[t]:
            out.append(GameOutcome(True, int(done_at[t]), int(winner[t])))
        else:
            out.append(GameOutcome(False, max_rounds, None))
    return out


def monopoly_batch(k: int, capital: int, trials: int, seed: int = 0, max_rounds: int | None = None) -> MonopolyStats:
    """Termination rounds over seeded games; games hitting the cap are counted apart."""
    max_rounds = _validate(k, capital, max_rounds)
    outcomes = play_many(k, capital, trials, seed, max_rounds)
    rounds = [o.rounds for o in outcomes if o.terminated]
    unterminated = trials - len(rounds)
    return MonopolyStats(
        k,
        capital,
        trials,
        max_rounds,
        summarize(rounds) if rounds else None,
        float(statistics.median(rounds)) if rounds else None,
        unterminated,
        outcomes,
    )


def log2_factorial(n: int) -> float:
    if n < 0:
        raise ValueError("factorial of a negative number")
    return math.fsum(math.log2(i) for i in range(2, n + 1))


def log2_multinomial(counts: Sequence[int]) -> float:
    """``log2(n! / (n_1! ... n_k!))`` by summed log-factorials, n = sum(counts)."""
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    if not counts:
        return 0.0
    n = sum(counts)
    rest = sorted(counts)
    # n! / big! leaves only the factors big+1..n, so one category gives exactly 0
    big = rest.pop()
    head = math.fsum(math.log2(i) for i in range(big + 1, n + 1))
    return head - math.fsum(log2_factorial(c) for c in rest)


def stirling_multinomial(n: int, k: int) -> float:
    """Leading terms ``n log k - (k-1)/2 log n + k/2 log k`` of the central coefficient."""
    return n * math.log2(k) - 0.5 * (k - 1) * math.log2(n) + 0.5 * k * math.log2(k)


def g_bound(n: int, k: int, f: float | Callable[[int], float]) -> float:
    """Log-count of length-n winner strings with every |n_i - n/k| < f(n)."""
    fn = f(n) if callable(f) else f
    if fn <= 0:
        raise ValueError("f(n) must be positive")
    return stirling_multinomial(n, k) + (k - 1) * math.log2(fn) + k
