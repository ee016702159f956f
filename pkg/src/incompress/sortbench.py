"""Comparison-counting sorts and the log2(n!) average-case floor."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import Rng, TrialSummary, derive_seed, summarize

SORTS = ("merge", "quick", "insertion")


class Counter:
    """The one place element order is decided; every call counts."""

    def __init__(self):
        self.count = 0

    def less(self, a, b) -> bool:
        self.count += 1
        return a < b


def _merge_sort(a: list, cmp: Counter) -> list:
    if len(a) <= 1:
        return a
    mid = len(a) // 2
    left = _merge_sort(a[:mid], cmp)
    right = _merge_sort(a[mid:], cmp)
    out = []
    i = j = 0
    while i < len(left) and j < len(right):
        if cmp.less(right[j], left[i]):
            out.append(right[j])
            j += 1
        else:
            out.append(left[i])
            i += 1
    out.extend(left[i:])
    out.extend(right[j:])
    return out


def _insertion_sort(a: list, cmp: Counter) -> list:
    for i in range(1, len(a)):
        x = a[i]
        j = i - 1
        while j >= 0 and cmp.less(x, a[j]):
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x
    return a


def _quick_sort(a: list, cmp: Counter) -> list:
    """Median-of-three pivot, Lomuto partition; runs of two are one comparison."""
    stack = [(0, len(a) - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 1:
            continue
        if hi - lo == 1:
            if cmp.less(a[hi], a[lo]):
                a[lo], a[hi] = a[hi], a[lo]
            continue
        mid = (lo + hi) // 2
        # order a[lo] <= a[mid] <= a[hi]
        if cmp.less(a[mid], a[lo]):
            a[lo], a[mid] = a[mid], a[lo]
        if cmp.less(a[hi], a[mid]):
            a[mid], a[hi] = a[hi], a[mid]
            if cmp.less(a[mid], a[lo]):
                a[lo], a[mid] = a[mid], a[lo]
        if hi - lo == 2:
            continue
        # pivot parked at hi - 1; a[lo] and a[hi] already sit on the right sides
        a[mid], a[hi - 1] = a[hi - 1], a[mid]
        pivot = a[hi - 1]
        store = lo + 1
        for k in range(lo + 1, hi - 1):
            if cmp.less(a[k], pivot):
                a[k], a[store] = a[store], a[k]
                store += 1
        a[store], a[hi - 1] = a[hi - 1], a[store]
        stack.append((lo, store - 1))
        stack.append((store + 1, hi))
    return a


_IMPLS: dict[str, Callable[[list, Counter], list]] = {
    "merge": _merge_sort,
    "quick": _quick_sort,
    "insertion": _insertion_sort,
}


def check_permutation(seq: Sequence[int]) -> None:
    if sorted(seq) != list(range(1, len(seq) + 1)):
        raise ValueError("input must be a permutation of 1..n")


def instrumented_sort(algorithm: str, permutation: Sequence[int]) -> tuple[list[int], int]:
    """Sort a permutation of 1..n; returns ``(sorted, comparisons)``."""
    if algorithm not in _IMPLS:
        raise ValueError(f"unknown sort {algorithm!r}; choose from {', '.join(SORTS)}")
    check_permutation(permutation)
    cmp = Counter()
    out = _IMPLS[algorithm](list(permutation), cmp)
    return out, cmp.count


def random_permutation(n: int, seed: int) -> list[int]:
    """Fisher-Yates on 1..n: for i = n-1 down to 1 swap slot i with slot below(i + 1)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = Rng(seed)
    perm = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def log2_factorial(n: int) -> float:
    """Sum of log2(i) for i = 2..n, compensated (math.fsum)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.fsum(math.log2(i) for i in range(2, n + 1))


@dataclass
class SortBench:
    n: int
    trials: int
    log2_factorial: float
    summaries: dict[str, TrialSummary]
    counts: dict[str, list[int]]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "log2_factorial": self.log2_factorial,
            "algorithms": {name: s.to_dict() for name, s in self.summaries.items()},
        }


def sort_bench(n: int, trials: int, algorithms: Sequence[str] = SORTS, seed: int = 0) -> SortBench:
    """Comparison counts of each algorithm on the same seeded permutations."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    for name in algorithms:
        if name not in _IMPLS:
            raise ValueError(f"unknown sort {name!r}")
    counts: dict[str, list[int]] = {name: [] for name in algorithms}
    for trial in range(trials):
        perm = random_permutation(n, derive_seed(seed, trial))
        for name in algorithms:
            counts[name].append(instrumented_sort(name, perm)[1])
    return SortBench(
        n,
        trials,
        log2_factorial(n),
        {name: summarize(c) for name, c in counts.items()},
        counts,
    )
