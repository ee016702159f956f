"""Indexing schemes for the n x n mesh and their locality scans.

A scheme maps the numbers 1..n^2 onto grid cells ``(row, col)`` with
``0 <= row, col < n``.  Distances are taken between integer cell coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import Rng

SCHEMES = ("row_major", "boustrophedon", "morton", "hilbert")
METRICS = ("euclidean", "manhattan", "chebyshev")
EXHAUSTIVE_LIMIT = 64


class MeshError(ValueError):
    pass


def _is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _hilbert_d2xy(order: int, d: int) -> tuple[int, int]:
    # classic iterative d -> (x, y); base cells visit (0,0),(0,1),(1,1),(1,0)
    x = y = 0
    s = 1
    t = d
    while s < order:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        if ry == 0:
            if rx == 1:
                x, y = s - 1 - x, s - 1 - y
            x, y = y, x
        x += s * rx
        y += s * ry
        t //= 4
        s *= 2
    return x, y


def _morton_decode(d: int) -> tuple[int, int]:
    row = col = 0
    bit = 0
    while d:
        col |= (d & 1) << bit
        row |= ((d >> 1) & 1) << bit
        d >>= 2
        bit += 1
    return row, col


@dataclass(frozen=True)
class IndexingScheme:
    """Bijection between 1..n^2 and the cells of an n x n mesh.

    ``hilbert`` starts at (0, 0) and its 2 x 2 base pattern runs
    (0,0), (1,0), (1,1), (0,1) in (row, col); ``morton`` puts the low
    index bit in the column.
    """

    name: str
    n: int

    def __post_init__(self):
        if self.name not in SCHEMES:
            raise MeshError(f"unknown scheme {self.name!r}; choose from {', '.join(SCHEMES)}")
        if self.n < 1:
            raise MeshError("side length must be positive")
        if self.name in ("morton", "hilbert") and not _is_pow2(self.n):
            raise MeshError(f"{self.name} needs a power-of-two side length, got {self.n}")

    @property
    def size(self) -> int:
        return self.n * self.n

    def index_to_cell(self, i: int) -> tuple[int, int]:
        n = self.n
        if not 1 <= i <= n * n:
            raise MeshError(f"index {i} outside 1..{n * n}")
        d = i - 1
        if self.name == "row_major":
            return divmod(d, n)
        if self.name == "boustrophedon":
            row, col = divmod(d, n)
            return (row, col) if row % 2 == 0 else (row, n - 1 - col)
        if self.name == "morton":
            return _morton_decode(d)
        x, y = _hilbert_d2xy(n, d)
        return y, x

    @cached_property
    def _inverse(self) -> dict[tuple[int, int], int]:
        return {tuple(cell): i + 1 for i, cell in enumerate(self.cells.tolist())}

    def cell_to_index(self, row: int, col: int) -> int:
        if not (0 <= row < self.n and 0 <= col < self.n):
            raise MeshError(f"cell ({row}, {col}) outside the {self.n}x{self.n} mesh")
        return self._inverse[(row, col)]

    @cached_property
    def cells(self) -> np.ndarray:
        """``cells[i - 1]`` is the (row, col) of index i."""
        return np.array([self.index_to_cell(i) for i in range(1, self.size + 1)], dtype=np.int64)


def distance(metric: str, a, b) -> float:
    dr = abs(a[0] - b[0])
    dc = abs(a[1] - b[1])
    if metric == "euclidean":
        return math.hypot(dr, dc)
    if metric == "manhattan":
        return float(dr + dc)
    if metric == "chebyshev":
        return float(max(dr, dc))
    raise MeshError(f"unknown metric {metric!r}")


def _dist_array(metric: str, dr: np.ndarray, dc: np.ndarray) -> np.ndarray:
    if metric == "euclidean":
        return np.sqrt(dr * dr + dc * dc)
    if metric == "manhattan":
        return (dr + dc).astype(float)
    if metric == "chebyshev":
        return np.maximum(dr, dc).astype(float)
    raise MeshError(f"unknown metric {metric!r}")


def _dist_squared(metric: str, dr: np.ndarray, dc: np.ndarray) -> np.ndarray:
    # exact integers, so threshold tests do not depend on sqrt rounding
    if metric == "euclidean":
        return dr * dr + dc * dc
    if metric == "manhattan":
        return (dr + dc) ** 2
    if metric == "chebyshev":
        return np.maximum(dr, dc) ** 2
    raise MeshError(f"unknown metric {metric!r}")


@dataclass(frozen=True)
class DilationResult:
    scheme: str
    n: int
    metric: str
    c_max: float
    witness: tuple[int, int]
    sampled: bool = False


def _check_limit(scheme: IndexingScheme, limit: int) -> None:
    if scheme.n > limit:
        raise MeshError(
            f"n={scheme.n} exceeds the exhaustive limit {limit}; use sampled mode (samples=...)"
        )


def worst_dilation(
    scheme: IndexingScheme,
    metric: str = "euclidean",
    *,
    limit: int = EXHAUSTIVE_LIMIT,
    samples: int | None = None,
    seed: int = 0,
) -> DilationResult:
    """Largest ``(d(F(i), F(j)) + 1)**2 / |i - j|`` over pairs i < j.

    Exhaustive by default; the witness is the lexicographically smallest
    maximizing pair.  With ``samples`` the maximum is taken over that many
    seeded random pairs instead.
    """
    if metric not in METRICS:
        raise MeshError(f"unknown metric {metric!r}")
    cells = scheme.cells
    size = scheme.size
    if size < 2:
        raise MeshError("need at least two cells")
    if samples is not None:
        return _sampled_dilation(scheme, metric, samples, seed)
    _check_limit(scheme, limit)
    best = -1.0
    witness = (0, 0)
    for gap in range(1, size):
        diff = np.abs(cells[gap:] - cells[:-gap])
        value = (_dist_array(metric, diff[:, 0], diff[:, 1]) + 1.0) ** 2 / gap
        top = int(np.argmax(value))
        v = float(value[top])
        cand = (top + 1, top + 1 + gap)
        if v > best or (v == best and cand < witness):
            best, witness = v, cand
    return DilationResult(scheme.name, scheme.n, metric, best, witness)


def _sampled_dilation(scheme: IndexingScheme, metric: str, samples: int, seed: int) -> DilationResult:
    rng = Rng(seed)
    size = scheme.size
    best, witness = -1.0, (0, 0)
    for _ in range(samples):
        i = rng.below(size) + 1
        j = rng.below(size - 1) + 1
        if j >= i:
            j += 1
        i, j = min(i, j), max(i, j)
        d = distance(metric, scheme.index_to_cell(i), scheme.index_to_cell(j))
        v = (d + 1.0) ** 2 / (j - i)
        if v > best or (v == best and (i, j) < witness):
            best, witness = v, (i, j)
    return DilationResult(scheme.name, scheme.n, metric, best, witness, sampled=True)


def corners(n: int) -> list[tuple[int, int]]:
    return [(0, 0), (0, n - 1), (n - 1, 0), (n - 1, n - 1)]


def corner_locality(
    scheme: IndexingScheme,
    metric: str = "euclidean",
    c0: float = 2.5,
    *,
    limit: int = EXHAUSTIVE_LIMIT,
) -> dict[tuple[int, int], float]:
    """For each corner cell, the fraction of other indices j far from it.

    With i the corner's index, j counts when ``d(F(i), F(j)) >= sqrt(c0 * |i - j|)``.
    """
    if metric not in METRICS:
        raise MeshError(f"unknown metric {metric!r}")
    if c0 < 0:
        raise MeshError("c0 must be non-negative")
    _check_limit(scheme, limit)
    cells = scheme.cells
    size = scheme.size
    gaps_all = np.arange(1, size + 1)
    out = {}
    for corner in corners(scheme.n):
        i = scheme.cell_to_index(*corner)
        others = gaps_all != i
        diff = np.abs(cells[others] - np.asarray(corner))
        gap = np.abs(gaps_all[others] - i)
        far = _dist_squared(metric, diff[:, 0], diff[:, 1]) >= c0 * gap
        out[corner] = float(far.sum()) / (size - 1)
    return out
