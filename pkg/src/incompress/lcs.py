"""Common subsequences of binary strings: exact DP, Zero-Major, and the
two lossless re-encodings used in the expected-LCS arguments.

Strings are ``str`` over ``"01"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .codes import check_bits
from .core import Rng, TrialSummary, derive_seed, random_bits, summarize

Algorithm = Literal["dp", "zero_major"]
# below this length the plain-Python trace codec beats numpy's call overhead
_SMALL = 64
ALGORITHMS = ("dp", "zero_major")


class TraceError(ValueError):
    def __init__(self, detail: str):
        super().__init__(f"undecodable trace: {detail}")


@dataclass(frozen=True)
class TraceEncoding:
    """Zero-Major comparison outcomes ``y`` and side information ``z``.

    ``exhausted`` records which input ran out first ("s", "t" or "both").  The
    decoder needs it only when a trailing run of mismatches could have been
    consumed by either string; ``y`` and ``z`` alone collide there.
    """

    y: str
    z: str
    n: int
    exhausted: str = "both"

    @property
    def w(self) -> str:
        """Tail appended to z; every match before it produced one z bit."""
        return self.z[self.y.count("0") :]


@dataclass(frozen=True)
class SubseqEncoding:
    encoded: str
    m: int


@dataclass(frozen=True)
class LcsSummary:
    n: int
    trials: int
    algorithm: str
    ratio_stats: TrialSummary
    exhaustive: bool = False
    ratios: list[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "algorithm": self.algorithm,
            "exhaustive": self.exhaustive,
            "ratio_stats": self.ratio_stats.to_dict(),
        }


def is_subsequence(u: str, s: str) -> bool:
    it = iter(s)
    return all(ch in it for ch in u)


def _as_codes(s: str) -> np.ndarray:
    return np.frombuffer(s.encode("ascii"), dtype=np.uint8)


def lcs_table(s: str, t: str) -> np.ndarray:
    """Full DP table ``L[i, j] = lcs length of s[:i], t[:j]``.

    Rows are filled with a running maximum: along a row the table is
    nondecreasing, so ``L[i, j] = max_{j' <= j} max(L[i-1, j'], L[i-1, j'-1] + eq)``.
    """
    a, b = _as_codes(s), _as_codes(t)
    table = np.zeros((len(s) + 1, len(t) + 1), dtype=np.int32)
    for i in range(1, len(s) + 1):
        prev = table[i - 1]
        cand = prev.copy()
        cand[1:] = np.maximum(prev[1:], prev[:-1] + (b == a[i - 1]))
        table[i] = np.maximum.accumulate(cand)
    return table


def lcs_length(s: str, t: str) -> int:
    a, b = _as_codes(s), _as_codes(t)
    row = np.zeros(len(t) + 1, dtype=np.int32)
    for ch in a:
        cand = row.copy()
        cand[1:] = np.maximum(row[1:], row[:-1] + (b == ch))
        row = np.maximum.accumulate(cand)
    return int(row[-1])


def lcs_dp(s: str, t: str) -> str:
    """One longest common subsequence.

    Traceback takes the diagonal on equal bits, otherwise steps back in ``s``
    when that keeps the optimum, else in ``t``.
    """
    check_bits(s)
    check_bits(t)
    table = lcs_table(s, t)
    i, j = len(s), len(t)
    out = []
    while i and j:
        if s[i - 1] == t[j - 1]:
            out.append(s[i - 1])
            i -= 1
            j -= 1
        elif table[i - 1, j] >= table[i, j - 1]:
            i -= 1
        else:
            j -= 1
    return "".join(reversed(out))


def _equal_lengths(s: str, t: str) -> int:
    check_bits(s)
    check_bits(t)
    if len(s) != len(t):
        raise ValueError(f"strings must have equal length, got {len(s)} and {len(t)}")
    return len(s)


def zero_major(s: str, t: str) -> str:
    """Greedy common subsequence: on a mismatch skip the 1 on whichever side has it."""
    n = _equal_lengths(s, t)
    out = []
    i = j = 0
    while i < n and j < n:
        a = s[i]
        if a == t[j]:
            out.append(a)
            i += 1
            j += 1
        elif a == "0":
            # t_j = 1 keeps mismatching until the next 0 in t
            j = t.find("0", j)
            if j < 0:
                break
        else:
            i = s.find("0", i)
            if i < 0:
                break
    return "".join(out)


def zero_major_length(s: str, t: str) -> int:
    return len(zero_major(s, t))


def _one_runs(bits: np.ndarray) -> tuple[np.ndarray, int]:
    """Lengths of the 1-runs ending at each 0, and the trailing 1-run length."""
    zeros = np.flatnonzero(bits == 0)
    starts = np.concatenate(([0], zeros[:-1] + 1)) if len(zeros) else zeros
    return zeros - starts, len(bits) - (int(zeros[-1]) + 1 if len(zeros) else 0)


def trace_encode(s: str, t: str) -> TraceEncoding:
    """Record Zero-Major's comparisons: y gets 1 per mismatch, 0 per match.

    z gets one bit per match: the direction of the preceding mismatch run
    (0: i advanced, 1: j advanced) when there is one, else the matched bit.
    The unread tail w of the string that was not exhausted is appended last.

    Zero-Major works block by block.  Writing s = 1^a1 0 1^a2 0 ... and
    t = 1^b1 0 1^b2 0 ..., block k makes min(ak, bk) matches of 1, then
    |ak - bk| mismatches on the longer side, then a match of 0.
    """
    n = _equal_lengths(s, t)
    if n <= _SMALL:
        return _trace_encode_small(s, t)
    return _trace_encode_blocks(s, t)


def _trace_encode_blocks(s: str, t: str) -> TraceEncoding:
    n = len(s)
    sb = _as_codes(s) - ord("0")
    tb = _as_codes(t) - ord("0")
    a, s_rest = _one_runs(sb)
    b, t_rest = _one_runs(tb)
    k = min(len(a), len(b))
    a_k, b_k = a[:k], b[:k]
    ones = np.minimum(a_k, b_k)
    skip = np.abs(a_k - b_k)
    y_vals = np.tile(np.array([0, 1, 0], dtype=np.uint8), k)
    y_reps = np.stack([ones, skip, np.ones(k, dtype=np.int64)], axis=1).ravel()
    z_last = np.where(skip > 0, (b_k > a_k).astype(np.uint8), 0)
    z_vals = np.stack([np.ones(k, dtype=np.uint8), z_last], axis=1).ravel()
    z_reps = np.stack([ones, np.ones(k, dtype=np.int64)], axis=1).ravel()
    y = [_to_str(np.repeat(y_vals, y_reps))]
    z = [_to_str(np.repeat(z_vals, z_reps))]
    i = j = int(k + ones.sum())
    i += int(skip[a_k > b_k].sum())
    j += int(skip[b_k > a_k].sum())

    # leftover: at least one side has no 0 left, only a run of 1s
    p = s_rest if len(a) == k else int(a[k])
    q = t_rest if len(b) == k else int(b[k])
    both = min(p, q)
    y.append("0" * both)
    z.append("1" * both)
    i += both
    j += both
    if i < n and j < n:
        # the side still holding 1s skips to its end against a 0
        if len(a) == k:
            y.append("1" * (n - i))
            i = n
        else:
            y.append("1" * (n - j))
            j = n
    if i < n:
        w, exhausted = s[i:], "t"
    elif j < n:
        w, exhausted = t[j:], "s"
    else:
        w, exhausted = "", "both"
    z.append(w)
    return TraceEncoding("".join(y), "".join(z), n, exhausted)


def _trace_encode_small(s: str, t: str) -> TraceEncoding:
    """Comparison-by-comparison version of :func:`trace_encode`."""
    n = len(s)
    i = j = 0
    y, z = [], []
    direction = None
    while i < n and j < n:
        if s[i] == t[j]:
            assert direction is None or s[i] == "0", "match after a mismatch run must be on a 0"
            y.append("0")
            z.append(s[i] if direction is None else direction)
            direction = None
            i += 1
            j += 1
        elif s[i] == "0":
            y.append("1")
            direction = "1"
            j += 1
        else:
            y.append("1")
            direction = "0"
            i += 1
    if i < n:
        w, exhausted = s[i:], "t"
    elif j < n:
        w, exhausted = t[j:], "s"
    else:
        w, exhausted = "", "both"
    return TraceEncoding("".join(y), "".join(z) + w, n, exhausted)


def trace_decode(enc: TraceEncoding) -> tuple[str, str]:
    """Invert :func:`trace_encode`.

    Works per comparison: a match advances both strings, a mismatch advances
    the side named by the z bit of the match that ends its run.  A trailing
    mismatch run has no such match; the side is the one whose length it
    completes, with ``enc.exhausted`` breaking a tie.
    """
    y, z, n = enc.y, enc.z, enc.n
    try:
        check_bits(y)
        check_bits(z)
    except ValueError as exc:
        raise TraceError(str(exc)) from None
    if len(y) + len(z) != 2 * n:
        raise TraceError(f"l(y) + l(z) = {len(y) + len(z)}, expected {2 * n}")
    if n <= _SMALL:
        return _trace_decode_small(y, z, n, enc.exhausted)
    return _trace_decode_vec(y, z, n, enc.exhausted)


def _trace_decode_vec(y: str, z: str, n: int, exhausted: str) -> tuple[str, str]:
    ys = _as_codes(y) == ord("1")
    zs = (_as_codes(z) == ord("1")).astype(np.uint8)
    match_pos = np.flatnonzero(~ys)
    if len(match_pos) > len(z):
        raise TraceError("fewer z bits than matches")
    zbit = np.zeros(len(y), dtype=np.uint8)
    zbit[match_pos] = zs[: len(match_pos)]
    after_mismatch = np.zeros(len(y), dtype=bool)
    after_mismatch[1:] = ys[:-1]
    after_mismatch &= ~ys

    # side advanced by each comparison: 0 = s, 1 = t
    nxt = np.searchsorted(match_pos, np.arange(len(y)))
    has_next = nxt < len(match_pos)
    side = np.zeros(len(y), dtype=np.uint8)
    side[has_next] = zbit[match_pos[nxt[has_next]]]
    trailing = ys & ~has_next
    pending = int(trailing.sum())
    if pending:
        adv_s = int((~ys).sum() + (ys & has_next & (side == 0)).sum())
        adv_t = int((~ys).sum() + (ys & has_next & (side == 1)).sum())
        side[trailing] = _trailing_side(adv_s, adv_t, pending, n, exhausted)

    value = np.where(ys, 1, np.where(after_mismatch, 0, zbit)).astype(np.uint8)
    step_s = ~ys | (side == 0)
    step_t = ~ys | (side == 1)
    if len(y):
        if np.cumsum(step_s)[:-1].max(initial=0) >= n or np.cumsum(step_t)[:-1].max(initial=0) >= n:
            raise TraceError("comparisons continue after a string is exhausted")
    s_bits = value[step_s]
    t_bits = value[step_t]
    if len(s_bits) != n and len(t_bits) != n:
        raise TraceError("neither string is exhausted by the comparisons")
    w = zs[len(match_pos) :]
    if pending and (len(w) == 0 or w[0] != 0):
        raise TraceError("tail after a mismatch run must start with 0")
    if len(s_bits) == n:
        t_bits = np.concatenate([t_bits, w])
    else:
        s_bits = np.concatenate([s_bits, w])
    if len(s_bits) != n or len(t_bits) != n:
        raise TraceError(f"decoded lengths {len(s_bits)}, {len(t_bits)} differ from n={n}")
    return _to_str(s_bits), _to_str(t_bits)


def _trailing_side(adv_s: int, adv_t: int, pending: int, n: int, exhausted: str) -> int:
    s_done, t_done = adv_s + pending == n, adv_t + pending == n
    if s_done and t_done:
        if exhausted not in ("s", "t"):
            raise TraceError("trailing mismatches fit either string; exhausted side required")
        return 0 if exhausted == "s" else 1
    if s_done or t_done:
        side = 0 if s_done else 1
        if exhausted not in ("st"[side], "both"):
            raise TraceError(f"exhausted={exhausted!r} contradicts the lengths")
        return side
    raise TraceError("trailing mismatch run does not exhaust either string")


def _trace_decode_small(y: str, z: str, n: int, exhausted: str) -> tuple[str, str]:
    """Plain-Python version of :func:`trace_decode`, same checks and messages."""
    matches = y.count("0")
    if matches > len(z):
        raise TraceError("fewer z bits than matches")
    # side advanced by each comparison (0 = s, 1 = t); mismatches take the
    # z bit of the match that ends their run
    sides: list[int | None] = [None] * len(y)
    k = matches
    nxt = None
    for pos in range(len(y) - 1, -1, -1):
        if y[pos] == "0":
            k -= 1
            nxt = int(z[k])
        else:
            sides[pos] = nxt
    pending = sides.count(None) - matches
    if pending:
        unassigned = [pos for pos, side in enumerate(sides) if side is None and y[pos] == "1"]
        adv_s = matches + sum(1 for side in sides if side == 0)
        adv_t = matches + sum(1 for side in sides if side == 1)
        tail = _trailing_side(adv_s, adv_t, pending, n, exhausted)
        for pos in unassigned:
            sides[pos] = tail
    s_bits, t_bits = [], []
    k = 0
    prev_mismatch = False
    for pos, ch in enumerate(y):
        if len(s_bits) >= n or len(t_bits) >= n:
            raise TraceError("comparisons continue after a string is exhausted")
        if ch == "1":
            (s_bits if sides[pos] == 0 else t_bits).append("1")
            prev_mismatch = True
            continue
        bit = "0" if prev_mismatch else z[k]
        k += 1
        s_bits.append(bit)
        t_bits.append(bit)
        prev_mismatch = False
    if len(s_bits) != n and len(t_bits) != n:
        raise TraceError("neither string is exhausted by the comparisons")
    w = z[matches:]
    if pending and not w.startswith("0"):
        raise TraceError("tail after a mismatch run must start with 0")
    if len(s_bits) == n:
        t_bits.append(w)
    else:
        s_bits.append(w)
    s_out, t_out = "".join(s_bits), "".join(t_bits)
    if len(s_out) != n or len(t_out) != n:
        raise TraceError(f"decoded lengths {len(s_out)}, {len(t_out)} differ from n={n}")
    return s_out, t_out


def _to_str(bits: np.ndarray) -> str:
    return (bits.astype(np.uint8) + ord("0")).tobytes().decode("ascii")


def subseq_encode(s: str, u: str) -> SubseqEncoding:
    """Rewrite ``s`` against a subsequence ``u`` as unary gap lengths plus tail."""
    check_bits(s)
    check_bits(u)
    parts = []
    pos = 0
    for bit in u:
        hit = s.find(bit, pos)
        if hit < 0:
            raise ValueError(f"{u!r} is not a subsequence of {s!r}")
        parts.append("0" * (hit - pos) + "1")
        pos = hit + 1
    parts.append(s[pos:])
    return SubseqEncoding("".join(parts), len(u))


def subseq_decode(enc: SubseqEncoding | str, u: str) -> str:
    encoded = enc.encoded if isinstance(enc, SubseqEncoding) else enc
    check_bits(encoded)
    check_bits(u)
    parts = []
    pos = 0
    for bit in u:
        one = encoded.find("1", pos)
        if one < 0:
            raise ValueError(f"encoding has fewer than {len(u)} ones")
        other = "1" if bit == "0" else "0"
        parts.append(other * (one - pos) + bit)
        pos = one + 1
    parts.append(encoded[pos:])
    return "".join(parts)


def random_pair(seed: int, n: int) -> tuple[str, str]:
    """Uniform (s, t) of length n each: the first 2n bits of the stream."""
    bits = random_bits(Rng(seed), 2 * n) + ord("0")
    text = bits.tobytes().decode("ascii")
    return text[:n], text[n:]


_LENGTH = {"dp": lcs_length, "zero_major": zero_major_length}


def lcs_mc(
    n: int,
    trials: int,
    seed: int = 0,
    algorithm: str = "dp",
    exhaustive: bool = False,
) -> LcsSummary:
    """Estimate the expected ``l(u) / n`` over uniform pairs of length ``n``.

    With ``exhaustive`` every one of the ``4**n`` ordered pairs is used once
    and ``trials`` is ignored.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if algorithm not in _LENGTH:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    length = _LENGTH[algorithm]
    if exhaustive:
        if n > 8:
            raise ValueError("exhaustive mode is limited to n <= 8")
        words = ["".join(p) for p in itertools.product("01", repeat=n)]
        ratios = [length(s, t) / n for s in words for t in words]
        return LcsSummary(n, len(ratios), algorithm, summarize(ratios), True, ratios)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    ratios = []
    for trial in range(trials):
        s, t = random_pair(derive_seed(seed, trial), n)
        ratios.append(length(s, t) / n)
    return LcsSummary(n, trials, algorithm, summarize(ratios), False, ratios)
