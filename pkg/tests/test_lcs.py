import itertools
import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incompress.core import Rng, derive_seed
from incompress.lcs import (
    SubseqEncoding,
    _trace_decode_small,
    _trace_decode_vec,
    _trace_encode_blocks,
    _trace_encode_small,
    TraceEncoding,
    TraceError,
    is_subsequence,
    lcs_dp,
    lcs_length,
    lcs_mc,
    random_pair,
    subseq_decode,
    subseq_encode,
    trace_decode,
    trace_encode,
    zero_major,
)

GOLDEN = Path(__file__).parent / "golden" / "lcs_worked_example.json"


def _brute_lcs(s, t):
    """Longest subsequence of s that is also a subsequence of t, by enumeration."""
    best = 0
    for mask in range(1 << len(s)):
        u = "".join(s[i] for i in range(len(s)) if mask >> i & 1)
        if len(u) > best and is_subsequence(u, t):
            best = len(u)
    return best


def _replay(s, t):
    """Zero-Major run one comparison at a time, recording y, z and w."""
    n = len(s)
    i = j = 0
    y, z = [], []
    direction = None
    while i < n and j < n:
        if s[i] == t[j]:
            y.append("0")
            if direction is not None:
                # a match right after a mismatch run is always on a 0
                assert s[i] == "0"
                z.append(direction)
            else:
                z.append(s[i])
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
    return "".join(y), "".join(z) + w, exhausted


def _words(n):
    return ["".join(p) for p in itertools.product("01", repeat=n)]


def test_worked_example_golden():
    data = json.loads(GOLDEN.read_text())
    s, t = data["s"], data["t"]
    assert zero_major(s, t) == data["u"] == "0010"
    enc = trace_encode(s, t)
    assert (enc.y, enc.z) == (data["y"], data["z"]) == ("101100101", "01100")
    assert enc.w == "0"
    assert trace_decode(enc) == (s, t)


def test_worked_example_collides_without_exhausted_side():
    a = trace_encode("1001101", "0110100")
    b = trace_encode("1001100", "0110101")
    assert (a.y, a.z) == (b.y, b.z)
    assert a.exhausted != b.exhausted
    with pytest.raises(TraceError, match="exhausted side required"):
        trace_decode(TraceEncoding(a.y, a.z, 7))
    assert trace_decode(TraceEncoding(a.y, a.z, 7, "s")) == ("1001101", "0110100")


def test_lcs_dp_examples():
    u = lcs_dp("1001101", "0110100")
    assert len(u) == 5 == _brute_lcs("1001101", "0110100")
    assert is_subsequence(u, "1001101") and is_subsequence(u, "0110100")
    assert lcs_dp("0110", "0110") == "0110"
    assert lcs_dp("000", "111") == ""


def test_lcs_dp_matches_brute_force_exhaustively():
    for n in range(1, 6):
        words = _words(n)
        for s in words:
            for t in words:
                u = lcs_dp(s, t)
                assert len(u) == _brute_lcs(s, t) == lcs_length(s, t)
                assert is_subsequence(u, s) and is_subsequence(u, t)


@given(st.text("01", max_size=40), st.text("01", max_size=40))
def test_lcs_dp_unequal_lengths(s, t):
    u = lcs_dp(s, t)
    assert is_subsequence(u, s) and is_subsequence(u, t)
    assert len(u) == lcs_length(s, t) == lcs_length(t, s)


def test_zero_major_examples():
    assert zero_major("1001101", "0110100") == "0010"
    assert zero_major("10110", "10110") == "10110"
    assert zero_major("000", "111") == ""
    with pytest.raises(ValueError):
        zero_major("01", "0")


@given(st.integers(1, 60).flatmap(lambda n: st.tuples(st.text("01", min_size=n, max_size=n), st.text("01", min_size=n, max_size=n))))
def test_zero_major_is_common_and_not_longer_than_lcs(pair):
    s, t = pair
    u = zero_major(s, t)
    assert is_subsequence(u, s) and is_subsequence(u, t)
    assert len(u) <= lcs_length(s, t)


def test_trace_examples():
    enc = trace_encode("0110", "0110")
    assert (enc.y, enc.z, enc.w) == ("0000", "0110", "")
    enc = trace_encode("0", "1")
    assert (enc.y, enc.z, enc.exhausted) == ("1", "0", "t")
    assert trace_decode(TraceEncoding("1", "0", 1, "t")) == ("0", "1")
    assert trace_decode(TraceEncoding("0" * 5, "10011", 5)) == ("10011", "10011")


@pytest.mark.parametrize("n", range(1, 8))
def test_trace_exhaustive(n):
    words = _words(n)
    for s in words:
        for t in words:
            enc = trace_encode(s, t)
            assert (enc.y, enc.z, enc.exhausted) == _replay(s, t)
            assert len(enc.y) + len(enc.z) == 2 * n
            assert enc.y.count("0") == len(zero_major(s, t)) == len(enc.z) - len(enc.w)
            assert trace_decode(enc) == (s, t)


def _trace_corpus(n, count):
    for k in range(count):
        s, t = random_pair(derive_seed(n, k), n)
        enc = trace_encode(s, t)
        assert len(enc.y) + len(enc.z) == 2 * n
        assert enc.y.count("0") == len(zero_major(s, t))
        assert trace_decode(enc) == (s, t)


def test_trace_random_n1000():
    _trace_corpus(1000, 10_000)


@pytest.mark.slow
@pytest.mark.parametrize("n", range(8, 65))
def test_trace_random_small_n(n):
    # n <= 7 is covered exhaustively above
    _trace_corpus(n, 10_000)


@pytest.mark.parametrize("n", [8, 9, 33, 200, 1000])
def test_trace_matches_literal_replay(n):
    for k in range(300):
        s, t = random_pair(derive_seed(7 * n, k), n)
        enc = trace_encode(s, t)
        assert (enc.y, enc.z, enc.exhausted) == _replay(s, t)


@settings(max_examples=300)
@given(st.integers(1, 9), st.text("01", max_size=20), st.text("01", max_size=20), st.sampled_from(["s", "t", "both"]))
def test_trace_decode_fuzz(n, y, z, exhausted):
    try:
        s, t = trace_decode(TraceEncoding(y, z, n, exhausted))
    except TraceError:
        return
    enc = trace_encode(s, t)
    assert (enc.y, enc.z) == (y, z)


def test_trace_decode_rejects_bad_length():
    with pytest.raises(TraceError, match="undecodable trace"):
        trace_decode(TraceEncoding("0", "0", 3))


def test_subseq_examples():
    enc = subseq_encode("1001101", "0010")
    assert enc == SubseqEncoding("0111011", 4)
    assert subseq_decode(enc, "0010") == "1001101"
    assert subseq_decode("0111011", "0010") == "1001101"
    assert subseq_encode("0110", "").encoded == "0110"
    assert subseq_encode("00", "00").encoded == "11"
    assert subseq_decode("11", "00") == "00"


def test_subseq_errors():
    with pytest.raises(ValueError, match="not a subsequence"):
        subseq_encode("000", "1")
    with pytest.raises(ValueError, match="fewer than"):
        subseq_decode("0", "1")


def test_subseq_random_roundtrip():
    rng = Rng(derive_seed(31, 0))
    for _ in range(10_000):
        n = rng.below(64) + 1
        s = rng.bits(n)
        u = "".join(ch for ch in s if rng.below(2))
        enc = subseq_encode(s, u)
        assert len(enc.encoded) == len(s)
        assert enc.encoded.count("1") >= len(u)
        assert subseq_decode(enc, u) == s


def test_lcs_mc_exhaustive_matches_brute_force():
    words = _words(4)
    expect = sum(_brute_lcs(s, t) for s in words for t in words) / (256 * 4)
    summary = lcs_mc(4, 1, algorithm="dp", exhaustive=True)
    assert summary.trials == 256
    assert summary.ratio_stats.mean == pytest.approx(expect, abs=1e-12)


def test_lcs_mc_ratios_in_unit_interval():
    summary = lcs_mc(50, 40, seed=3, algorithm="zero_major")
    assert all(0 <= r <= 1 for r in summary.ratios)
    assert summary.ratio_stats.mean <= lcs_mc(50, 40, seed=3).ratio_stats.mean


def test_lcs_mc_dp_range():
    mean = lcs_mc(1000, 200, algorithm="dp").ratio_stats.mean
    assert 0.762 <= mean <= 0.838


def test_zero_major_golden_mean():
    # recorded from the first run with seed 0
    mean = lcs_mc(100_000, 50, algorithm="zero_major").ratio_stats.mean
    assert mean == pytest.approx(0.6656742, abs=1e-12)
    assert mean >= 0.66


def test_lcs_mc_errors():
    with pytest.raises(ValueError):
        lcs_mc(0, 1)
    with pytest.raises(ValueError):
        lcs_mc(4, 1, algorithm="greedy")
    with pytest.raises(ValueError):
        lcs_mc(9, 1, exhaustive=True)


@pytest.mark.parametrize("n", [1, 2, 5, 7, 8, 31, 64])
def test_small_and_vector_codecs_agree(n):
    for k in range(500):
        s, t = random_pair(derive_seed(100 + n, k), n)
        enc = _trace_encode_small(s, t)
        assert enc == _trace_encode_blocks(s, t)
        for side in ("s", "t", "both"):
            assert _decode_or_error(_trace_decode_small, enc.y, enc.z, n, side) == _decode_or_error(
                _trace_decode_vec, enc.y, enc.z, n, side
            )


def _decode_or_error(fn, y, z, n, exhausted):
    try:
        return fn(y, z, n, exhausted)
    except TraceError as exc:
        return str(exc)


@settings(max_examples=1000)
@given(st.integers(1, 9), st.text("01", max_size=18), st.sampled_from(["s", "t", "both"]))
def test_small_and_vector_decoders_agree_on_junk(n, bits, exhausted):
    if len(bits) > 2 * n:
        bits = bits[: 2 * n]
    bits = bits.ljust(2 * n, "0")
    for cut in range(2 * n + 1):
        y, z = bits[:cut], bits[cut:]
        assert _decode_or_error(_trace_decode_small, y, z, n, exhausted) == _decode_or_error(
            _trace_decode_vec, y, z, n, exhausted
        )
