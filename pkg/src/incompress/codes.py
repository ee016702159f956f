"""Strings as numbers, the self-delimiting code ladder E0..E3, pairing, census.

Bit strings are plain ``str`` objects over ``"01"``, leftmost bit first.
Numbers and strings are identified through the length-increasing
lexicographic order eps, 0, 1, 00, 01, 10, 11, 000, ...
"""

from __future__ import annotations

from typing import Callable, Iterator

MAX_LEVEL = 3


class CodewordError(ValueError):
    """Raised when a stream does not start with a valid codeword."""

    def __init__(self, level: int, detail: str):
        super().__init__(f"invalid codeword at level {level}: {detail}")
        self.level = level


class InjectivityError(ValueError):
    def __init__(self, first: str, second: str, image: str):
        super().__init__(
            f"encoder is not injective: {first or 'eps'} and {second or 'eps'} "
            f"both map to {image or 'eps'}"
        )
        self.pair = (first, second)


def check_bits(x: str) -> str:
    if not isinstance(x, str) or x.strip("01"):
        raise ValueError(f"not a bit string: {x!r}")
    return x


def nat_to_str(n: int) -> str:
    """The n-th string of the length-increasing lexicographic order."""
    if n < 0:
        raise ValueError("natural number expected")
    # n + 1 in binary with the leading 1 dropped
    return bin(n + 1)[3:]


def str_to_nat(s: str) -> int:
    return int("1" + check_bits(s), 2) - 1


def encode(level: int, x: str) -> str:
    """Codeword of ``x`` at ``level``; level 0 is unary ``1^n 0`` of n = str_to_nat(x)."""
    _check_level(level)
    check_bits(x)
    if level == 0:
        return "1" * str_to_nat(x) + "0"
    return encode(level - 1, nat_to_str(len(x))) + x


def decode(level: int, stream: str) -> tuple[str, str]:
    """Split one codeword off the front of ``stream``; returns ``(x, remainder)``.

    Reads exactly the codeword's bits, never looking past its end.
    """
    _check_level(level)
    check_bits(stream)
    x, end = _decode_at(level, stream, 0)
    return x, stream[end:]


def _decode_at(level: int, stream: str, pos: int) -> tuple[str, int]:
    if level == 0:
        stop = stream.find("0", pos)
        if stop < 0:
            raise CodewordError(0, "unary run has no terminating 0")
        return nat_to_str(stop - pos), stop + 1
    header, pos = _decode_at(level - 1, stream, pos)
    length = str_to_nat(header)
    if pos + length > len(stream):
        raise CodewordError(level, f"payload needs {length} bits, {len(stream) - pos} left")
    return stream[pos : pos + length], pos + length


def iter_decode(level: int, stream: str) -> Iterator[str]:
    """Decode a concatenation of level codewords."""
    pos = 0
    while pos < len(stream):
        x, pos = _decode_at(level, stream, pos)
        yield x


def pair(x: str, y: str) -> str:
    return encode(2, x) + check_bits(y)


def unpair(p: str) -> tuple[str, str]:
    return decode(2, p)


def _check_level(level: int) -> None:
    if level not in range(MAX_LEVEL + 1):
        raise ValueError(f"code level must be 0..{MAX_LEVEL}, got {level}")


def all_strings(n: int) -> Iterator[str]:
    """All strings of length exactly ``n`` in lexicographic order."""
    if n == 0:
        yield ""
        return
    for v in range(1 << n):
        yield format(v, f"0{n}b")


def strings_up_to(n: int) -> Iterator[str]:
    for length in range(n + 1):
        yield from all_strings(length)


CENSUS_LIMIT = 20


def census(encoder: Callable[[str], str], n: int, c: int, limit: int = CENSUS_LIMIT) -> float:
    """Fraction of length-``n`` strings that ``encoder`` shortens below ``n - c``.

    A string counts as compressed when its image has fewer than ``n - c`` bits,
    the reading under which at most ``2**(n-c) - 1`` strings qualify, so the
    result is always below ``2**-c`` for an injective encoder.  Injectivity is
    checked on the fly.
    """
    if c < 1:
        raise ValueError("c must be a positive integer")
    if n > limit:
        raise ValueError(f"n={n} exceeds the exhaustive limit {limit}")
    seen: dict[str, str] = {}
    short = 0
    for x in all_strings(n):
        image = encoder(x)
        prev = seen.setdefault(image, x)
        if prev != x:
            raise InjectivityError(prev, x, image)
        if len(image) < n - c:
            short += 1
    return short / (1 << n)


def random_injection(n: int, rng, max_len: int | None = None) -> Callable[[str], str]:
    """Injective map from length-``n`` strings into strings of length <= ``max_len``.

    Built from a seeded Fisher-Yates shuffle of all strings of length
    ``<= max_len`` (default ``n``); the i-th length-n string maps to the i-th
    shuffled string.
    """
    max_len = n if max_len is None else max_len
    if max_len > CENSUS_LIMIT:
        raise ValueError(f"max_len={max_len} exceeds the exhaustive limit {CENSUS_LIMIT}")
    total = (1 << (max_len + 1)) - 1
    if total < (1 << n):
        raise ValueError("target set is smaller than the domain")
    perm = list(range(total))
    for i in range(total - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    table = {x: nat_to_str(perm[i]) for i, x in enumerate(all_strings(n))}
    return table.__getitem__


def format_bits(x: str) -> str:
    """Text form used in CLI output; the empty string prints as ``eps``."""
    return x if x else "eps"


def parse_bits(text: str) -> str:
    return "" if text == "eps" else check_bits(text)
