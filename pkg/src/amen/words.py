"""Reduced-word arithmetic for free groups.

A word is a tuple of nonzero ints: ``k`` stands for the k-th generator
(``1 -> a``, ``2 -> b``, ...) and ``-k`` for its inverse.  Every function
here returns reduced words.
"""

from __future__ import annotations

import re
from typing import Sequence

Word = tuple

IDENTITY: Word = ()

_TOKEN = re.compile(r"([a-z])(\^(-?\d+))?")


def generator_name(k: int) -> str:
    if not 1 <= k <= 26:
        raise ValueError(f"generator index out of range: {k}")
    return chr(ord("a") + k - 1)


def reduce_word(letters: Sequence[int]) -> Word:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Word) -> bool:
    return all(x != 0 for x in w) and all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def multiply(u: Word, v: Word) -> Word:
    # cancel at the seam only; both inputs are reduced
    i = 0
    while i < len(u) and i < len(v) and u[-1 - i] == -v[i]:
        i += 1
    return u[: len(u) - i] + v[i:]


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def conjugate(g: Word, y: Word) -> Word:
    """Return ``g^-1 y g``."""
    return multiply(multiply(inverse(g), y), g)


def letter_key(x: int) -> int:
    # order a, a^-1, b, b^-1, ...
    return 2 * abs(x) - (1 if x > 0 else 0)


def word_key(w: Word) -> tuple:
    """Shortlex key used for every deterministic ordering of words."""
    return (len(w), tuple(letter_key(x) for x in w))


def letters(rank: int) -> list[int]:
    return sorted((s * k for k in range(1, rank + 1) for s in (1, -1)), key=letter_key)


def ball(rank: int, radius: int) -> list[Word]:
    """All reduced words of length <= radius, in shortlex order."""
    out: list[Word] = [IDENTITY]
    layer: list[Word] = [IDENTITY]
    alphabet = letters(rank)
    for _ in range(radius):
        nxt = []
        for w in layer:
            for x in alphabet:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        out.extend(nxt)
        layer = nxt
    return out


def format_word(w: Word) -> str:
    if not w:
        return "e"
    parts = []
    for x in w:
        name = generator_name(abs(x))
        parts.append(name if x > 0 else name + "^-1")
    return "".join(parts)


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse strings like ``"ab^-1a"``, ``"a^3"`` or ``"e"``; the result is reduced."""
    s = text.replace(" ", "")
    if s in ("", "e", "1"):
        return IDENTITY
    out: list[int] = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            raise ValueError(f"cannot parse word {text!r} at position {pos}")
        k = ord(m.group(1)) - ord("a") + 1
        if rank is not None and k > rank:
            raise ValueError(f"generator {m.group(1)!r} exceeds rank {rank}")
        power = int(m.group(3)) if m.group(3) is not None else 1
        out.extend([k if power > 0 else -k] * abs(power))
        pos = m.end()
    return reduce_word(out)
