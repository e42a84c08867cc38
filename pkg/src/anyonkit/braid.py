"""Braid words: parsing, printing, free reduction and named words.

Grammar (whitespace separates items)::

    word  := item*
    item  := gen | gen "^-1" | "S" int | macro
    gen   := "s" int
    macro := "Sigma" int | "Theta"

``s3`` is the generator sigma_3, ``s3^-1`` and ``S3`` its inverse. ``Sigma p``
expands to ``s1 s2 ... s(p+1) ... s2 s1``, the exchange of the first two
strands around ``p`` others, and ``Theta`` to ``s1 s2 ... s(N-1)``.

A word ``w = l_1 l_2 ... l_k`` is a group element written as a product, so a
representation maps it to ``rho(l_1) rho(l_2) ... rho(l_k)``: the rightmost
letter acts first on a state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "BraidWord",
    "BraidSyntaxError",
    "parse",
    "free_reduce",
    "sigma_p",
    "theta",
    "generator_via_theta",
]


class BraidSyntaxError(ValueError):
    """Malformed braid text; `offset` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class BraidWord:
    """Element of the braid group on `strands` strands as a list of letters.

    Letter ``+j`` is sigma_j and ``-j`` its inverse, ``1 <= j <= strands - 1``.
    """

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if x == 0 or abs(x) > self.strands - 1:
                raise ValueError(f"generator index {x} out of range for {self.strands} strands")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise ValueError("cannot multiply braids on different numbers of strands")
        return BraidWord(self.strands, self.letters + other.letters)

    def __pow__(self, k: int) -> "BraidWord":
        base = self if k >= 0 else self.inverse()
        return BraidWord(self.strands, base.letters * abs(k))

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    def __str__(self) -> str:
        return " ".join(f"s{x}" if x > 0 else f"s{-x}^-1" for x in self.letters)


_TOKEN = re.compile(r"Sigma(\d+)|Theta|s(\d+)(\^-1)?|S(\d+)")


def parse(text: str, N: int) -> BraidWord:
    """Parse braid text for `N` strands.

    Examples
    --------
    >>> parse("s1 s2^-1 S1", 3).letters
    (1, -2, -1)
    >>> parse("Sigma2", 4).letters
    (1, 2, 3, 2, 1)
    """
    if N < 2:
        raise ValueError("braid words need N >= 2 strands")
    letters: list[int] = []
    pos = 0
    n = len(text)

    def offset(i):
        return len(text[:i].encode("utf-8"))

    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise BraidSyntaxError(f"unexpected character {text[pos]!r}", offset(pos))
        end = m.end()
        if end < n and not text[end].isspace():
            # juxtaposed tokens must be separated; reject things like "s12x"
            nxt = _TOKEN.match(text, end)
            if nxt is None:
                raise BraidSyntaxError(f"unexpected character {text[end]!r}", offset(end))
        sigma, gen, inv, upper = m.group(1), m.group(2), m.group(3), m.group(4)
        if m.group(0) == "Theta":
            letters.extend(range(1, N))
        elif sigma is not None:
            p = int(sigma)
            if p > N - 2:
                raise BraidSyntaxError(f"Sigma{p} needs at least {p + 2} strands, got {N}",
                                       offset(pos))
            letters.extend(sigma_p(p, N).letters)
        else:
            j = int(gen if gen is not None else upper)
            if not 1 <= j <= N - 1:
                raise BraidSyntaxError(f"generator index {j} out of range 1..{N - 1}", offset(pos))
            letters.append(-j if (inv or upper is not None) else j)
        pos = end
    return BraidWord(N, tuple(letters))


def free_reduce(word: BraidWord) -> BraidWord:
    """Cancel adjacent ``s_j s_j^-1`` pairs; braid relations are not applied."""
    stack: list[int] = []
    for x in word.letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return BraidWord(word.strands, tuple(stack))


def sigma_p(p: int, N: int) -> BraidWord:
    """Exchange of strands 1 and 2 with ``p`` strands enclosed: ``s1 ... s(p+1) ... s1``."""
    if not 0 <= p <= N - 2:
        raise ValueError(f"p = {p} out of range 0..{N - 2} for {N} strands")
    up = list(range(1, p + 2))
    return BraidWord(N, tuple(up + up[-2::-1]))


def theta(N: int) -> BraidWord:
    """``s1 s2 ... s(N-1)``."""
    return BraidWord(N, tuple(range(1, N)))


def generator_via_theta(k: int, N: int) -> BraidWord:
    """The word ``Theta^(k-1) s1 Theta^(1-k)``, freely reduced; it equals ``s_k`` in the group."""
    if N < 3:
        raise ValueError("generator_via_theta needs N >= 3")
    if not 1 <= k <= N - 1:
        raise ValueError(f"k = {k} out of range 1..{N - 1}")
    th = theta(N)
    return free_reduce(th ** (k - 1) * BraidWord(N, (1,)) * th ** (1 - k))
