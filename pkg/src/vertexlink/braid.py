"""Braid words and their tensor representation.

A braid on n strands is a word in generators b_1 .. b_(n-1); the letter i
stands for b_i and -i for its inverse.  The representation sends b_i to
1 (x) ... (x) R (x) ... (x) 1 with R acting on factors i, i+1, so a word
maps to a product of sparse matrices of dimension N^n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import BadLetter, DimensionMismatch
from .tensor import SqMatrix


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.strands < 1:
            raise BadLetter(f"strand count must be positive, got {self.strands}")
        for letter in self.letters:
            if letter == 0:
                raise BadLetter("letter 0 names no generator")
            if abs(letter) >= self.strands:
                raise BadLetter(
                    f"letter {letter} needs at least {abs(letter) + 1} strands, "
                    f"word has {self.strands}"
                )

    @property
    def writhe(self) -> int:
        return sum(1 if letter > 0 else -1 for letter in self.letters)

    def conjugate(self, g: int) -> "BraidWord":
        """g w g^-1 for a single generator letter g."""
        if g == 0 or abs(g) >= self.strands:
            raise BadLetter(f"conjugating letter {g} out of range")
        return BraidWord(self.strands, (g,) + self.letters + (-g,))

    def stabilize(self, sign: int) -> "BraidWord":
        """Append b_n^(+-1) on one more strand."""
        if sign not in (1, -1):
            raise BadLetter("stabilization sign must be +1 or -1")
        return BraidWord(self.strands + 1, self.letters + (sign * self.strands,))

    def free_reduce(self) -> "BraidWord":
        """Cancel adjacent letter pairs i, -i until none remain."""
        out: list[int] = []
        for letter in self.letters:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
        return BraidWord(self.strands, tuple(out))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise DimensionMismatch("concatenating words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def powers_of(self, i: int, p: int) -> "BraidWord":
        """This word followed by b_i^p (p may be negative)."""
        if i <= 0 or i >= self.strands:
            raise BadLetter(f"generator {i} out of range")
        tail = (i if p > 0 else -i,) * abs(p)
        return BraidWord(self.strands, self.letters + tail)


def parse_braid(text: str, strands: int | None = None) -> BraidWord:
    """Parse a comma- or space-separated list of signed letters.

    Without an explicit strand count the word gets the smallest braid
    group it fits in, max |letter| + 1 (so the empty word is one strand).
    """
    tokens = [tok for tok in re.split(r"[,\s]+", text.strip()) if tok]
    letters = []
    for tok in tokens:
        try:
            letters.append(int(tok))
        except ValueError:
            raise BadLetter(f"cannot read letter {tok!r}") from None
    needed = max((abs(letter) for letter in letters), default=0) + 1
    if strands is None:
        strands = needed
    return BraidWord(strands, tuple(letters))


def letter_matrix(model, n: int, letter: int) -> SqMatrix:
    """Sparse matrix of one generator on n strands."""
    N = model.N
    R = model.R if letter > 0 else model.R_inv
    i = abs(letter)
    if i >= n:
        raise BadLetter(f"letter {letter} on {n} strands")
    left = N ** (i - 1)
    right = N ** (n - i - 1)
    dim = N ** n
    out = SqMatrix(dim)
    entries = out.entries
    for (rp, cp), v in R.entries.items():
        for x in range(left):
            base_r = (x * N * N + rp) * right
            base_c = (x * N * N + cp) * right
            for y in range(right):
                entries[(base_r + y, base_c + y)] = v
    return out


def represent(word: BraidWord, model) -> SqMatrix:
    """Product of generator matrices; the identity for the empty word."""
    n = word.strands
    dim = model.N ** n
    acc = None
    cache: dict[int, SqMatrix] = {}
    for letter in word.letters:
        g = cache.get(letter)
        if g is None:
            g = letter_matrix(model, n, letter)
            cache[letter] = g
        acc = g if acc is None else acc @ g
    return SqMatrix.identity(dim) if acc is None else acc


def markov_move(word: BraidWord, move: str, g: int | None = None) -> BraidWord:
    """Apply one Markov move by name.

    ``conjugate`` needs the letter g; ``stabilize_pos`` / ``stabilize_neg``
    add a strand; ``free_reduce`` cancels adjacent inverse pairs.
    """
    if move == "conjugate":
        if g is None:
            raise BadLetter("conjugate needs a letter")
        return word.conjugate(g)
    if move == "stabilize_pos":
        return word.stabilize(1)
    if move == "stabilize_neg":
        return word.stabilize(-1)
    if move == "free_reduce":
        return word.free_reduce()
    raise BadLetter(f"unknown move {move!r}")
