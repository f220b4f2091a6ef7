"""Independent Kauffman-bracket state sum for braid closures.

Deliberately shares no code with the package under test: plain
Fractions, a union-find loop counter, and brute-force enumeration of
the 2^c smoothings of the standard closure diagram of a braid word.

Conventions: smoothing weights A = 1/s and B = s per crossing, closed
loop value delta = -(s^2 + s^-2).  The bracket of the empty-word
1-strand braid (unknot diagram with no crossings) is delta itself; the
writhe-corrected Jones value is (-s^3)^writhe times the bracket.
"""

from __future__ import annotations

from fractions import Fraction


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def bracket_value(strands: int, letters: tuple[int, ...], s: Fraction) -> Fraction:
    """Kauffman bracket of the braid closure, evaluated at rational s."""
    if strands < 1:
        raise ValueError("need at least one strand")
    for L in letters:
        if L == 0 or abs(L) >= strands:
            raise ValueError(f"letter {L} out of range for {strands} strands")
    s = Fraction(s)
    if s == 0:
        raise ValueError("s must be nonzero")
    A = 1 / s
    B = s
    delta = -(s * s + 1 / (s * s))

    c = len(letters)
    # node ids: strand entry points 0..strands-1, then two fresh ids per crossing
    total_nodes = strands + 2 * c
    out = Fraction(0)
    for state in range(1 << c):
        uf = _UnionFind(total_nodes)
        current = list(range(strands))
        weight = Fraction(1)
        nxt = strands
        for idx, L in enumerate(letters):
            i = abs(L) - 1
            a, b = current[i], current[i + 1]
            u, v = nxt, nxt + 1
            nxt += 2
            pick_a = (state >> idx) & 1 == 0
            # positive crossing: A keeps the strands parallel, B caps them;
            # negative crossing swaps the two roles
            parallel = pick_a if L > 0 else not pick_a
            weight *= A if pick_a else B
            if parallel:
                uf.union(a, u)
                uf.union(b, v)
            else:
                uf.union(a, b)
                uf.union(u, v)
            current[i], current[i + 1] = u, v
        for p in range(strands):
            uf.union(current[p], p)
        loops = len({uf.find(x) for x in range(total_nodes)})
        out += weight * delta ** loops
    return out


def jones_via_bracket(strands: int, letters: tuple[int, ...], s: Fraction) -> Fraction:
    """Writhe-normalized bracket: (-s^3)^e <L> at rational s."""
    e = sum(1 if L > 0 else -1 for L in letters)
    return (-(s ** 3)) ** e * bracket_value(strands, letters, s)
