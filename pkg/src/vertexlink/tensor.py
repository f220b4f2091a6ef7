"""Sparse exact matrices and index bookkeeping.

Matrices are square, stored as ``{(row, col): RingElem}`` with exact zeros
dropped.  Tensor legs follow one pinned convention: an R-matrix entry
R^a_c^b_d sits at ``[flatten(a, b), flatten(c, d)]``, i.e. rows are the
upper index pair and columns the lower pair, with
``flatten(a, b) = pos(a) * N + pos(b)`` over the ascending index set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import _kernel as K
from . import ring
from .errors import (
    DimensionMismatch,
    DomainError,
    MinPolyViolated,
    NonUnitEigenvalue,
)
from .ring import RingElem


@dataclass(frozen=True)
class IndexConvention:
    """Ascending spin labels for one tensor factor of size N.

    Labels are half-integers for even N and integers for odd N, symmetric
    around zero, e.g. (-1/2, 1/2) or (-1, 0, 1).
    """

    N: int
    labels: tuple[Fraction, ...]

    @classmethod
    def for_size(cls, N: int) -> "IndexConvention":
        labels = tuple(Fraction(2 * k - (N - 1), 2) for k in range(N))
        return cls(N, labels)

    def pos(self, a: Fraction) -> int:
        k = int(a - self.labels[0])
        if not 0 <= k < self.N or self.labels[k] != a:
            raise DomainError(f"label {a} not in index set of size {self.N}")
        return k

    def flatten(self, a: Fraction, b: Fraction) -> int:
        return self.pos(a) * self.N + self.pos(b)

    def unflatten(self, idx: int) -> tuple[Fraction, Fraction]:
        return self.labels[idx // self.N], self.labels[idx % self.N]

    def pairs(self):
        for a in self.labels:
            for b in self.labels:
                yield a, b


class SqMatrix:
    """Square sparse matrix over the exact coefficient ring."""

    __slots__ = ("dim", "entries")

    def __init__(self, dim: int, entries: dict[tuple[int, int], RingElem] | None = None):
        self.dim = dim
        clean: dict[tuple[int, int], RingElem] = {}
        if entries:
            for (r, c), v in entries.items():
                if not 0 <= r < dim or not 0 <= c < dim:
                    raise DimensionMismatch(f"entry ({r},{c}) outside dim {dim}")
                if v:
                    clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def identity(cls, dim: int) -> "SqMatrix":
        e = ring.one()
        return cls(dim, {(i, i): e for i in range(dim)})

    @classmethod
    def permutation(cls, N: int) -> "SqMatrix":
        """Flip operator P on a two-factor space: P(x (x) y) = y (x) x."""
        e = ring.one()
        return cls(N * N, {(i * N + j, j * N + i): e for i in range(N) for j in range(N)})

    def __matmul__(self, other: "SqMatrix") -> "SqMatrix":
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} @ {other.dim}")
        a = {k: (v.rat, v.rad) for k, v in self.entries.items()}
        b = {k: (v.rat, v.rad) for k, v in other.entries.items()}
        out = K.spgemm(a, b)
        res = SqMatrix(self.dim)
        res.entries = {k: RingElem(*v) for k, v in out.items()}
        return res

    def __add__(self, other: "SqMatrix") -> "SqMatrix":
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} + {other.dim}")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            cur = acc.get(k)
            acc[k] = v if cur is None else cur + v
        return SqMatrix(self.dim, acc)

    def __sub__(self, other: "SqMatrix") -> "SqMatrix":
        return self + (-other)

    def __neg__(self) -> "SqMatrix":
        res = SqMatrix(self.dim)
        res.entries = {k: -v for k, v in self.entries.items()}
        return res

    def __mul__(self, scalar) -> "SqMatrix":
        s = scalar if isinstance(scalar, RingElem) else ring.integer(scalar)
        return SqMatrix(self.dim, {k: v * s for k, v in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SqMatrix):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __hash__(self):
        return hash((self.dim, frozenset(self.entries.items())))

    def transpose(self) -> "SqMatrix":
        res = SqMatrix(self.dim)
        res.entries = {(c, r): v for (r, c), v in self.entries.items()}
        return res

    def trace(self) -> RingElem:
        acc = ring.zero()
        for (r, c), v in self.entries.items():
            if r == c:
                acc = acc + v
        return acc

    def kron(self, other: "SqMatrix") -> "SqMatrix":
        d2 = other.dim
        res = SqMatrix(self.dim * d2)
        out = res.entries
        for (r1, c1), v1 in self.entries.items():
            for (r2, c2), v2 in other.entries.items():
                out[(r1 * d2 + r2, c1 * d2 + c2)] = v1 * v2
        return res

    def is_zero(self) -> bool:
        return not self.entries

    def scalar_value(self) -> RingElem | None:
        """Return c when the matrix equals c * identity, else None."""
        diag = self.entries.get((0, 0), ring.zero())
        for i in range(self.dim):
            if self.entries.get((i, i), ring.zero()) != diag:
                return None
        if len(self.entries) > sum(1 for i in range(self.dim) if self.entries.get((i, i))):
            return None
        return diag

    def __repr__(self):
        return f"SqMatrix(dim={self.dim}, nnz={len(self.entries)})"

    # -- serialization ------------------------------------------------

    def to_json(self) -> str:
        items = sorted(self.entries.items())
        return json.dumps(
            {"dim": self.dim, "entries": [[r, c, ring.render(v)] for (r, c), v in items]},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "SqMatrix":
        obj = json.loads(text)
        entries = {(r, c): ring.parse(poly) for r, c, poly in obj["entries"]}
        return cls(obj["dim"], entries)


def trace_product(a: SqMatrix, b: SqMatrix) -> RingElem:
    """tr(a @ b) without forming the product."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"{a.dim} vs {b.dim}")
    acc = ring.zero()
    for (r, c), v in a.entries.items():
        w = b.entries.get((c, r))
        if w is not None:
            acc = acc + v * w
    return acc


def partial_close_second(R: SqMatrix, mu: SqMatrix, conv: IndexConvention) -> SqMatrix:
    """Close the second tensor factor of R through mu.

    K[a, b] = sum over c, e of R[flatten(a,c), flatten(b,e)] * mu[e, c].
    For a model matrix this is the scalar tau * k * identity (and the
    analogue with R inverse gives taubar * k).
    """
    N = conv.N
    if R.dim != N * N or mu.dim != N:
        raise DimensionMismatch("partial closure dims do not match the convention")
    out: dict[tuple[int, int], RingElem] = {}
    for (rp, cp), v in R.entries.items():
        a, c = rp // N, rp % N
        b, e = cp // N, cp % N
        w = mu.entries.get((e, c))
        if w is None:
            continue
        key = (a, b)
        cur = out.get(key)
        term = v * w
        out[key] = term if cur is None else cur + term
    return SqMatrix(N, out)


def inverse_via_minpoly(R: SqMatrix, eigenvalues: list[RingElem]) -> SqMatrix:
    """Invert R using its annihilating polynomial prod (R - lam * 1).

    Every eigenvalue must be a unit and the product must vanish; the
    inverse is then the complementary polynomial in R divided by the unit
    constant term.  The result is verified against R exactly.
    """
    dim = R.dim
    ident = SqMatrix.identity(dim)
    for lam in eigenvalues:
        if not lam.is_unit():
            raise NonUnitEigenvalue(f"eigenvalue {lam!r} is not a unit")
    prod = ident
    for lam in eigenvalues:
        prod = prod @ (R - lam * ident)
    if not prod.is_zero():
        raise MinPolyViolated("eigenvalue list does not annihilate the matrix")
    # p(x) = prod (x - lam) = sum a_i x^i; from p(R) = 0 and unit a_0:
    # R^-1 = -(1/a_0) * (R^(n-1) + a_(n-1) R^(n-2) + ... + a_1)
    coeffs = [ring.one()]
    for lam in eigenvalues:
        nxt = [ring.zero()] + coeffs
        for i in range(len(coeffs)):
            nxt[i] = nxt[i] - lam * coeffs[i]
        coeffs = nxt
    a0 = coeffs[0]
    inv_a0 = ring.invert_unit(a0)
    acc = SqMatrix(dim)
    power = ident
    for i in range(1, len(coeffs)):
        acc = acc + coeffs[i] * power
        if i + 1 < len(coeffs):
            power = power @ R
    rinv = acc * (-inv_a0)
    if (R @ rinv) != ident:
        raise MinPolyViolated("constructed inverse failed verification")
    return rinv


def _dense(M: SqMatrix) -> list[list[RingElem]]:
    z = ring.zero()
    return [[M.entries.get((r, c), z) for c in range(M.dim)] for r in range(M.dim)]


def _det_dense(rows: list[list[RingElem]]) -> RingElem:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = ring.zero()
    for j in range(n):
        v = rows[0][j]
        if not v:
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
        term = v * _det_dense(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def small_inverse(M: SqMatrix) -> SqMatrix:
    """Adjugate inverse for small matrices; entries must divide exactly."""
    rows = _dense(M)
    det = _det_dense(rows)
    if not det:
        raise DomainError("matrix is singular over the ring")
    n = M.dim
    out: dict[tuple[int, int], RingElem] = {}
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = _det_dense(minor) if minor else ring.one()
            if (i + j) % 2:
                cof = -cof
            if cof:
                out[(j, i)] = ring.exact_divide(cof, det)
    return SqMatrix(n, out)


def charge_of_pair(conv: IndexConvention, flat: int) -> Fraction:
    a, b = conv.unflatten(flat)
    return a + b


def inverse_blockwise(R: SqMatrix, conv: IndexConvention) -> SqMatrix:
    """Invert a charge-block-diagonal matrix block by block."""
    N = conv.N
    if R.dim != N * N:
        raise DimensionMismatch("blockwise inverse expects a two-factor matrix")
    groups: dict[Fraction, list[int]] = {}
    for idx in range(N * N):
        groups.setdefault(charge_of_pair(conv, idx), []).append(idx)
    for (r, c) in R.entries:
        if charge_of_pair(conv, r) != charge_of_pair(conv, c):
            raise DomainError("matrix is not charge block diagonal")
    out: dict[tuple[int, int], RingElem] = {}
    for idxs in groups.values():
        sub = SqMatrix(len(idxs))
        for a, ra in enumerate(idxs):
            for b, cb in enumerate(idxs):
                v = R.entries.get((ra, cb))
                if v is not None:
                    sub.entries[(a, b)] = v
        inv = small_inverse(sub)
        for (a, b), v in inv.entries.items():
            out[(idxs[a], idxs[b])] = v
    return SqMatrix(R.dim, out)
