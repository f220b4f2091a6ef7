"""Temperley-Lieb generator, bracket decomposition and curl factors.

The rank-one projector e built from the crossing matrices satisfies the
TL relations with loop value k; for N = 2 the R-matrix is a ring
combination of 1 and e (the bracket decomposition), for N = 3 the
difference R - R^-1 collapses onto 1 - e (Dubrovnik form).  Partial
closures of R give the curl factors that the ambient normalization
cancels.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ring
from .axioms import CheckReport, nullspace
from .errors import ConventionValidationFailed, NotDecomposable, NotScalar
from .models import VertexModel
from .ring import RingElem
from .tensor import SqMatrix, partial_close_second


@dataclass(eq=False)
class TLData:
    e: SqMatrix
    f: SqMatrix  # P e P
    k: RingElem


def _tl_display_block(N: int) -> tuple[list[int], list[list[RingElem]]]:
    q = ring.q_power
    one = ring.one()
    if N == 2:
        return [1, 2], [
            [q(1, -1), one],
            [one, q(-1, -1)],
        ]
    if N == 3:
        return [2, 4, 6], [
            [q(2), q(1, -1), one],
            [q(1, -1), one, q(-1, -1)],
            [one, q(-1, -1), q(-2)],
        ]
    return [], []


def build_tl(m: VertexModel) -> TLData:
    """e[(a,b),(c,d)] = M_u[a,b] M_d[c,d], validated against its relations."""
    N = m.N
    entries: dict[tuple[int, int], RingElem] = {}
    for (a, b), vu in m.M_u.entries.items():
        for (c, d), vd in m.M_d.entries.items():
            entries[(a * N + b, c * N + d)] = vu * vd
    e = SqMatrix(N * N, entries)
    if e @ e != m.k * e:
        raise ConventionValidationFailed("e^2 != k e")
    if e.trace() != m.k:
        raise ConventionValidationFailed("tr(e) != k")
    idx, block = _tl_display_block(N)
    for bi, r in enumerate(idx):
        for bj, c in enumerate(idx):
            if e.entries.get((r, c), ring.zero()) != block[bi][bj]:
                raise ConventionValidationFailed(
                    f"TL generator disagrees with its display at ({r},{c})"
                )
    P = SqMatrix.permutation(N)
    return TLData(e=e, f=P @ e @ P, k=m.k)


def _embed_two_site(op: SqMatrix, N: int, n: int, i: int) -> SqMatrix:
    left = N ** (i - 1)
    right = N ** (n - i - 1)
    out = SqMatrix(N ** n)
    entries = out.entries
    for (rp, cp), v in op.entries.items():
        for x in range(left):
            base_r = (x * N * N + rp) * right
            base_c = (x * N * N + cp) * right
            for y in range(right):
                entries[(base_r + y, base_c + y)] = v
    return out


def tl_relations_check(m: VertexModel, max_strands: int = 4) -> CheckReport:
    """E_i^2 = k E_i, E_i E_(i+-1) E_i = E_i, far commutation, for e and f."""
    rep = CheckReport()
    tl = build_tl(m)
    N = m.N
    for name, gen in (("e", tl.e), ("f", tl.f)):
        for n in range(2, max_strands + 1):
            E = [None] + [_embed_two_site(gen, N, n, i) for i in range(1, n)]
            for i in range(1, n):
                ok = E[i] @ E[i] == m.k * E[i]
                rep.record(f"{name}:square:n{n}:i{i}", ok, "E^2 != k E")
            for i in range(1, n - 1):
                ok = E[i] @ E[i + 1] @ E[i] == E[i]
                rep.record(f"{name}:hook:n{n}:i{i}", ok, "E E' E != E")
                ok = E[i + 1] @ E[i] @ E[i + 1] == E[i + 1]
                rep.record(f"{name}:hook_rev:n{n}:i{i}", ok, "E' E E' != E'")
            for i in range(1, n - 1):
                for j in range(i + 2, n):
                    ok = E[i] @ E[j] == E[j] @ E[i]
                    rep.record(f"{name}:far:n{n}:{i},{j}", ok, "far generators do not commute")
    return rep


def span_membership(target: SqMatrix, basis: list[SqMatrix]) -> list[RingElem] | None:
    """Coefficients writing target as a ring combination of basis matrices.

    Returns None when no combination with ring coefficients exists.  Open
    experiment hook: for N > 2 the R-matrix is expected to leave the span
    of {1, e}, and this reports exactly that.
    """
    positions = set(target.entries)
    for b in basis:
        positions.update(b.entries)
    order = sorted(positions)
    rows = []
    z = ring.zero()
    for pos in order:
        row = [b.entries.get(pos, z) for b in basis]
        row.append(-target.entries.get(pos, z))
        rows.append(row)
    for vec in nullspace(rows, len(basis) + 1):
        last = vec[-1]
        if not last:
            continue
        try:
            return [ring.exact_divide(c, last) for c in vec[:-1]]
        except Exception:
            continue
    return None


def bracket_decompose_n2(m: VertexModel) -> tuple[RingElem, RingElem]:
    """Write R = A 1 + B e (and R^-1 = B 1 + A e); N = 2 only.

    Also verifies the curl normalization: the partial closures equal
    -A^3 and -B^3, which is what makes (-A^-3)^writhe restore invariance.
    """
    tl = build_tl(m)
    ident = SqMatrix.identity(m.N * m.N)
    coeffs = span_membership(m.R, [ident, tl.e])
    if m.N != 2 or coeffs is None:
        raise NotDecomposable(f"R is not in the span of 1 and e for N = {m.N}")
    A, B = coeffs
    if m.R != A * ident + B * tl.e:
        raise NotDecomposable("decomposition failed verification")
    if m.R_inv != B * ident + A * tl.e:
        raise NotDecomposable("inverse decomposition failed verification")
    c_pos, c_neg = curl_factors(m)
    if c_pos != -(A ** 3) or c_neg != -(B ** 3):
        raise NotDecomposable("curl factors disagree with -A^3, -B^3")
    return A, B


def dubrovnik_check_n3(m: VertexModel) -> bool:
    """R - R^-1 = sign (q^-2 - q^2)(1 - e) for the N = 3 model."""
    if m.N != 3:
        return False
    tl = build_tl(m)
    ident = SqMatrix.identity(9)
    z = ring.q_power(-2) - ring.q_power(2)
    lhs = m.R - m.R_inv
    rhs = (z * m.sign) * (ident - tl.e)
    return lhs == rhs


def curl_factors(m: VertexModel) -> tuple[RingElem, RingElem]:
    """Scalars of the partial closures of R and R^-1 (tau k and taubar k)."""
    out = []
    for X in (m.R, m.R_inv):
        closed = partial_close_second(X, m.mu, m.conv)
        c = closed.scalar_value()
        if c is None:
            raise NotScalar("partial closure is not a scalar matrix")
        out.append(c)
    return out[0], out[1]
