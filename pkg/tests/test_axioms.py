"""Identity checks and the exact twist solver."""

import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vertexlink import ring
from vertexlink.axioms import (
    braid_equation_sides,
    check_axioms,
    check_markov_conditions,
    nullspace,
    solve_twist,
)
from vertexlink.errors import NoSolution
from vertexlink.models import mirror_model
from vertexlink.tensor import IndexConvention, SqMatrix


def test_axioms_pass(each_signed_model):
    rep = check_axioms(each_signed_model)
    assert rep.passed
    assert set(rep.results) == {"m", "r", "braid", "twist1", "twist2"}
    assert not rep.witnesses


def test_axioms_pass_for_mirrors(each_model):
    assert check_axioms(mirror_model(each_model)).passed


def test_mutated_r_fails_with_witness(m2):
    bad_entries = dict(m2.R.entries)
    bad_entries[(1, 1)] = bad_entries[(1, 1)] + ring.one()
    bad = dataclasses.replace(m2, R=SqMatrix(4, bad_entries))
    rep = check_axioms(bad)
    assert not rep.passed
    assert not rep.results["braid"]
    assert "at (" in rep.witnesses["braid"]  # names a concrete index tuple


def test_braid_equation_sides_structural(m3):
    lhs, rhs = braid_equation_sides(m3.R, 3)
    assert lhs == rhs
    assert lhs  # nonempty contraction
    twisted = SqMatrix(9, {k: v for k, v in m3.R.entries.items()})
    twisted.entries[(4, 4)] = ring.s_power(7)
    lhs2, rhs2 = braid_equation_sides(twisted, 3)
    assert lhs2 != rhs2


def test_markov_conditions_pass(each_signed_model):
    rep = check_markov_conditions(each_signed_model)
    assert rep.passed
    assert set(rep.results) == {"c1", "c1_inv", "c2", "c2_inv"}


def test_markov_fails_on_mutated_mu(m2):
    bad_mu = SqMatrix(2, {(0, 0): -ring.q_power(1), (1, 1): ring.q_power(3)})
    bad = dataclasses.replace(m2, mu=bad_mu)
    rep = check_markov_conditions(bad)
    assert not rep.passed


# --------------------------------------------------------------- nullspace


def random_rows(rng, nrows, ncols):
    rows = []
    for _ in range(nrows):
        rows.append([
            ring.s_power(rng.randint(-2, 2), rng.randint(-2, 2))
            if rng.random() < 0.6 else ring.zero()
            for _ in range(ncols)
        ])
    return rows


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 5), st.integers(2, 5))
@settings(max_examples=40)
def test_nullspace_vectors_annihilate(seed, nrows, ncols):
    rng = random.Random(seed)
    rows = random_rows(rng, nrows, ncols)
    basis = nullspace(rows, ncols)
    for vec in basis:
        assert len(vec) == ncols
        assert any(not e.is_zero() for e in vec)
        for row in rows:
            acc = ring.zero()
            for a, b in zip(row, vec):
                acc = acc + a * b
            assert acc.is_zero()


def test_nullspace_coranks():
    one = ring.one()
    z = ring.zero()
    # full rank: no nullspace
    assert nullspace([[one, z], [z, one]], 2) == []
    # repeated row: corank 1
    row = [one, ring.s_power(2)]
    assert len(nullspace([row, row, row], 2)) == 1
    # zero system: corank = ncols
    assert len(nullspace([[z, z, z]], 3)) == 3
    # scaled copies of one row across three columns: corank 2
    r = [one, ring.s_power(1), ring.s_power(-1)]
    scaled = [[ring.s_power(3) * e for e in r], r]
    assert len(nullspace(scaled, 3)) == 2


def test_nullspace_primitive_vectors(m2):
    # solver output is normalized: no common s-power or integer factor
    sol = solve_twist(m2.R * ring.invert_unit(m2.Z), z=m2.Z)
    vec = [v for _, v in sorted(sol.md_basis[0].entries.items())]
    exps = []
    ints = []
    for e in vec:
        off, coeffs = e.rat
        exps.append(off)
        ints.extend(abs(c) for c in coeffs if c)
    assert min(exps) == 0
    g = 0
    for c in ints:
        g = __import__("math").gcd(g, c)
    assert g == 1


# ------------------------------------------------------------------ solver


def test_solver_recovers_m(each_model):
    m = each_model
    sol = solve_twist(m.R * ring.invert_unit(m.Z), z=m.Z)
    assert sol.uniqueness == 1
    assert not sol.non_generic
    assert sol.twin_consistent
    md = sol.md_basis[0]
    ratios = {ring.exact_divide(v, md.entries[pos]) for pos, v in m.M_d.entries.items()}
    assert len(ratios) == 1
    assert next(iter(ratios)).is_unit()
    mu = sol.mu_basis[0]
    ratios_u = {ring.exact_divide(v, mu.entries[pos]) for pos, v in m.M_u.entries.items()}
    assert len(ratios_u) == 1


def test_solver_discovery(each_model):
    m = each_model
    sol = solve_twist(m.R * ring.invert_unit(m.Z))
    assert sol.fitted_exponent == -((m.N - 1) ** 2)
    assert m.Z in sol.z_candidates
    assert len(sol.z_candidates) == 2  # both square roots confirm symbolically
    assert sol.uniqueness == 1


def test_solver_no_solution():
    conv = IndexConvention.for_size(2)
    bad = SqMatrix(4, {(0, 0): ring.s_power(1), (1, 1): ring.s_power(2),
                       (2, 2): ring.s_power(5), (3, 3): ring.one()})
    with pytest.raises(NoSolution):
        solve_twist(bad, z=ring.one(), conv=conv)


def test_solver_degenerate_crossing():
    # the flip itself: every M solves the twist system
    conv = IndexConvention.for_size(2)
    sol = solve_twist(SqMatrix.permutation(2), z=ring.one(), conv=conv)
    assert sol.uniqueness == 4
    assert sol.non_generic
    assert sol.twin_consistent is None
