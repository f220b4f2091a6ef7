"""End-to-end verification suite with a deterministic report.

Each check corresponds to one falsifiable claim about the construction;
the table is byte-identical for a fixed seed (timings go to stderr so
they never perturb the report).  The uq-correspondence check is expected
to fail: the integer-spin half of the plain proportionality claim holds
only up to a sign gauge, and the suite reports that honestly rather than
substituting the weaker statement.
"""

from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import ring, tlbracket, uqsl2
from .axioms import check_axioms, check_markov_conditions, solve_twist
from .braid import BraidWord
from .invariants import (
    ambient_invariant,
    compute_constants,
    derived_skein_coefficients,
    invariance_suite,
    minpoly_check,
    regular_invariant,
    skein_coefficients,
    skein_residual,
)
from .models import SpectralModel, build_model, limit_check, mirror_model, spectral_checks
from .tensor import SqMatrix


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _random_word(rng: random.Random, strands: int, length: int) -> BraidWord:
    alphabet = [k for k in range(-(strands - 1), strands) if k != 0]
    return BraidWord(strands, tuple(rng.choice(alphabet) for _ in range(length)))


def _check_axioms(seed: int, mutate: bool) -> CheckResult:
    count = 0
    for N in (2, 3, 4):
        for sign in (1, -1):
            m = build_model(N, sign)
            if mutate and N == 2 and sign == 1:
                bad = dict(m.R.entries)
                bad[(0, 0)] = bad[(0, 0)] + ring.one()
                m = _with_r(m, SqMatrix(4, bad))
            rep = check_axioms(m)
            if not rep.passed:
                first = sorted(rep.witnesses)[0]
                return CheckResult("axioms", False, f"{first}: {rep.witnesses[first]}")
            count += len(rep.results)
    return CheckResult("axioms", True, f"6 models, {count} identities")


def _with_r(m, R: SqMatrix):
    import dataclasses

    return dataclasses.replace(m, R=R)


def _check_solver(seed: int, mutate: bool) -> CheckResult:
    for N in (2, 3, 4):
        m = build_model(N)
        r_hat = m.R * ring.invert_unit(m.Z)
        sol = solve_twist(r_hat, z=m.Z)
        if sol.uniqueness != 1 or not sol.twin_consistent:
            return CheckResult("twist-solver", False, f"N={N}: nullspace not 1-dimensional")
        md = sol.md_basis[0]
        ratios = set()
        for pos, v in m.M_d.entries.items():
            got = md.entries.get(pos)
            if got is None:
                return CheckResult("twist-solver", False, f"N={N}: support mismatch at {pos}")
            ratios.add(ring.exact_divide(v, got))
        if len(ratios) != 1 or not next(iter(ratios)).is_unit():
            return CheckResult("twist-solver", False, f"N={N}: basis not proportional to M_d")
        disc = solve_twist(r_hat)
        if disc.fitted_exponent != -((N - 1) ** 2):
            return CheckResult(
                "twist-solver", False, f"N={N}: discovered exponent {disc.fitted_exponent}"
            )
        if m.Z not in disc.z_candidates:
            return CheckResult("twist-solver", False, f"N={N}: Z not among candidates")
    return CheckResult("twist-solver", True, "M recovered and Z^2 = q^-(N-1)^2 for N=2,3,4")


def _check_markov(seed: int, mutate: bool) -> CheckResult:
    count = 0
    for N in (2, 3, 4):
        for sign in (1, -1):
            m = build_model(N, sign)
            for probe in (m, mirror_model(m)):
                rep = check_markov_conditions(probe)
                if not rep.passed:
                    first = sorted(rep.witnesses)[0]
                    return CheckResult("markov", False, f"{first}")
                count += len(rep.results)
    return CheckResult("markov", True, f"models and mirrors, {count} conditions")


def _check_constants(seed: int, mutate: bool) -> CheckResult:
    for N in (2, 3, 4):
        for sign in (1, -1):
            m = build_model(N, sign)
            c = compute_constants(m)
            tau_n, tau_d = c.tau
            bar_n, bar_d = c.taubar
            # closed forms: tau = +-q^(-(N-1)^2/2) / D, taubar numerator
            # exponent (N-1)(N+3)/2 in q
            if tau_n != ring.s_power(-((N - 1) ** 2), sign) or tau_d != m.D:
                return CheckResult("constants", False, f"N={N}: tau mismatch")
            if bar_n != ring.s_power((N - 1) * (N + 3), sign) or bar_d != m.D:
                return CheckResult("constants", False, f"N={N}: taubar mismatch")
            if c.curl_ratio != ring.q_power(N * N - 1):
                return CheckResult("constants", False, f"N={N}: curl ratio mismatch")
    return CheckResult("constants", True, "tau, taubar match displays for N=2,3,4")


def _check_minpoly(seed: int, mutate: bool) -> CheckResult:
    for N in (2, 3, 4):
        for sign in (1, -1):
            m = build_model(N, sign)
            if not minpoly_check(m):
                return CheckResult("minimal-polynomials", False, f"N={N} sign={sign}")
    return CheckResult("minimal-polynomials", True, "degree-N annihilators, all minimal")


def _check_skein(seed: int, mutate: bool) -> CheckResult:
    for N in (2, 3, 4):
        m = build_model(N)
        if skein_coefficients(m) != derived_skein_coefficients(m):
            return CheckResult("skein", False, f"N={N}: coefficient tables disagree")
        rng = random.Random(seed * 1000 + N)
        for t in range(20):
            n = rng.randint(2, 4)
            ctx = _random_word(rng, n, rng.randint(0, 6))
            i = rng.randint(1, n - 1)
            if not skein_residual(m, ctx, i).is_zero():
                return CheckResult("skein", False, f"N={N} trial {t}: nonzero residual")
    return CheckResult("skein", True, "60 random contexts, residual identically zero")


_BASE_LINKS = (
    (2, (1,)),
    (2, (1, 1)),
    (2, (1, 1, 1)),
    (3, (1, -2, 1, -2)),
    (3, (1, 2)),
)


def _check_invariance(seed: int, mutate: bool) -> CheckResult:
    moves = 0
    stabs = 0
    for N in (2, 3, 4):
        m = build_model(N)
        for strands, letters in _BASE_LINKS:
            rep = invariance_suite(
                BraidWord(strands, letters), m, trials=50, seed=seed * 100 + N
            )
            if not rep.ok:
                return CheckResult(
                    "invariance", False, f"N={N} base {letters}: {rep.failures[0]}"
                )
            moves += rep.moves_applied
            stabs += rep.stab_checks
    return CheckResult(
        "invariance", True, f"750 move sequences, {moves} moves, {stabs} phi checks"
    )


# jones_via_bracket outputs of the state-sum oracle (tests/oracle), frozen:
# {link: [(s, (-s^3)^e <L>)]} at s in {2, 1/2, 3/2, -2, 5/3}
_JONES_FROZEN = {
    (2, (1, 1, 1)): [
        ("2", "261052"),
        ("1/2", "-69887/262144"),
        ("3/2", "368728137/262144"),
        ("-2", "261052"),
        ("5/3", "3741245066350/387420489"),
    ],
    (3, (1, -2, 1, -2)): [
        ("2", "-1048577/1024"),
        ("1/2", "-1048577/1024"),
        ("3/2", "-3487832977/60466176"),
        ("-2", "-1048577/1024"),
        ("5/3", "-95370918425026/576650390625"),
    ],
    (2, (1, 1)): [
        ("2", "4369"),
        ("1/2", "4369/4096"),
        ("3/2", "661249/4096"),
        ("-2", "4369"),
        ("5/3", "280413316/531441"),
    ],
}


def _check_jones(seed: int, mutate: bool) -> CheckResult:
    m = build_model(2)
    for (strands, letters), rows in _JONES_FROZEN.items():
        word = BraidWord(strands, letters)
        alpha = ambient_invariant(word, m)
        sign = -1 if (strands + word.writhe) % 2 else 1
        for s_text, v_text in rows:
            s = Fraction(s_text)
            q = s * s
            want = sign * Fraction(v_text) / (q + 1 / q)
            if ring.eval_exact(alpha, s) != want:
                return CheckResult(
                    "jones-oracle", False, f"{letters} at s={s_text}: value drifted"
                )
    return CheckResult("jones-oracle", True, "3 links x 5 rational points, exact match")


def _check_radical(seed: int, mutate: bool) -> CheckResult:
    m = build_model(4)
    rng = random.Random(seed + 4)
    for t in range(20):
        n = rng.randint(2, 4)
        word = _random_word(rng, n, rng.randint(1, 8))
        reg = regular_invariant(word, m)
        amb = ambient_invariant(word, m)
        if not (reg.radical_part.is_zero() and amb.radical_part.is_zero()):
            return CheckResult("radical-cancellation", False, f"trial {t}: radical survives")
    return CheckResult("radical-cancellation", True, "20 random N=4 closures, radical-free")


def _check_tl(seed: int, mutate: bool) -> CheckResult:
    for N in (2, 3, 4):
        m = build_model(N)
        rep = tlbracket.tl_relations_check(m, max_strands=4)
        if not rep.passed:
            return CheckResult("tl-bracket", False, f"N={N}: TL relation failed")
    m2 = build_model(2)
    A, B = tlbracket.bracket_decompose_n2(m2)
    if A != ring.s_power(-1) or B != ring.s_power(1):
        return CheckResult("tl-bracket", False, "N=2 decomposition not (q^-1/2, q^1/2)")
    if not tlbracket.dubrovnik_check_n3(build_model(3)):
        return CheckResult("tl-bracket", False, "N=3 Dubrovnik identity failed")
    expected_curls = {
        2: (ring.s_power(-3, -1), ring.s_power(3, -1)),
        3: (ring.s_power(-8), ring.s_power(8)),
        4: (ring.s_power(-15, -1), ring.s_power(15, -1)),
    }
    for N, want in expected_curls.items():
        if tlbracket.curl_factors(build_model(N)) != want:
            return CheckResult("tl-bracket", False, f"N={N}: curl factors drifted")
    return CheckResult("tl-bracket", True, "relations to n=4, bracket, Dubrovnik, curls")


def _check_spectral(seed: int, mutate: bool) -> CheckResult:
    rng = random.Random(seed + 11)
    worst = 0.0
    for N in (2, 3):
        for _ in range(5):
            lam = rng.uniform(0.2, 1.5)
            u = rng.uniform(-3.0, 3.0)
            v = rng.uniform(-3.0, 3.0)
            sm = SpectralModel(N, lam)
            rep = spectral_checks(sm, u, v)
            worst = max(worst, rep.ybe, rep.unitarity, rep.crossing)
            if not rep.ok(1e-9):
                return CheckResult(
                    "spectral", False, f"N={N} lam={lam:.3f}: residual above 1e-9"
                )
        sm = SpectralModel(N, 0.8)
        lr = limit_check(sm, build_model(N), u_large=15.0, u_reference=8.0)
        if not (lr.ok(1e-6) and lr.monotone):
            return CheckResult("spectral", False, f"N={N}: limit not reached monotonically")
    return CheckResult("spectral", True, f"worst residual {worst:.1e} over 10 samples")


def _check_uq(seed: int, mutate: bool) -> CheckResult:
    plain_bad = []
    for j in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
        rep = uqsl2.correspondence_report(j)
        if not rep.ok_gauged():
            return CheckResult("uq-correspondence", False, f"j={j}: gauged checks failed")
        if not rep.ok():
            plain_bad.append((j, rep.ratio_spread, rep.gauged_spread))
    if plain_bad:
        j, spread, gauged = plain_bad[0]
        return CheckResult(
            "uq-correspondence",
            False,
            f"plain ratio spread {spread:.1e} at j={j} "
            f"(identification holds only up to a sign gauge there: {gauged:.1e})",
        )
    return CheckResult("uq-correspondence", True, "j=1/2,1,3/2 across q samples")


# report rows are ordered by check name, never by completion order
_CHECKS = tuple(sorted((
    ("axioms", _check_axioms),
    ("twist-solver", _check_solver),
    ("markov", _check_markov),
    ("constants", _check_constants),
    ("minimal-polynomials", _check_minpoly),
    ("skein", _check_skein),
    ("invariance", _check_invariance),
    ("jones-oracle", _check_jones),
    ("radical-cancellation", _check_radical),
    ("tl-bracket", _check_tl),
    ("spectral", _check_spectral),
    ("uq-correspondence", _check_uq),
)))

CHECK_NAMES = tuple(name for name, _ in _CHECKS)


def run(
    seed: int = 0,
    only: str | None = None,
    mutate: bool = False,
    out=None,
    err=None,
) -> int:
    """Run the suite; returns 0 when every executed check passes."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    if only is not None and only not in CHECK_NAMES:
        print(f"unknown check: {only}", file=err)
        return 2
    print(f"vertexlink selftest  seed={seed}", file=out)
    width = max(len(n) for n in CHECK_NAMES)
    passed = 0
    ran = 0
    for name, fn in _CHECKS:
        if only is not None and name != only:
            continue
        t0 = time.perf_counter()
        res = fn(seed, mutate)
        dt = time.perf_counter() - t0
        ran += 1
        passed += res.ok
        status = "PASS" if res.ok else "FAIL"
        print(f"{name:<{width}}  {status}  {res.detail}", file=out)
        print(f"[{dt:7.2f}s] {name}", file=err)
    print(f"{passed}/{ran} checks passed", file=out)
    return 0 if passed == ran else 1
