#!/usr/bin/env python3
"""Timing comparison between the compiled polynomial kernel and the
pure-Python twin.

Micro benchmarks import both kernel modules side by side; the end-to-end
rows re-invoke the interpreter with VERTEXLINK_KERNEL set, because the
package freezes its kernel choice at import time.  Every row checks that
the two implementations produce identical output before reporting times.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 9
"""

import argparse
import importlib.util
import json
import os
import random
import subprocess
import sys
import timeit

from vertexlink import _poly_py as py

HAVE_CY = importlib.util.find_spec("vertexlink._poly_cy") is not None
if HAVE_CY:
    from vertexlink import _poly_cy as cy


def rand_poly(rng, terms, bound=9):
    coeffs = [rng.randint(-bound, bound) for _ in range(terms)]
    coeffs[0] = coeffs[0] or 1
    coeffs[-1] = coeffs[-1] or 1
    return (rng.randint(-terms, 0), tuple(coeffs))


def rand_relem(rng, terms, radical=True):
    rad = rand_poly(rng, terms // 2) if radical and rng.random() < 0.7 else py.PZERO
    return (rand_poly(rng, terms), rad)


def rand_sparse(rng, dim, density, terms):
    mat = {}
    for r in range(dim):
        for c in range(dim):
            if rng.random() < density:
                mat[(r, c)] = rand_relem(rng, terms)
    return mat


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def micro_rows(repeat):
    rng = random.Random(20240814)
    polys = [rand_poly(rng, 60) for _ in range(32)]
    relems = [rand_relem(rng, 40) for _ in range(32)]
    mats = [rand_sparse(rng, 16, 0.5, 12) for _ in range(4)]

    cases = [
        ("pmul, 60-term operands",
         lambda mod: [mod.pmul(a, b) for a, b in zip(polys, polys[1:])], 20),
        ("rmul, radical pairs",
         lambda mod: [mod.rmul(x, y) for x, y in zip(relems, relems[1:])], 20),
        ("spgemm, 16x16 at 50%",
         lambda mod: [mod.spgemm(a, b) for a, b in zip(mats, mats[1:])], 5),
    ]
    rows = []
    for label, make, number in cases:
        t_py = best_of(lambda: make(py), repeat, number)
        t_cy = None
        if HAVE_CY:
            assert make(cy) == make(py), f"kernel mismatch in {label}"
            t_cy = best_of(lambda: make(cy), repeat, number)
        rows.append((label, t_py, t_cy))
    return rows


_CHILD = """
import json, time
from vertexlink import kernel_name, ring
from vertexlink.braid import BraidWord
from vertexlink.invariants import regular_invariant
from vertexlink.models import build_model

N, strands, letters = {spec!r}
word = BraidWord(strands, tuple(letters))
m = build_model(N)
# regular_invariant memoizes per (word, model); a fresh interpreter makes
# this first call do the full matrix-product chain, which is what we time.
t0 = time.perf_counter()
val = regular_invariant(word, m)
dt = time.perf_counter() - t0
print(json.dumps({{"kernel": kernel_name(), "elapsed": dt,
                   "value": ring.render(val)}}))
"""


def run_child(spec, kernel):
    env = dict(os.environ, VERTEXLINK_KERNEL=kernel)
    proc = subprocess.run(
        [sys.executable, "-c", _CHILD.format(spec=spec)],
        capture_output=True, text=True, env=env, check=True)
    out = json.loads(proc.stdout)
    if out["kernel"] != kernel:
        raise RuntimeError(f"requested {kernel} kernel, got {out['kernel']}")
    return out


def end_to_end_rows(repeat):
    specs = [
        ("invariant N=3, 5 strands, 14 letters",
         (3, 5, [1, -2, 3, -4, 1, 2, -3, 4, 1, -2, 3, 4, 1, 2])),
        ("invariant N=4, 4 strands, 10 letters",
         (4, 4, [1, -2, 3, 1, -2, 3, 1, 2, 3, 3])),
    ]
    rows = []
    for label, spec in specs:
        runs_py = [run_child(spec, "py") for _ in range(repeat)]
        t_py = min(r["elapsed"] for r in runs_py)
        t_cy = None
        if HAVE_CY:
            runs_cy = [run_child(spec, "cy") for _ in range(repeat)]
            values = {r["value"] for r in runs_py + runs_cy}
            if len(values) != 1:
                raise RuntimeError(f"kernels disagree on {label}")
            t_cy = min(r["elapsed"] for r in runs_cy)
        rows.append((label, t_py, t_cy))
    return rows


def print_table(rows):
    width = max(len(label) for label, _, _ in rows)
    header = f"{'operation':<{width}}  {'py (ms)':>9}  {'cy (ms)':>9}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, t_py, t_cy in rows:
        if t_cy is None:
            print(f"{label:<{width}}  {t_py * 1e3:9.3f}  {'n/a':>9}  {'n/a':>8}")
        else:
            print(f"{label:<{width}}  {t_py * 1e3:9.3f}  {t_cy * 1e3:9.3f}"
                  f"  {t_py / t_cy:7.1f}x")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5,
                    help="timing repetitions per row; the best one counts")
    args = ap.parse_args(argv)
    if not HAVE_CY:
        print("compiled kernel not built; showing pure-Python times only",
              file=sys.stderr)
    rows = micro_rows(args.repeat) + end_to_end_rows(min(args.repeat, 3))
    print_table(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
