"""Compare the compiled and pure-Python enumeration kernels.

Run from the repository root after building the extension::

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import sys
import time

from theta_borcherds import _pykernels
from theta_borcherds.lattice import QuadForm, _require_pd, hermitian_to_gram, named_lattice

try:
    from theta_borcherds import _ckernels
except ImportError:
    _ckernels = None


def _theta_case(G, maxnorm):
    mu, d = _require_pd(G)
    args = (mu, d, G.even_entries, maxnorm)
    return lambda k: k.norm_histogram(*args)


def _tables_case(A, T):
    absD = -A.D
    pmax = (T - 1) ** 2 // absD
    args = (A.m, A.a, list(A.b), A.c, absD, T, pmax)
    return lambda k: k.exponent_tables(*args)


CASES = [
    ("theta A2 to q^20000", _theta_case(named_lattice("A2"), 19999)),
    ("theta D4 to q^150", _theta_case(named_lattice("D4"), 149)),
    ("theta E6 to q^16", _theta_case(named_lattice("E6"), 15)),
    ("theta E8 to q^14", _theta_case(hermitian_to_gram(QuadForm(3, 1, (1, 1, 1), 1)), 13)),
    ("exponents [1,1,1] to n = 200", _tables_case(QuadForm.binary(1, 1, 1), 200)),
    ("exponents [1,(1,1),1] to n = 60", _tables_case(QuadForm(2, 1, (1, 1), 1), 60)),
    ("exponents [1,(1,1,1),1] to n = 20", _tables_case(QuadForm(3, 1, (1, 1, 1), 1), 20)),
]


def best_of(fn, kernel, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(kernel)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")
        return 1
    print(f"{'case':36s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in CASES:
        tp, rp = best_of(fn, _pykernels, 1)
        tc, rc = best_of(fn, _ckernels, args.repeat)
        if name.startswith("theta"):
            same = list(rp) == list(rc)
        else:
            same = [list(map(list, t)) for t in rp] == [list(map(list, t)) for t in rc]
        flag = "" if same else "  RESULTS DIFFER"
        print(f"{name:36s} {tp:9.3f}s {tc:9.3f}s {tp / tc:7.1f}x{flag}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
