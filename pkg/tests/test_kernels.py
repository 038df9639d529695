import itertools
import os
import subprocess
import sys

import pytest

from theta_borcherds import _pykernels, kernels
from theta_borcherds.lattice import _require_pd, named_lattice

try:
    from theta_borcherds import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _args(name, maxnorm):
    G = named_lattice(name)
    mu, d = _require_pd(G)
    return mu, d, G.even_entries, maxnorm


def brute_tables(m, ka, kb, kc, T, box):
    A1, A2 = {}, {}
    for alpha in range(box + 1):
        for gamma in range(box + 1):
            if alpha == gamma == 0:
                continue
            for beta in itertools.product(range(-box, box + 1), repeat=m):
                P = alpha * gamma - sum(b * b for b in beta)
                p = ka * alpha + kc * gamma + sum(x * y for x, y in zip(kb, beta))
                if P < 0 or not 0 < p < T:
                    continue
                even = alpha % 2 == 0 and gamma % 2 == 0
                A1[p, P] = A1.get((p, P), 0) + (-1 if even else 1)
                if even and all(b % 2 == 0 for b in beta):
                    A2[p, P] = A2.get((p, P), 0) + (-1 if alpha % 4 == 0 and gamma % 4 == 0 else 1)
    return ({k: v for k, v in A1.items() if v}, {k: v for k, v in A2.items() if v})


def as_dict(table):
    return {(p, P): v for p, row in enumerate(table) for P, v in enumerate(row) if v}


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"


@pytest.mark.parametrize("m,ka,kb,kc", [(1, 1, (1,), 1), (1, 2, (1,), 3), (1, 1, (0,), 1), (2, 1, (1, 1), 1)])
def test_exponent_tables_brute_force(m, ka, kb, kc):
    T = 7
    absD = 4 * ka * kc - sum(x * x for x in kb)
    pmax = (T - 1) ** 2 // absD
    A1, A2 = _pykernels.exponent_tables(m, ka, list(kb), kc, absD, T, pmax)
    B1, B2 = brute_tables(m, ka, kb, kc, T, 4 * (T - 1))
    assert as_dict(A1) == B1
    assert as_dict(A2) == B2


@needs_c
@pytest.mark.parametrize("name,maxnorm", [("A2", 30), ("D4", 12), ("E6", 4), ("Q81", 10)])
def test_histogram_agree(name, maxnorm):
    args = _args(name, maxnorm)
    assert list(_ckernels.norm_histogram(*args)) == _pykernels.norm_histogram(*args)


@needs_c
def test_short_vectors_agree():
    args = _args("D4", 3)
    assert sorted(map(tuple, _ckernels.short_vectors(*args))) == sorted(_pykernels.short_vectors(*args))


@needs_c
@pytest.mark.parametrize("m,ka,kb,kc", [(1, 1, (1,), 1), (1, 2, (1,), 3), (2, 1, (1, 1), 1), (3, 1, (1, 1, 1), 1)])
def test_exponent_tables_agree(m, ka, kb, kc):
    T = 15
    absD = 4 * ka * kc - sum(x * x for x in kb)
    pmax = (T - 1) ** 2 // absD
    c = _ckernels.exponent_tables(m, ka, list(kb), kc, absD, T, pmax)
    p = _pykernels.exponent_tables(m, ka, list(kb), kc, absD, T, pmax)
    assert [list(map(list, t)) for t in c] == [list(map(list, t)) for t in p]


def test_pure_env_forces_fallback():
    env = dict(os.environ, THETA_BORCHERDS_PURE="1")
    code = "from theta_borcherds import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
