import pytest

from theta_borcherds.checks import (
    CLASS_NUMBER_ONE,
    LEVEL5_PLUS_SPACE_INPUT,
    fricke_modular_check,
    leech_identity_check,
    quaternary_counterexample_theta,
    run_all,
    level5_theta,
    sturm_bound,
)
from theta_borcherds.lattice import GramMatrix, discriminant, enumerate_vectors, level, named_lattice, rescaled_dual, theta_series


def test_table():
    assert len(CLASS_NUMBER_ONE) == 13
    assert 0 in CLASS_NUMBER_ONE and -(640320**3) in CLASS_NUMBER_ONE
    assert 1728 in CLASS_NUMBER_ONE and 720 not in CLASS_NUMBER_ONE


@pytest.mark.parametrize("name,N", [("A2", 3), ("D4", 2), ("E8", 1)])
def test_fricke_pass(name, N):
    G = named_lattice(name)
    r = fricke_modular_check(G, N)
    assert r.passed
    assert r.details["T"] > r.details["sturm_bound"] or name == "E8"
    T = r.details["T"]
    assert theta_series(G, T) == theta_series(rescaled_dual(G, N), T)


@pytest.mark.parametrize("name", ["A4", "D6", "E6"])
def test_fricke_fail(name):
    r = fricke_modular_check(named_lattice(name))
    assert not r.passed
    assert r.reason == "discriminant ≠ N^{r/2}"


def test_fricke_default_level():
    assert fricke_modular_check(named_lattice("A2")).details["N"] == 3


def test_fricke_orthogonal_sum():
    A2 = named_lattice("A2").entries
    G = GramMatrix([list(A2[0]) + [0, 0], list(A2[1]) + [0, 0], [0, 0] + list(A2[0]), [0, 0] + list(A2[1])])
    assert discriminant(G) == 9 and level(G) == 3
    assert fricke_modular_check(G).passed


def test_fricke_indefinite():
    with pytest.raises(ValueError):
        fricke_modular_check(GramMatrix([[2, 3], [3, 2]]), 1)


def test_sturm_bound():
    assert sturm_bound(8, 1) == 0
    assert sturm_bound(2, 3) == 0
    assert sturm_bound(4, 2) == 0
    assert sturm_bound(24, 5) == 6


def test_leech():
    r = leech_identity_check(20)
    assert r.matches_delta_j and r.q1 == 0 and r.q2 == 196560 and not r.in_table
    assert r.passed
    assert r.series[0] == 1
    with pytest.raises(ValueError):
        leech_identity_check(2)


def test_quaternary():
    s = quaternary_counterexample_theta(7)
    assert [s[n] for n in range(6)] == [1, 0, 18, 12, 0, 36]
    G = named_lattice("Q81")
    assert discriminant(G) == 81 and level(G) == 9
    hist = [0] * 7
    for x in enumerate_vectors(G, 6):
        hist[G.norm(x)] += 1
    assert s[6] == hist[6]


def test_level5():
    s = level5_theta(6)
    assert [s[n] for n in range(5)] == [1, 6, 18, 24, 42]
    G = named_lattice("Q25")
    assert discriminant(G) == 25 and level(G) == 5
    assert s[5] == sum(1 for x in enumerate_vectors(G, 5) if G.norm(x) == 5)
    assert min(LEVEL5_PLUS_SPACE_INPUT) == -4


def test_short_trunc_rejected():
    with pytest.raises(ValueError):
        quaternary_counterexample_theta(5)
    with pytest.raises(ValueError):
        level5_theta(4)


def test_run_all():
    results = run_all(40)
    assert all(r["ok"] for r in results)
    assert len(results) == 10
