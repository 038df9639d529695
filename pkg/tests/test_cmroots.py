import math

import pytest

from theta_borcherds.cmroots import (
    CMClass,
    PreconditionError,
    classify_point,
    cm_representatives,
    find_zeros,
    hermann_candidates,
    hermann_roots,
    reduce_representative,
    verify_point,
    verify_root,
)
from theta_borcherds.lattice import QuadForm
from theta_borcherds.qseries import evaluate_numeric
from theta_borcherds.lattice import theta_series

A2 = QuadForm.binary(1, 1, 1)


def reduced_forms(max_abs_d):
    for absD in range(3, max_abs_d + 1):
        for a in range(1, absD):
            for b in range(-a + 1, a + 1):
                if (b * b + absD) % (4 * a):
                    continue
                c = (b * b + absD) // (4 * a)
                if c < a or (c == a and b < 0):
                    continue
                yield QuadForm.binary(a, b, c)


def test_candidates_a2():
    cands = {(c.alpha, c.beta, c.gamma): (c.h, c.d) for c in hermann_candidates(A2)}
    assert cands == {(2, -1, 2): (3, -3), (2, -3, 6): (5, 13), (2, 1, 2): (5, 13), (6, -3, 2): (5, 13)}


def test_roots_a2():
    assert hermann_roots(A2) == [CMClass(3, -3, 3)]


def test_roots_binary_only():
    with pytest.raises(ValueError):
        hermann_candidates(QuadForm(2, 1, (1, 1), 1))


def test_class_validation():
    with pytest.raises(ValueError):
        CMClass(3, -3, 1)
    with pytest.raises(ValueError):
        CMClass(3, 1, 1)
    with pytest.raises(ValueError):
        CMClass(0, -3, 1)
    assert CMClass(3, -3, -3).h == 3


def test_representatives():
    reps = cm_representatives(CMClass(3, -3, 3), 5)
    assert reps[0] == (3, 3, 1)
    assert reps == [(3, 3, 1), (3, -3, 1), (21, 9, 1), (21, -9, 1), (39, 33, 7)]
    for cls in (CMClass(7, -3, 5), CMClass(19, -19, 19), CMClass(20, -16, 8)):
        for A, B, C in cm_representatives(cls, 6):
            assert B * B - 4 * A * C == cls.d
            assert A > 0 and A % cls.N == 0 and (B - cls.h) % (2 * cls.N) == 0


def test_reduce_keeps_class():
    cls = CMClass(3, -3, 3)
    for rep in cm_representatives(cls, 5):
        A, B, C = reduce_representative(rep, 3)
        assert B * B - 4 * A * C == -3 and A % 3 == 0 and (B - 3) % 6 == 0
        assert math.sqrt(3) / (2 * A) >= math.sqrt(3) / (2 * rep[0]) - 1e-15


def test_verify_a2():
    rep = verify_root(A2, CMClass(3, -3, 3), T=200, tol=1e-6)
    assert rep.passed and len(rep.points) == 3
    p = rep.points[0]
    assert p.rep == (3, 3, 1)
    assert p.modulus < 1e-6
    # simple zero: derivative bounded away from 0
    assert p.derivative_modulus > 1e-3
    assert rep.to_json()["passed"] is True


def test_direct_evaluation_at_tau0():
    tau0 = complex(-3, math.sqrt(3)) / 6
    val, tail = evaluate_numeric(theta_series(A2, 200), tau0)
    assert abs(val) + tail < 1e-6


def test_non_root():
    rep = verify_point(A2, 1j, T=200)
    assert not rep.passed
    assert rep.points[0].modulus > 0.5


def test_precondition():
    with pytest.raises(PreconditionError):
        verify_point(A2, complex(0.1, 0.01), T=20, tol=1e-6)


def test_small_sweep():
    seen = 0
    for A in reduced_forms(20):
        for cls in hermann_roots(A):
            assert A.D < cls.d < 0 or cls.d == A.D
            assert (cls.h * cls.h - cls.d) % (4 * -A.D) == 0
            assert verify_root(A, cls, T=200, tol=1e-6).passed, (A, cls)
            seen += 1
    assert seen >= 12


@pytest.mark.parametrize("abc", [(1, 1, 1), (1, 0, 1), (1, 1, 2), (2, 1, 2), (1, 1, 5)])
def test_grid_zeros_classified(abc):
    A = QuadForm.binary(*abc)
    classes = hermann_roots(A)
    zeros = find_zeros(A, T=120, im_min=0.15, step=0.025)
    for z in zeros:
        assert classify_point(z, classes) is not None, z
    if not classes:
        assert zeros == []


def test_classify_rejects():
    assert classify_point(1j, [CMClass(3, -3, 3)]) is None
