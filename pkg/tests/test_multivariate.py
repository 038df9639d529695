import pytest

from theta_borcherds.multivariate import (
    _plusminus_coeffs,
    compare_polynomials,
    psi_m_truncated,
    theta_constant_m_truncated,
)


def test_plusminus_coeffs():
    # (1+y)/(1-y) = 1 + 2y + 2y^2 + ...
    assert _plusminus_coeffs(1, 4) == [1, 2, 2, 2, 2]
    assert _plusminus_coeffs(-1, 3) == [1, -2, 2, -2]
    assert _plusminus_coeffs(2, 3) == [1, 4, 8, 12]


def test_constant_terms():
    assert psi_m_truncated(1, 2)[(0, 0, 0)] == 1
    assert theta_constant_m_truncated(1, 2)[(0, 0, 0)] == 1


def test_theta1_monomials():
    th = theta_constant_m_truncated(1, 3)
    # q^(1/2) s^(1/2): lambda, mu = +-1 with r exponent lambda*mu
    assert th.get((1, 0, 1), 0) == 0
    assert th[(1, 1, 1)] == 2 and th[(1, -1, 1)] == 2
    assert (2, 0, 0) not in th
    assert th[(1, 0, 0)] == 2


def test_psi1_low_terms():
    ps = psi_m_truncated(1, 3)
    assert ps[(1, 1, 1)] == 2 and ps.get((1, 0, 1), 0) == 0


def test_grading_respected():
    for m, B in ((1, 4), (2, 3)):
        for key in psi_m_truncated(m, B):
            assert key[0] + key[-1] <= 2 * B


@pytest.mark.parametrize("m,B", [(1, 4), (2, 3), (3, 2)])
def test_agreement(m, B):
    th = theta_constant_m_truncated(m, B)
    ps = psi_m_truncated(m, B)
    assert compare_polynomials(th, ps) == []


def test_compare_reports():
    assert compare_polynomials({(1,): 2}, {(1,): 3, (2,): 1}) == [((1,), 2, 3), ((2,), 0, 1)]


def test_invalid_bound():
    with pytest.raises(ValueError):
        psi_m_truncated(1, 0)
    with pytest.raises(ValueError):
        theta_constant_m_truncated(2, 0)
