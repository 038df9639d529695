import cmath
import math
from fractions import Fraction

import pytest

from theta_borcherds.modforms import delta, eisenstein, eta_quotient, EtaQuotientSpec, j_invariant, jacobi_theta
from theta_borcherds.qseries import (
    QSeries,
    add,
    evaluate_numeric,
    extract_subseries,
    invert,
    mul,
    pow_binomial_product,
    power,
)


def S(coeffs, **kw):
    return QSeries.from_list(coeffs, **kw)


def sigma1(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def test_add_cancellation():
    assert add(S([1, 1, 0, 0]), S([1, -1, 0, 0])) == S([2, 0, 0, 0])


def test_add_zero_identity():
    th = jacobi_theta(20)
    assert th + QSeries.zero(20) == th


def test_add_e2_combination():
    T = 30
    e2 = eisenstein(2, T)
    e2_2 = QSeries({2 * k: v for k, v in e2.items()}, T)
    s = e2_2.scale(2) - e2
    # 2E2(2t) - E2(t) = 1 + 24 sum_{n} sigma1_odd(n) q^n
    want = [1] + [24 * sum(d for d in range(1, n + 1) if n % d == 0 and d % 2) for n in range(1, T)]
    assert s.coefficients() == want
    assert s.coefficients()[:4] == [1, 24, 24, 96]


def test_trunc_is_min_after_rescale():
    a = QSeries({0: 1}, 10, 1)
    b = QSeries({1: 1}, 12, 4)
    s = a + b
    assert s.denom == 4 and s.trunc == 12


def test_mul_difference_of_squares():
    assert mul(S([1, 1, 0, 0]), S([1, -1, 0, 0])) == S([1, 0, -1, 0])


def test_theta_times_inverse():
    th = jacobi_theta(50)
    assert th * invert(th) == QSeries.one(50)
    assert (th * invert(th)).trunc == 50


def test_delta_times_j():
    prod = delta(10) * j_invariant(10)
    assert prod.valuation == 0
    assert prod[0] == 1 and prod[1] == 720


def test_invert_theta_values():
    f = invert(jacobi_theta(8))
    assert f.coefficients() == [1, -2, 4, -8, 14, -24, 40, -64]


def test_invert_one_and_geometric():
    assert invert(QSeries.one(10)) == QSeries.one(10)
    assert invert(S([1, -1] + [0] * 8)).coefficients() == [1] * 10


def test_invert_zero_raises():
    with pytest.raises(ValueError):
        invert(QSeries.zero(5))


def test_invert_rational_leading():
    a = S([2, 1, 0, 0, 0])
    b = invert(a)
    assert b[0] == Fraction(1, 2)
    assert a * b == QSeries.one(5)


def test_invert_shifts_grid():
    h = eta_quotient(EtaQuotientSpec(((2, 1), (4, -2))), 10)
    inv = invert(h)
    assert inv.valuation == -h.valuation
    assert inv.denom == h.denom


def test_pow_square_of_inverse_theta():
    f = invert(jacobi_theta(20))
    sq = power(f, 2)
    c = f.coefficients()
    oracle = [sum(c[i] * c[n - i] for i in range(n + 1)) for n in range(20)]
    assert sq.coefficients() == oracle
    assert oracle[:4] == [1, -4, 12, -32]


def test_pow_zero():
    assert power(jacobi_theta(10), 0) == QSeries.one(10)


def test_pow_cube_of_h():
    h = eta_quotient(EtaQuotientSpec(((2, 1), (4, -2))), 12)
    h3 = power(h, 3)
    assert h3.valuation * Fraction(1, h3.denom) == Fraction(-3, 4)
    assert h3 == h * h * h
    assert h3.coefficient(Fraction(-3, 4)) == 1
    assert h3.coefficient(Fraction(-3, 4) + 2) == -3


def test_pow_negative_via_invert():
    th = jacobi_theta(15)
    assert power(th, -2) == invert(th * th)


def test_delta_by_binomial_product():
    d = pow_binomial_product({n: 24 for n in range(1, 10)}, -1, 9).shift(1)
    assert d.coefficients(5, 1) == [1, -24, 252, -1472, 4830]


def test_binomial_product_trivial():
    assert pow_binomial_product({n: 0 for n in range(1, 10)}, -1, 10) == QSeries.one(10)


def test_binomial_product_matches_naive():
    exps = {1: 3, 2: -2, 5: 4}
    T = 16
    naive = QSeries.one(T)
    for n, e in exps.items():
        factor = QSeries({0: 1, n: -1}, T)
        naive = naive * power(factor, e)
    assert pow_binomial_product(exps, -1, T) == naive


def test_binomial_product_plus_sign():
    T = 12
    naive = power(QSeries({0: 1, 3: 1}, T), 5)
    assert pow_binomial_product({3: 5}, 1, T) == naive


def test_extract_subseries_of_g():
    f = invert(jacobi_theta(12))
    g = QSeries(dict(f.items()), 12 * 4, 4)  # f(tau/4) on the quarter grid
    sub = extract_subseries(g, 0)
    assert sub.coefficient(0) == 1 and sub.coefficient(1) == 14
    assert sub.coefficient(Fraction(1, 4)) == 0


def test_extract_subseries_empty():
    assert extract_subseries(jacobi_theta(20).rescale(2), Fraction(1, 2)).is_zero()


def test_extract_subseries_of_square():
    f = invert(jacobi_theta(12))
    g = QSeries(dict(f.items()), 48, 4)
    g2 = g * g
    sub = extract_subseries(g2, Fraction(1, 4))
    assert all(k % 4 == 1 for k, _ in sub.items())
    assert all(sub[k] == g2[k] for k in range(1, 48, 4))


def test_extract_off_grid_raises():
    with pytest.raises(ValueError):
        extract_subseries(jacobi_theta(5), Fraction(1, 3))


def test_evaluate_one():
    v, tail = evaluate_numeric(QSeries.one(5), 0.3 + 1.1j)
    assert v == 1 and tail == 0


def test_evaluate_delta_at_i():
    d = delta(30)
    v, tail = evaluate_numeric(d, 1j)
    q = math.exp(-2 * math.pi)
    oracle = q
    for n in range(1, 200):
        oracle *= (1 - q**n) ** 24
    assert abs(v - oracle) < 1e-12 * oracle + tail
    assert abs(oracle - 0.0017853698) < 1e-9


def test_evaluate_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        evaluate_numeric(QSeries.one(3), 0.5 - 0.1j)


def test_evaluate_fractional_exponent():
    h = eta_quotient(EtaQuotientSpec(((2, 1), (4, -2))), 30)
    tau = 0.1 + 0.8j
    v, tail = evaluate_numeric(h, tau)
    q = cmath.exp(2j * math.pi * tau)
    oracle = q ** (-0.25)
    for n in range(1, 200):
        oracle *= (1 - q ** (2 * n)) / (1 - q ** (4 * n)) ** 2
    assert abs(v - oracle) < 1e-10 + tail


def test_json_round_trip():
    s = QSeries({-3: Fraction(1, 3), 0: 2, 5: -7}, 9, 4)
    d = s.to_json()
    assert d == {"denom": 4, "trunc": 9, "terms": [[-3, "1/3"], [0, "2"], [5, "-7"]]}
    back = QSeries.from_json(d)
    assert back == s and back.trunc == s.trunc


def test_format():
    assert str(jacobi_theta(10)) == "1 + 2q + 2q^4 + 2q^9 + O(q^10)"
    h = eta_quotient(EtaQuotientSpec(((2, 1), (4, -2))), 3)
    assert str(h).startswith("q^(-1/4) - q^(7/4)")
