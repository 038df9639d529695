"""Randomized properties; each runs at least 100 examples."""

from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from theta_borcherds.borcherds import KPrimeVector, exponent_sequence, fm_coefficient
from theta_borcherds.lattice import QuadForm
from theta_borcherds.qseries import QSeries, invert, pow_binomial_product

PROFILE = settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small_int = st.integers(-20, 20)


@st.composite
def series(draw, trunc=10, denom=1):
    start = draw(st.integers(-2, 2))
    coeffs = draw(st.lists(small_int, min_size=0, max_size=trunc - start))
    return QSeries({start + i: c for i, c in enumerate(coeffs)}, trunc, denom)


@st.composite
def unit_series(draw, trunc=12):
    lead = draw(st.sampled_from([1, -1, 2, 3]))
    rest = draw(st.lists(small_int, min_size=trunc - 1, max_size=trunc - 1))
    return QSeries({0: lead, **{i + 1: c for i, c in enumerate(rest)}}, trunc)


@PROFILE
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    # the product of series with negative valuation loses precision; compare at a common trunc
    lhs, rhs = (a * b) * c, a * (b * c)
    assert lhs.trunc == rhs.trunc and lhs == rhs
    d1, d2 = a * (b + c), a * b + a * c
    assert d1.truncate(min(d1.trunc, d2.trunc)) == d2.truncate(min(d1.trunc, d2.trunc))
    assert a - a == QSeries.zero(a.trunc)


@PROFILE
@given(unit_series())
def test_inverse_round_trip(a):
    inv = invert(a)
    assert (a * inv) == QSeries.one(a.trunc)
    assert invert(inv) == a


@PROFILE
@given(unit_series(trunc=8), st.integers(0, 3))
def test_shifted_inverse(u, v):
    assume(u[0] in (1, -1))
    a = u.shift(v)
    inv = invert(a)
    assert inv.valuation == -v
    prod = a * inv
    assert prod[0] == 1 and all(prod[k] == 0 for k in range(1, prod.trunc))


@PROFILE
@given(
    st.dictionaries(st.integers(1, 9), st.integers(-4, 4), max_size=5),
    st.sampled_from([1, -1]),
)
def test_binomial_product_vs_naive(exps, sign):
    T = 10
    naive = QSeries.one(T)
    for n, e in exps.items():
        factor = QSeries({0: 1, n: sign}, T)
        if e < 0:
            factor = invert(factor)
        for _ in range(abs(e)):
            naive = naive * factor
    assert pow_binomial_product(exps, sign, T) == naive


@st.composite
def forms(draw):
    m = draw(st.sampled_from([1, 1, 2]))
    a = draw(st.integers(1, 4))
    c = draw(st.integers(1, 4))
    b = tuple(draw(st.integers(-3, 3)) for _ in range(m))
    assume(sum(x * x for x in b) < 4 * a * c)
    return QuadForm(m, a, b, c)


@PROFILE
@given(forms())
def test_beta_sign_invariance(A):
    assert exponent_sequence(A, 10) == exponent_sequence(A.negate_b(), 10)


@PROFILE
@given(
    st.sampled_from([1, 2, 3]),
    st.integers(0, 11),
    st.integers(0, 11),
    st.lists(st.integers(-5, 5), min_size=3, max_size=3),
    st.integers(1, 8),
)
def test_principal_part_support(m, alpha, gamma, beta, k):
    lam = KPrimeVector(alpha, tuple(beta[:m]), gamma)
    n = lam.norm - k
    assume(n < 0)
    v = fm_coefficient(m, lam, n)
    if n < Fraction(-m, 4) or not lam.in_mu_class:
        assert v == 0
    elif n == Fraction(-m, 4):
        assert v == 1
