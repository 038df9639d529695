"""Classical q-expansions: theta, eta quotients, Eisenstein series, Delta, j."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

from .qseries import QSeries, invert, pow_binomial_product

__all__ = [
    "EtaQuotientSpec",
    "jacobi_theta",
    "inverse_theta",
    "eta_quotient",
    "eisenstein",
    "delta",
    "j_invariant",
    "theta_characteristic",
    "named_series",
]


@dataclass(frozen=True)
class EtaQuotientSpec:
    """``prod eta(scale*tau)^exponent`` over ``factors``."""

    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("an eta quotient needs at least one factor")
        for scale, _ in self.factors:
            if scale <= 0:
                raise ValueError("eta scales must be positive")

    @classmethod
    def parse(cls, text: str) -> "EtaQuotientSpec":
        """Parse ``"2,1;4,-2"`` as eta(2 tau)/eta(4 tau)^2."""
        factors = []
        for part in text.split(";"):
            s, e = part.split(",")
            factors.append((int(s), int(e)))
        return cls(tuple(factors))

    @property
    def leading_exponent(self) -> Fraction:
        return Fraction(sum(s * e for s, e in self.factors), 24)


def jacobi_theta(T: int) -> QSeries:
    """``sum_{n in Z} q^{n^2}`` for exponents below ``T``."""
    if T < 1:
        raise ValueError("T must be at least 1")
    terms = {0: 1}
    n = 1
    while n * n < T:
        terms[n * n] = 2
        n += 1
    return QSeries(terms, T)


@lru_cache(maxsize=32)
def _theta_neg_power_list(m: int, T: int) -> tuple:
    # n F_n = -sum_k theta_k (n + (m-1) k) F_{n-k}  for F = theta^(-m)
    sq = [k * k for k in range(1, math.isqrt(max(T - 1, 0)) + 1)]
    F = [0] * T
    F[0] = 1
    for n in range(1, T):
        acc = 0
        for k in sq:
            if k > n:
                break
            acc += 2 * (n + (m - 1) * k) * F[n - k]
        q, r = divmod(-acc, n)
        assert r == 0
        F[n] = q
    return tuple(F)


def inverse_theta(T: int, m: int = 1) -> QSeries:
    """``theta^(-m)``; uses the sparse differential recurrence."""
    if T < 1:
        raise ValueError("T must be at least 1")
    return QSeries.from_list(_theta_neg_power_list(m, T))


def eta_quotient(spec: EtaQuotientSpec, T) -> QSeries:
    """Expansion of the eta quotient, exact for exponents below ``T``."""
    lead = spec.leading_exponent
    # integer-exponent product part, needed below T - lead
    n_trunc = max(math.ceil(Fraction(T) - lead), 1)
    exps = {}
    for scale, e in spec.factors:
        for n in range(scale, n_trunc, scale):
            exps[n] = exps.get(n, 0) + e
    prod = pow_binomial_product(exps, -1, n_trunc)
    return prod.rescale(24).shift(lead).reduce_grid()


def _sigma_list(k: int, T: int) -> list:
    s = [0] * T
    for d in range(1, T):
        dk = d**k
        for n in range(d, T, d):
            s[n] += dk
    return s


_EISENSTEIN_FACTOR = {2: -24, 4: 240, 6: -504}


def eisenstein(k: int, T: int) -> QSeries:
    """Normalized ``E_k`` for ``k`` in 2, 4, 6."""
    if k not in _EISENSTEIN_FACTOR:
        raise ValueError("only k = 2, 4, 6 are supported")
    if T < 1:
        raise ValueError("T must be at least 1")
    s = _sigma_list(k - 1, T)
    c = [1] + [_EISENSTEIN_FACTOR[k] * s[n] for n in range(1, T)]
    return QSeries.from_list(c[:T])


def delta(T: int) -> QSeries:
    """``q prod (1 - q^n)^24``."""
    if T < 2:
        raise ValueError("T must be at least 2")
    prod = pow_binomial_product({n: 24 for n in range(1, T)}, -1, T - 1)
    return prod.shift(1)


def j_invariant(T: int) -> QSeries:
    """``E_4^3 / Delta``, exact for exponents below ``T``."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    # Delta^-1 has valuation -1, so E4 and Delta need one extra order
    e4 = eisenstein(4, T + 1)
    d = delta(T + 2)
    return (e4 * e4 * e4 * invert(d)).truncate(T)


def theta_characteristic(form, mu: Sequence[int], nu: Sequence[int], T) -> QSeries:
    """``sum (-1)^(nu1 m + nu2 n) q^{A(m + mu1/2, n + mu2/2)}`` on the grid 1/4.

    ``form`` is a binary quadratic form ``[a, b, c]`` (a QuadForm with m = 1 or
    a plain triple).  Only even characteristics are accepted.
    """
    a, b, c = _binary_coeffs(form)
    mu, nu = tuple(mu), tuple(nu)
    if any(x not in (0, 1) for x in mu + nu) or len(mu) != 2 or len(nu) != 2:
        raise ValueError("characteristics must lie in {0,1}^2")
    if (mu[0] * nu[0] + mu[1] * nu[1]) % 2:
        raise ValueError("odd characteristic")
    D = b * b - 4 * a * c
    if a <= 0 or D >= 0:
        raise ValueError("form is not positive definite")
    # 4 A(m+mu1/2, n+mu2/2) = A(x, y) with x = 2m+mu1, y = 2n+mu2
    bound = math.ceil(Fraction(T) * 4)  # keys below this on the 1/4 grid
    # 4a A(x,y) = (2ax + by)^2 + |D| y^2
    ymax = math.isqrt(4 * a * bound // -D + 1) + 1
    terms = {}
    for y in range(-ymax, ymax + 1):
        if (y - mu[1]) % 2:
            continue
        n = (y - mu[1]) // 2
        xmax = math.isqrt(4 * c * bound // -D + 1) + 1
        for x in range(-xmax, xmax + 1):
            if (x - mu[0]) % 2:
                continue
            k = a * x * x + b * x * y + c * y * y
            if k >= bound:
                continue
            m = (x - mu[0]) // 2
            sgn = -1 if (nu[0] * m + nu[1] * n) % 2 else 1
            terms[k] = terms.get(k, 0) + sgn
    return QSeries(terms, bound, 4)


def _binary_coeffs(form) -> Tuple[int, int, int]:
    if hasattr(form, "m"):
        if form.m != 1:
            raise ValueError("expected a binary quadratic form (m = 1)")
        return form.a, form.b[0], form.c
    a, b, c = form
    return int(a), int(b), int(c)


def named_series(name: str, T: int) -> QSeries:
    """Look up a series by its CLI id."""
    key = name.strip()
    if key == "theta":
        return jacobi_theta(T)
    if key == "inv_theta":
        return inverse_theta(T)
    if key.startswith("eta:"):
        return eta_quotient(EtaQuotientSpec.parse(key[4:]), T)
    if key in ("E2", "E4", "E6"):
        return eisenstein(int(key[1]), T)
    if key == "delta":
        return delta(T)
    if key == "j":
        return j_invariant(T)
    raise KeyError(f"unknown series id {name!r}")
