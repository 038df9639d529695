"""Product exponents, the F_m coefficient function and Borcherds inputs.

Vectors of the dual lattice ``K'`` of ``K = U(4) + m A1(-1)`` are written as
integer tuples ``(alpha, beta_1..beta_m, gamma)`` standing for
``(alpha/4, beta/2, gamma/4)``.  Their norm is ``(alpha*gamma - |beta|^2)/4``.

Two pairings with a form ``A = [a, b, c]`` appear.  Product exponents use
``alpha*a + beta.b + gamma*c``; the Borcherds input uses
``alpha*c + beta.b + gamma*a``.  Every summand is symmetric under swapping
alpha and gamma, so the two give identical counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from . import kernels
from .lattice import GramMatrix, QuadForm
from .modforms import EtaQuotientSpec, _theta_neg_power_list, eta_quotient, jacobi_theta
from .qseries import QSeries, plusminus_product, pow_binomial_product

__all__ = [
    "KPrimeVector",
    "VectorValuedSeries",
    "inv_theta_power",
    "exponents_dA",
    "exponent_sequence",
    "product_plusminus",
    "fm_coefficient",
    "piecewise_coefficient",
    "lift_exponents_direct",
    "borcherds_input_FA",
    "lift_exponents",
    "vector_lift_exponents",
    "scalarized_lift_input",
    "borcherds_lift_weight_half",
    "lambert_exponents",
    "lambert_square",
]


@dataclass(frozen=True)
class KPrimeVector:
    alpha: int
    beta: Tuple[int, ...]
    gamma: int

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))

    @property
    def m(self) -> int:
        return len(self.beta)

    @property
    def P(self) -> int:
        """``4 Q(lambda)``, always an integer."""
        return self.alpha * self.gamma - sum(b * b for b in self.beta)

    @property
    def norm(self) -> Fraction:
        return Fraction(self.P, 4)

    @property
    def sign(self) -> int:
        return -1 if self.alpha % 2 == 0 and self.gamma % 2 == 0 else 1

    @property
    def in_mu_class(self) -> bool:
        return self.alpha % 4 == 2 and self.gamma % 4 == 2 and all(b % 2 for b in self.beta)

    @property
    def in_twice_dual(self) -> bool:
        """Whether the class lies in ``2(K'/K)``."""
        return self.alpha % 2 == 0 and self.gamma % 2 == 0 and all(b % 2 == 0 for b in self.beta)

    @property
    def half_sign(self) -> int:
        """Sign of ``lambda/2`` on ``2(K'/K)``: -1 on the zero class."""
        return -1 if self.alpha % 4 == 0 and self.gamma % 4 == 0 else 1

    def pairing(self, A: QuadForm) -> int:
        return self.alpha * A.c + self.gamma * A.a + sum(x * y for x, y in zip(self.beta, A.b))

    def class_key(self) -> Tuple:
        return (self.alpha % 4, tuple(b % 2 for b in self.beta), self.gamma % 4)


class VectorValuedSeries:
    """Components ``h mod 2|D|`` of a form with exponents in ``h^2/4|D| + Z``.

    Each component is stored on the grid ``1/(4|D|)``; the key of ``q^l`` is
    ``4|D| l``, so adding the components key-by-key gives the scalar form.
    """

    def __init__(self, modulus: int, components: Mapping[int, QSeries]):
        self.modulus = modulus
        self.components = dict(components)

    @property
    def absD(self) -> int:
        return self.modulus // 2

    def coefficient(self, h: int, ell) -> int:
        comp = self.components[h % self.modulus]
        return comp.coefficient(Fraction(ell))

    def scalarized(self) -> QSeries:
        terms: Dict[int, int] = {}
        trunc = None
        for comp in self.components.values():
            trunc = comp.trunc if trunc is None else min(trunc, comp.trunc)
            for k, v in comp.items():
                terms[k] = terms.get(k, 0) + v
        return QSeries(terms, trunc, 1)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "components": {str(h): s.to_json() for h, s in sorted(self.components.items())},
            "scalarized": self.scalarized().to_json(),
        }


# -- coefficient tables ----------------------------------------------------------


def inv_theta_power(m: int, T: int) -> QSeries:
    """``2^(m-1) / theta^m`` below ``q^T``."""
    if m < 1:
        raise ValueError("m must be positive")
    if T < 1:
        raise ValueError("T must be at least 1")
    return QSeries.from_list([2 ** (m - 1) * x for x in _theta_neg_power_list(m, T)])


def _fm_list(m: int, size: int) -> tuple:
    # theta^(-m), grown in powers of two to share the cache
    n = 16
    while n < size:
        n *= 2
    return _theta_neg_power_list(m, n)


@lru_cache(maxsize=16)
def _hm_series(m: int, T: int) -> QSeries:
    h = eta_quotient(EtaQuotientSpec(((2, m), (4, -2 * m))), T)
    return h.rescale(4) if h.denom != 4 else h


def _hm_coeff(m: int, n: Fraction) -> int:
    if n < Fraction(-m, 4):
        return 0
    T = 16
    while T <= n:
        T *= 2
    return _hm_series(m, T).coefficient(n)


def _fm_coeff(m: int, n) -> int:
    """Coefficient of ``theta^(-m)`` at ``q^n`` (zero off the integers)."""
    n = Fraction(n)
    if n < 0 or n.denominator != 1:
        return 0
    return _fm_list(m, int(n) + 1)[int(n)]


def fm_coefficient(m: int, lam: KPrimeVector, n) -> int:
    """Coefficient of ``q^n e_lambda`` in the input form ``F_m``."""
    n = Fraction(n)
    if lam.m != m:
        raise ValueError("vector rank does not match m")
    if (n - lam.norm).denominator != 1:
        raise ValueError(f"exponent {n} is not in Q(lambda) + Z")
    val = -lam.sign * 2**m * _fm_coeff(m, 4 * n)
    if lam.in_twice_dual:
        val += lam.half_sign * 2 ** (m - 1) * _fm_coeff(m, n)
    if lam.in_mu_class:
        val += _hm_coeff(m, n)
    return val


def piecewise_coefficient(alpha: int, beta: int, gamma: int, ell: int) -> int:
    """Piecewise binary (m = 1) coefficient, indexed by ``l + (alpha*gamma - beta^2)/4``."""
    x = ell + Fraction(alpha * gamma - beta * beta, 4)
    two_over_theta_quarter = 2 * _fm_coeff(1, 4 * x)
    if alpha % 2 or gamma % 2:
        return -two_over_theta_quarter
    s = -1 if ((alpha // 2 + 1) * (gamma // 2 + 1)) % 2 else 1
    val = two_over_theta_quarter + s * _fm_coeff(1, x)
    if (alpha * gamma // 4) % 2:
        val += _hm_coeff(1, x)
    return val


# -- product exponents -----------------------------------------------------------


@lru_cache(maxsize=32)
def _tables(m: int, a: int, b: Tuple[int, ...], c: int, T: int):
    absD = 4 * a * c - sum(x * x for x in b)
    # reverse Cauchy-Schwarz in the light cone: P |D| <= n^2
    pmax = (T - 1) ** 2 // absD
    A1, A2 = kernels.exponent_tables(m, a, list(b), c, absD, T, pmax)
    return A1, A2, pmax


def exponent_sequence(A: QuadForm, T: int) -> Dict[int, int]:
    """``{n: d_A(n)}`` for ``1 <= n < T``."""
    if T <= 1:
        return {}
    A1, _, pmax = _tables(A.m, A.a, A.b, A.c, T)
    f = _fm_list(A.m, pmax + 1)
    scale = 2 ** (A.m - 1)
    out = {}
    for n in range(1, T):
        row = A1[n]
        out[n] = scale * sum(row[P] * f[P] for P in range(pmax + 1) if row[P])
    return out


def exponents_dA(A: QuadForm, n: int) -> int:
    """Exponent of ``((1+q^n)/(1-q^n))`` in the product for the theta series of ``A``."""
    if n < 1:
        raise ValueError("n must be positive")
    return exponent_sequence(A, n + 1)[n]


def product_plusminus(A: QuadForm, T: int, exponents: Optional[Mapping[int, int]] = None) -> QSeries:
    """``prod_{n<T} ((1+q^n)/(1-q^n))^{d_A(n)}``."""
    if exponents is None:
        exponents = exponent_sequence(A, T)
    return plusminus_product(exponents, T)


def lift_exponents_direct(A: QuadForm, T: int) -> Dict[int, int]:
    """Exponent of ``(1 - q^n)`` as ``sum_{(lambda, A) = n} c_{F_m}(lambda, Q(lambda))``.

    The ``h^m`` part never contributes at ``Q(lambda)``: on the mu-class the
    norm lies in ``1 - m/4 + 2Z`` while ``h^m`` lives on ``-m/4 + 2Z``.
    """
    if T <= 1:
        return {}
    m = A.m
    A1, A2, pmax = _tables(m, A.a, A.b, A.c, T)
    f = _fm_list(m, pmax + 1)
    out = {}
    for n in range(1, T):
        s1 = sum(x * f[P] for P, x in enumerate(A1[n]) if x)
        s2 = sum(x * f[P // 4] for P, x in enumerate(A2[n]) if x)
        out[n] = -(2**m) * s1 + 2 ** (m - 1) * s2
    return out


# -- Borcherds input -------------------------------------------------------------


def _majorant_gram(A: QuadForm) -> GramMatrix:
    # 2 (lambda, A)^2 - |D| (alpha gamma - |beta|^2) on (alpha, beta, gamma)
    m, absD = A.m, -A.D
    pi = [A.c] + list(A.b) + [A.a]
    n = m + 2
    G = [[4 * pi[i] * pi[j] for j in range(n)] for i in range(n)]
    G[0][n - 1] -= absD
    G[n - 1][0] -= absD
    for i in range(1, m + 1):
        G[i][i] += 2 * absD
    return GramMatrix(G, even=True)


def _histograms(A: QuadForm, tmax: int):
    """Per pairing ``h`` in ``[0, 2|D|]``, signed counts by ``K = h^2 - |D| P``."""
    m, absD = A.m, -A.D
    kmax = tmax + m * absD
    hmax = 2 * absD
    G = _majorant_gram(A)
    bound = hmax * hmax + kmax
    ch = G.cholesky()
    mu = [[float(x) for x in row] for row in ch[0]]
    d = [float(x) for x in ch[1]]
    V = np.array(kernels.short_vectors(mu, d, G.even_entries, bound), dtype=np.int64)
    V = V.reshape(-1, m + 2)
    alpha, beta, gamma = V[:, 0], V[:, 1 : m + 1], V[:, m + 1]
    p = alpha * A.c + gamma * A.a + beta @ np.array(A.b, dtype=np.int64)
    P = alpha * gamma - (beta * beta).sum(axis=1)
    K = p * p - absD * P
    keep = (p >= 0) & (p <= hmax) & (K <= kmax)
    alpha, beta, gamma, p, K = alpha[keep], beta[keep], gamma[keep], p[keep], K[keep]
    ae, ge = alpha % 2 == 0, gamma % 2 == 0
    sgn = np.where(ae & ge, -1, 1)
    twice = ae & ge & np.all(beta % 2 == 0, axis=1)
    sigma = np.where((alpha % 4 == 0) & (gamma % 4 == 0), -1, 1)
    muc = (alpha % 4 == 2) & (gamma % 4 == 2) & np.all(beta % 2 == 1, axis=1)
    out = {}
    for h in range(hmax + 1):
        sel = p == h
        Kh = K[sel]
        g = np.bincount(Kh, weights=sgn[sel], minlength=kmax + 1).astype(np.int64)
        f2 = np.bincount(Kh[twice[sel]], weights=sigma[sel][twice[sel]], minlength=kmax + 1).astype(np.int64)
        mc = np.bincount(Kh[muc[sel]], minlength=kmax + 1).astype(np.int64)
        out[h] = (g.tolist(), f2.tolist(), mc.tolist())
    return out


def _component(m: int, absD: int, hist, h: int, tmax: int) -> Dict[int, int]:
    g, f2, mc = hist
    f = _fm_list(m, (tmax + m * absD) // absD + 2)
    N4 = 4 * absD
    terms = {}
    tmin = -m * absD
    t0 = tmin + (h * h - tmin) % N4
    nzg = [K for K, x in enumerate(g) if x]
    nzf = [K for K, x in enumerate(f2) if x]
    nzm = [K for K, x in enumerate(mc) if x]
    for t in range(t0, tmax + 1, N4):
        val = 0
        for K in nzg:
            r = t - K
            if r < 0:
                break
            if r % absD == 0:
                val -= 2**m * g[K] * f[r // absD]
        for K in nzf:
            r = t - K
            if r < 0:
                break
            if r % N4 == 0:
                val += 2 ** (m - 1) * f2[K] * f[r // N4]
        for K in nzm:
            r = t - K
            if r < -m * absD:
                break
            val += mc[K] * _hm_coeff(m, Fraction(r, N4))
        if val:
            terms[t] = val
    return terms


def borcherds_input_FA(A: QuadForm, T, *, tmax: Optional[int] = None) -> VectorValuedSeries:
    """The input form ``F_A`` with components indexed by ``h mod 2|D|``.

    Coefficients ``c_A(h, l)`` are produced for ``l < T`` (or, when ``tmax``
    is given, for ``4|D| l <= tmax``).
    """
    absD = -A.D
    N4 = 4 * absD
    if tmax is None:
        tmax = math.ceil(Fraction(T) * N4) - 1
    hists = _histograms(A, tmax)
    comps = {}
    for h in range(2 * absD):
        comps[h] = QSeries(_component(A.m, absD, hists[h], h, tmax), tmax + 1, N4)
    return VectorValuedSeries(2 * absD, comps)


def _pairing_boundary_component(A: QuadForm, tmax: int) -> QSeries:
    """The sum over pairing exactly ``2|D|``; equals component 0."""
    absD = -A.D
    hists = _histograms(A, tmax)
    return QSeries(_component(A.m, absD, hists[2 * absD], 2 * absD, tmax), tmax + 1, 4 * absD)


# -- the weight 1/2 lift ---------------------------------------------------------


def lift_exponents(c: Mapping[int, int], halving_modulus: Optional[int], T: int) -> Dict[int, int]:
    """``e(n) = c(n^2)``, halved when the modulus does not divide ``n``."""
    out = {}
    for n in range(1, T):
        v = c.get(n * n, 0)
        if halving_modulus and n % halving_modulus:
            if v % 2:
                raise ValueError(f"odd coefficient {v} at n^2 = {n * n} cannot be halved")
            v //= 2
        out[n] = int(v)
    return out


def borcherds_lift_weight_half(
    c, weyl=0, halving_modulus: Optional[int] = None, T: int = 40
) -> QSeries:
    """``q^weyl prod_{n<T} (1 - q^n)^{e(n)}`` with ``e`` from :func:`lift_exponents`.

    ``c`` is a mapping ``n -> c(n)`` or a QSeries on the integer grid.
    """
    if isinstance(c, QSeries):
        c = {int(k): v for k, v in c.reduce_grid().items() if c.reduce_grid().denom == 1}
    exps = lift_exponents(c, halving_modulus, T)
    return pow_binomial_product(exps, -1, T).shift(weyl)


def scalarized_lift_input(A: QuadForm, T: int) -> Dict[int, int]:
    """Scalar coefficients ``c_A(n^2)`` for ``n < T``."""
    fa = borcherds_input_FA(A, None, tmax=(T - 1) ** 2)
    s = fa.scalarized()
    return {k: v for k, v in s.items()}


def vector_lift_exponents(fa: VectorValuedSeries, T: int) -> Dict[int, int]:
    """``e(n) = c_A(n mod 2|D|, n^2 / 4|D|)``."""
    out = {}
    for n in range(1, T):
        comp = fa.components[n % fa.modulus]
        if n * n >= comp.trunc:
            raise ValueError(f"component {n % fa.modulus} is truncated below n^2 = {n * n}")
        out[n] = int(comp[n * n])
    return out


# -- Lambert series --------------------------------------------------------------


def _chi4(g: int) -> int:
    if g % 2 == 0:
        return 0
    return 1 if g % 4 == 1 else -1


def lambert_exponents(A: QuadForm, T: int) -> Dict[int, int]:
    """``d_A(n) = sum chi(gcd(alpha, beta, gamma)) c_theta(alpha gamma - beta^2)``."""
    if A.m != 1:
        raise ValueError("the Lambert identity is for binary forms")
    a, b, c = A.a, A.b[0], A.c
    absD = -A.D
    ct = jacobi_theta(max((T - 1) ** 2 // absD + 1, 1))
    out = {}
    for n in range(1, T):
        s = 0
        for alpha in range(4 * n * c // absD + 1):
            for gamma in range(4 * n * a // absD + 1):
                rest = n - alpha * a - gamma * c
                if b == 0:
                    if rest != 0:
                        continue
                    r = math.isqrt(alpha * gamma)
                    betas = range(-r, r + 1)
                elif rest % b:
                    continue
                else:
                    betas = (rest // b,)
                for beta in betas:
                    P = alpha * gamma - beta * beta
                    if P < 0:
                        continue
                    chi = _chi4(math.gcd(math.gcd(alpha, beta), gamma))
                    if chi:
                        s += chi * ct[P]
        out[n] = s
    return out


def lambert_square(A: QuadForm, T: int) -> QSeries:
    """``1 + 4 sum_n d_A(n) q^n / (1 - q^n)``."""
    d = lambert_exponents(A, T)
    coeffs = [0] * T
    coeffs[0] = 1
    for n, v in d.items():
        if v:
            for N in range(n, T, n):
                coeffs[N] += 4 * v
    return QSeries.from_list(coeffs)
