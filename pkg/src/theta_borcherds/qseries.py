"""Exact truncated Laurent series in q with exponents on a grid (1/denom)Z.

A :class:`QSeries` stores its coefficients densely from the valuation up to
``trunc`` (exclusive, in units of ``1/denom``).  Coefficients are Python ints
or :class:`fractions.Fraction`; integral fractions are normalized back to int
so that the common case stays on fast big-integer arithmetic.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

Coeff = Union[int, Fraction]

__all__ = [
    "QSeries",
    "add",
    "mul",
    "invert",
    "power",
    "pow_binomial_product",
    "plusminus_product",
    "product_from_log_derivative",
    "extract_subseries",
    "evaluate_numeric",
]


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class QSeries:
    """Truncated series ``sum c_k q^(k/denom)``, exact for ``k < trunc``."""

    __slots__ = ("denom", "trunc", "_start", "_c")

    def __init__(self, terms: Mapping[int, Coeff] | None = None, trunc: int = 0, denom: int = 1):
        if denom <= 0:
            raise ValueError("denom must be positive")
        self.denom = int(denom)
        self.trunc = int(trunc)
        terms = {int(k): _norm(v) for k, v in (terms or {}).items() if v != 0 and k < trunc}
        if terms:
            start = min(terms)
            c = [0] * (self.trunc - start)
            for k, v in terms.items():
                c[k - start] = v
        else:
            start, c = self.trunc, []
        self._start = start
        self._c = c

    @classmethod
    def _from_dense(cls, start: int, coeffs: list, trunc: int, denom: int) -> "QSeries":
        s = cls.__new__(cls)
        s.denom = denom
        s.trunc = trunc
        coeffs = coeffs[: max(trunc - start, 0)]
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        if i == len(coeffs):
            s._start, s._c = trunc, []
        else:
            s._start = start + i
            s._c = [_norm(v) for v in coeffs[i:]]
        return s

    @classmethod
    def from_list(cls, coeffs: Iterable[Coeff], start: int = 0, denom: int = 1, trunc: int | None = None) -> "QSeries":
        """Series whose coefficient at key ``start + i`` is ``coeffs[i]``."""
        coeffs = list(coeffs)
        if trunc is None:
            trunc = start + len(coeffs)
        coeffs = coeffs + [0] * max(0, trunc - start - len(coeffs))
        return cls._from_dense(start, coeffs, trunc, denom)

    @classmethod
    def one(cls, trunc: int, denom: int = 1) -> "QSeries":
        return cls({0: 1}, trunc, denom)

    @classmethod
    def zero(cls, trunc: int, denom: int = 1) -> "QSeries":
        return cls({}, trunc, denom)

    # -- inspection ---------------------------------------------------------

    @property
    def valuation(self) -> int:
        """Smallest key with a nonzero coefficient (``trunc`` for the zero series)."""
        return self._start

    @property
    def terms(self) -> Dict[int, Coeff]:
        return {self._start + i: v for i, v in enumerate(self._c) if v != 0}

    def is_zero(self) -> bool:
        return not self._c

    def __getitem__(self, key: int) -> Coeff:
        """Coefficient at key ``key`` (exponent ``key/denom``)."""
        if key >= self.trunc:
            raise IndexError(f"key {key} beyond truncation {self.trunc}")
        i = key - self._start
        if 0 <= i < len(self._c):
            return self._c[i]
        return 0

    def coefficient(self, exponent) -> Coeff:
        """Coefficient at the rational exponent ``exponent``; 0 off the grid."""
        e = Fraction(exponent) * self.denom
        if e.denominator != 1:
            return 0
        return self[e.numerator]

    def exponent_bound(self) -> Fraction:
        """Exponents strictly below this value are exact."""
        return Fraction(self.trunc, self.denom)

    def coefficients(self, count: int | None = None, start: int = 0) -> list:
        """Dense coefficient list for keys ``start, start+1, ...`` below ``trunc``."""
        stop = self.trunc if count is None else min(self.trunc, start + count)
        return [self[k] for k in range(start, stop)]

    def items(self):
        for i, v in enumerate(self._c):
            if v != 0:
                yield self._start + i, v

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self._c)

    # -- grid handling --------------------------------------------------------

    def rescale(self, denom: int) -> "QSeries":
        """The same series written on the finer grid ``(1/denom)Z``."""
        if denom % self.denom:
            raise ValueError(f"cannot rescale denom {self.denom} to {denom}")
        k = denom // self.denom
        if k == 1:
            return self
        c = [0] * (len(self._c) * k)
        c[::k] = self._c
        return QSeries._from_dense(self._start * k, c, self.trunc * k, denom)

    def reduce_grid(self) -> "QSeries":
        """Rewrite on the coarsest grid carrying all stored terms.

        Only valid when the caller knows the true series lives on that grid.
        """
        g = self.denom
        for k in self.terms:
            g = math.gcd(g, k)
            if g == 1:
                return self
        if g == 1:
            return self
        terms = {k // g: v for k, v in self.terms.items()}
        return QSeries(terms, -((-self.trunc) // g), self.denom // g)

    def truncate(self, trunc: int) -> "QSeries":
        if trunc >= self.trunc:
            return self
        return QSeries._from_dense(self._start, list(self._c), trunc, self.denom)

    def truncate_exponent(self, bound) -> "QSeries":
        """Drop all terms with exponent >= ``bound``."""
        k = math.ceil(Fraction(bound) * self.denom)
        return self.truncate(k)

    def shift(self, exponent) -> "QSeries":
        """Multiply by ``q^exponent`` for rational ``exponent``."""
        e = Fraction(exponent)
        denom = _lcm(self.denom, e.denominator)
        s = self.rescale(denom)
        k = int(e * denom)
        return QSeries._from_dense(s._start + k, list(s._c), s.trunc + k, denom)

    # -- arithmetic -------------------------------------------------------------

    def _common(self, other: "QSeries") -> Tuple["QSeries", "QSeries"]:
        if self.denom == other.denom:
            return self, other
        d = _lcm(self.denom, other.denom)
        return self.rescale(d), other.rescale(d)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            if other == 0:
                return self
            other = QSeries({0: other}, max(self.trunc, 1), self.denom)
        a, b = self._common(other)
        trunc = min(a.trunc, b.trunc)
        start = min(a._start, b._start, trunc)
        c = [0] * (trunc - start)
        for s in (a, b):
            off = s._start - start
            for i, v in enumerate(s._c[: max(trunc - s._start, 0)]):
                c[off + i] += v
        return QSeries._from_dense(start, c, trunc, a.denom)

    __radd__ = __add__

    def __neg__(self):
        return QSeries._from_dense(self._start, [-v for v in self._c], self.trunc, self.denom)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "QSeries":
        factor = _norm(Fraction(factor)) if not isinstance(factor, int) else factor
        if factor == 0:
            return QSeries.zero(self.trunc, self.denom)
        return QSeries._from_dense(self._start, [v * factor for v in self._c], self.trunc, self.denom)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return mul(self, invert(other))
        return self.scale(Fraction(1) / Fraction(other))

    def __pow__(self, e: int):
        return power(self, e)

    def __eq__(self, other):
        if isinstance(other, QSeries):
            a, b = self._common(other)
            t = min(a.trunc, b.trunc)
            return a.truncate(t).terms == b.truncate(t).terms
        if isinstance(other, (int, Rational)):
            return self.terms == ({0: _norm(other)} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.denom, self.trunc, tuple(self.items())))

    def __repr__(self):
        return f"QSeries({self.format(12)})"

    # -- text / json ------------------------------------------------------------

    def _exp_str(self, k: int) -> str:
        e = Fraction(k, self.denom)
        if e == 0:
            return ""
        if e == 1:
            return "q"
        if e.denominator == 1:
            return f"q^{e.numerator}"
        return f"q^({e})"

    def format(self, max_terms: int | None = None) -> str:
        parts = []
        for n, (k, v) in enumerate(self.items()):
            if max_terms is not None and n >= max_terms:
                parts.append("...")
                break
            mono = self._exp_str(k)
            neg = v < 0
            a = -v if neg else v
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}" if isinstance(a, Fraction) else f"{a}{mono}"
            else:
                body = str(a)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        o = self._exp_str(self.trunc) or "1"
        tail = f"O({o})"
        return " ".join(parts + [("+ " if parts else "") + tail])

    def __str__(self):
        return self.format()

    def to_json(self) -> dict:
        return {
            "denom": self.denom,
            "trunc": self.trunc,
            "terms": [[k, str(v)] for k, v in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QSeries":
        return cls({int(k): Fraction(v) for k, v in data["terms"]}, int(data["trunc"]), int(data["denom"]))


# -- free functions -------------------------------------------------------------


def add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product on the common grid."""
    a, b = a._common(b)
    if a.is_zero() or b.is_zero():
        trunc = min(a.trunc + b._start, b.trunc + a._start)
        return QSeries.zero(trunc, a.denom)
    # precision of a Laurent product: each factor's relative precision
    trunc = min(a.trunc + b._start, b.trunc + a._start)
    start = a._start + b._start
    n = trunc - start
    if n <= 0:
        return QSeries.zero(trunc, a.denom)
    # iterate over the sparser operand
    sa = [(i, v) for i, v in enumerate(a._c[:n]) if v != 0]
    sb = [(i, v) for i, v in enumerate(b._c[:n]) if v != 0]
    if len(sa) > len(sb):
        sa, sb = sb, sa
        dense = a._c[:n]
    else:
        dense = b._c[:n]
    c = [0] * n
    for i, v in sa:
        lim = n - i
        row = dense[:lim]
        for j, w in enumerate(row):
            if w:
                c[i + j] += v * w
    return QSeries._from_dense(start, c, trunc, a.denom)


def invert(a: QSeries) -> QSeries:
    """Multiplicative inverse; the leading coefficient must be nonzero."""
    if a.is_zero():
        raise ValueError("cannot invert the zero series")
    a0 = a._c[0]
    v = a._start
    n = a.trunc - v
    start = -v
    inv0 = _norm(Fraction(1) / Fraction(a0)) if a0 not in (1, -1) else a0
    nz = [(k, w) for k, w in enumerate(a._c) if w != 0 and k > 0]
    b = [0] * n
    b[0] = inv0
    for i in range(1, n):
        s = 0
        for k, w in nz:
            if k > i:
                break
            s += w * b[i - k]
        b[i] = _norm(-s * inv0)
    return QSeries._from_dense(start, b, start + n, a.denom)


def power(a: QSeries, e: int) -> QSeries:
    """``a**e`` by binary powering; negative ``e`` goes through :func:`invert`."""
    e = int(e)
    if e < 0:
        a = invert(a)
        e = -e
    if e == 0:
        rel = a.trunc - a._start if not a.is_zero() else a.trunc
        return QSeries.one(max(rel, 1), a.denom)
    result = None
    base = a
    while e:
        if e & 1:
            result = base if result is None else mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def product_from_log_derivative(s: list, trunc: int, integral: bool = True) -> QSeries:
    """Series ``P`` with ``P(0) = 1`` and ``q P'/P = sum_{N>=1} s[N] q^N``.

    Uses ``N p_N = sum_{j=1}^{N} s_j p_{N-j}``.  When ``integral`` is set the
    division by ``N`` must be exact, which guards against wrong exponent input.
    """
    p = [0] * max(trunc, 1)
    p[0] = 1
    nz = []
    for N in range(1, trunc):
        sN = s[N] if N < len(s) else 0
        if sN:
            nz.append((N, sN))
        acc = 0
        for j, sj in nz:
            acc += sj * p[N - j]
        if integral:
            q, r = divmod(acc, N)
            if r:
                raise ArithmeticError(f"non-integral product coefficient at q^{N}")
            p[N] = q
        else:
            p[N] = _norm(Fraction(acc) / N)
    return QSeries._from_dense(0, p, max(trunc, 1), 1)


def _log_derivative(exps: Mapping[int, Coeff], sign: int, trunc: int) -> list:
    s = [0] * max(trunc, 1)
    for n, e in exps.items():
        if e == 0 or n <= 0 or n >= trunc:
            continue
        for k, N in enumerate(range(n, trunc, n), start=1):
            # q d/dq log(1 + sign*q^n) = sum_k (-1)^(k+1) sign^k n q^(nk)
            s[N] += (-1) ** (k + 1) * sign**k * n * e
    return s


def pow_binomial_product(exps: Mapping[int, Coeff], sign: int, trunc: int) -> QSeries:
    """Truncated ``prod_{n < trunc} (1 + sign*q^n)^{exps[n]}``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    integral = all(isinstance(_norm(e), int) for e in exps.values())
    s = _log_derivative(exps, sign, trunc)
    return product_from_log_derivative(s, trunc, integral)


def plusminus_product(exps: Mapping[int, Coeff], trunc: int) -> QSeries:
    """Truncated ``prod_n ((1+q^n)/(1-q^n))^{exps[n]}``."""
    s = [0] * max(trunc, 1)
    for n, e in exps.items():
        if e == 0 or n <= 0 or n >= trunc:
            continue
        # only odd multiples survive: (-1)^(k+1) + 1
        for N in range(n, trunc, 2 * n):
            s[N] += 2 * n * e
    integral = all(isinstance(_norm(e), int) for e in exps.values())
    return product_from_log_derivative(s, trunc, integral)


def extract_subseries(a: QSeries, j) -> QSeries:
    """Terms of ``a`` whose exponent is congruent to ``j`` mod 1."""
    r = Fraction(j) % 1 * a.denom
    if r.denominator != 1:
        raise ValueError(f"residue {j} is not on the grid 1/{a.denom}")
    r = r.numerator
    return QSeries({k: v for k, v in a.items() if k % a.denom == r}, a.trunc, a.denom)


def evaluate_numeric(a: QSeries, tau: complex, growth: float = 1.0) -> Tuple[complex, float]:
    """Evaluate ``a`` at ``q = exp(2 pi i tau)``.

    Returns ``(value, tail_bound)``.  The tail bound assumes coefficients grow
    at most like ``C * n**growth`` with ``C`` fitted to the retained terms.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    step = cmath.exp(2j * math.pi * tau / a.denom)
    x = abs(step)
    total = 0j
    cst = 0.0
    for k, v in a.items():
        total += float(v) * cmath.exp(2j * math.pi * tau * k / a.denom)
        n = k / a.denom
        if n > 0:
            cst = max(cst, abs(float(v)) / n**growth)
    if x >= 1.0:
        return total, math.inf
    # sum_{k >= trunc} C (k/denom)^p x^k with p = ceil(growth)
    p = max(0, math.ceil(growth))
    tail, k, term = 0.0, max(a.trunc, 1), 1.0
    while True:
        term = (k / a.denom) ** p * x**k
        tail += term
        if term < 1e-300 or (k > a.trunc + 10 and term < tail * 1e-17):
            break
        k += 1
    return total, cst * tail
