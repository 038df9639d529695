"""Roots of binary theta series at CM points.

A class ``(N, d, h)`` names the points ``tau`` with ``A tau^2 + B tau + C = 0``,
``N | A``, ``A > 0``, ``B = h mod 2N`` and ``B^2 - 4AC = d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .lattice import QuadForm, theta_series
from .qseries import QSeries, evaluate_numeric

__all__ = [
    "CMClass",
    "HermannCandidate",
    "RootReport",
    "PreconditionError",
    "hermann_candidates",
    "hermann_roots",
    "cm_representatives",
    "reduce_representative",
    "verify_root",
    "verify_point",
    "classify_point",
    "find_zeros",
]


class PreconditionError(ValueError):
    """The truncation is too short for the requested tolerance."""


@dataclass(frozen=True, order=True)
class CMClass:
    N: int
    d: int
    h: int

    def __post_init__(self):
        if self.N <= 0:
            raise ValueError("level must be positive")
        if self.d >= 0:
            raise ValueError("discriminant must be negative")
        object.__setattr__(self, "h", self.h % (2 * self.N))
        if (self.h * self.h - self.d) % (4 * self.N):
            raise ValueError(f"h^2 = d mod 4N fails for {self.as_tuple()}")

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.N, self.d, self.h)


@dataclass(frozen=True)
class HermannCandidate:
    alpha: int
    beta: int
    gamma: int
    h: int
    d: int


def hermann_candidates(A: QuadForm) -> List[HermannCandidate]:
    """Tuples with ``alpha, gamma = 2 mod 4``, ``beta`` odd, ``alpha gamma > beta^2``
    and ``0 <= h < 2|D|``, searched in ``0 < alpha <= 8c``, ``0 < gamma <= 8a``."""
    if A.m != 1:
        raise ValueError("roots are computed for binary forms")
    a, b, c = A.a, A.b[0], A.c
    D = A.D
    out = []
    for alpha in range(2, 8 * c + 1, 4):
        for gamma in range(2, 8 * a + 1, 4):
            R = alpha * gamma
            r = math.isqrt(R - 1)
            for beta in range(-r, r + 1):
                if beta % 2 == 0:
                    continue
                h = alpha * a + beta * b + gamma * c
                if not 0 <= h < 2 * -D:
                    continue
                P = R - beta * beta
                out.append(HermannCandidate(alpha, beta, gamma, h, D + D * P + h * h))
    return out


def hermann_roots(A: QuadForm) -> List[CMClass]:
    """Classes ``(|D|, d, h)`` of the roots, sorted.

    A candidate counts when ``D <= d < 0``; ``d = D`` does occur.
    """
    N = -A.D
    found = set()
    for cand in hermann_candidates(A):
        if A.D <= cand.d < 0:
            found.add(CMClass(N, cand.d, cand.h))
    return sorted(found)


def cm_representatives(cls: CMClass, count: int, max_a: Optional[int] = None) -> List[Tuple[int, int, int]]:
    """The first ``count`` triples ``(A, B, C)`` with ``|B| <= A``, ordered by ``(A, |B|, -B)``."""
    N, d, h = cls.N, cls.d, cls.h
    if max_a is None:
        max_a = N * max(1000, 50 * count)
    out = []
    A = N
    while len(out) < count and A <= max_a:
        row = []
        for B in range(-A, A + 1):
            if (B - h) % (2 * N):
                continue
            num = B * B - d
            if num % (4 * A) == 0:
                row.append((A, B, num // (4 * A)))
        row.sort(key=lambda t: (abs(t[1]), -t[1]))
        out.extend(row)
        A += N
    for A_, B, C in out:
        assert B * B - 4 * A_ * C == d
    return out[:count]


def _root(rep: Tuple[int, int, int]) -> complex:
    A, B, C = rep
    d = B * B - 4 * A * C
    return complex(-B, math.sqrt(-d)) / (2 * A)


def _act(rep, a, b, c, d):
    # form whose root is (a tau + b)/(c tau + d) when rep has root tau
    A, B, C = rep
    return (
        A * d * d - B * c * d + C * c * c,
        -2 * A * b * d + B * (a * d + b * c) - 2 * C * a * c,
        A * b * b - B * a * b + C * a * a,
    )


def reduce_representative(rep: Tuple[int, int, int], N: int, max_steps: int = 200) -> Tuple[int, int, int]:
    """A Gamma_0(N)-equivalent triple whose root has a larger imaginary part.

    The class ``(N, d, h)`` is preserved; only the numerics benefit.
    """
    for _ in range(max_steps):
        A, B, C = rep
        # translate so that -A < B <= A
        k = -((A - B) // (2 * A))
        if k:
            rep = _act(rep, 1, k, 0, 1)
            A, B, C = rep
        tau = _root(rep)
        best, best_abs = None, 1.0 - 1e-12
        c = N
        while c * tau.imag < 1.0:
            d0 = round(-c * tau.real)
            for d in range(d0 - 2, d0 + 3):
                if math.gcd(c, d) != 1:
                    continue
                v = abs(c * tau + d)
                if v < best_abs:
                    best, best_abs = (c, d), v
            c += N
        if best is None:
            return rep
        c, d = best
        # a d - b c = 1
        g, x, y = _egcd(d, c)
        a, b = x, -y
        rep = _act(rep, a, b, c, d)
    return rep


def _egcd(p: int, q: int):
    if q == 0:
        return (p, 1, 0) if p >= 0 else (-p, -1, 0)
    g, x, y = _egcd(q, p % q)
    return g, y, x - (p // q) * y


def _derivative(s: QSeries) -> QSeries:
    # q d/dq, up to the constant 2 pi i
    return QSeries({k: Fraction(v * k, s.denom) for k, v in s.items()}, s.trunc, s.denom)


@dataclass
class PointCheck:
    rep: Optional[Tuple[int, int, int]]
    evaluated_at: Optional[Tuple[int, int, int]]
    tau: complex
    modulus: float
    tail_bound: float
    derivative_modulus: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "representative": list(self.rep) if self.rep else None,
            "evaluated_at": list(self.evaluated_at) if self.evaluated_at else None,
            "tau": [self.tau.real, self.tau.imag],
            "modulus": self.modulus,
            "tail_bound": self.tail_bound,
            "derivative_modulus": self.derivative_modulus,
            "passed": self.passed,
        }


@dataclass
class RootReport:
    cls: Optional[CMClass]
    T: int
    tol: float
    points: List[PointCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.points) and all(p.passed for p in self.points)

    def to_json(self) -> dict:
        return {
            "T": self.T,
            "tol": self.tol,
            "passed": self.passed,
            "points": [p.to_json() for p in self.points],
        }


def _check(series: QSeries, deriv: QSeries, tau: complex, tol: float, rep=None, at=None) -> PointCheck:
    val, tail = evaluate_numeric(series, tau, growth=1.0)
    if not tail < tol / 2:
        raise PreconditionError(f"tail bound {tail:.3g} is not below tol/2 at tau = {tau}")
    dval, _ = evaluate_numeric(deriv, tau, growth=2.0)
    mod = abs(val)
    return PointCheck(rep, at, tau, mod, tail, 2 * math.pi * abs(dval), mod + tail < tol)


def verify_root(A: QuadForm, cls: CMClass, T: int = 200, tol: float = 1e-6, count: int = 3) -> RootReport:
    """Evaluate the theta series at the first ``count`` representatives.

    The theta series is modular for ``Gamma_0(|D|)``, so each point is first
    moved to an equivalent one with larger imaginary part; both triples are
    reported.
    """
    s = theta_series(A, T)
    ds = _derivative(s)
    rep = RootReport(cls, T, tol)
    for r in cm_representatives(cls, count):
        at = reduce_representative(r, cls.N)
        assert at[1] ** 2 - 4 * at[0] * at[2] == cls.d
        assert at[0] % cls.N == 0 and (at[1] - cls.h) % (2 * cls.N) == 0
        rep.points.append(_check(s, ds, _root(at), tol, r, at))
    return rep


def verify_point(A: QuadForm, tau: complex, T: int = 200, tol: float = 1e-6) -> RootReport:
    """Same check at an arbitrary point; ``passed`` means numerically zero."""
    s = theta_series(A, T)
    rep = RootReport(None, T, tol)
    rep.points.append(_check(s, _derivative(s), complex(tau), tol))
    return rep


def classify_point(tau: complex, classes: Sequence[CMClass], rel: float = 1e-6) -> Optional[CMClass]:
    """The class whose CM points contain ``tau`` (to ``rel`` accuracy), if any."""
    for cls in classes:
        A = math.sqrt(-cls.d) / (2 * tau.imag)
        Ai = round(A)
        if Ai <= 0 or abs(A - Ai) > rel * max(1.0, A) or Ai % cls.N:
            continue
        B = -2 * Ai * tau.real
        Bi = round(B)
        if abs(B - Bi) > rel * max(1.0, abs(B)) or (Bi - cls.h) % (2 * cls.N):
            continue
        if (Bi * Bi - cls.d) % (4 * Ai) == 0:
            return cls
    return None


def find_zeros(
    A: QuadForm, T: int = 200, im_min: float = 0.1, step: float = 0.02, tol: float = 1e-9
) -> List[complex]:
    """Zeros in ``|Re tau| <= 1/2``, ``Im tau >= im_min`` found by a grid scan plus Newton.

    A falsification tool: grid cells whose modulus is a local minimum seed a
    Newton iteration, and only converged points inside the strip are kept.
    """
    s = theta_series(A, T)
    ds = _derivative(s)
    nx = int(round(1.0 / step))
    ny = int(round((1.5 - im_min) / step))
    grid = {}
    for i in range(nx + 1):
        for j in range(ny + 1):
            tau = complex(-0.5 + i * step, im_min + j * step)
            grid[i, j] = abs(evaluate_numeric(s, tau)[0])
    zeros: List[complex] = []
    for (i, j), v in grid.items():
        nb = [grid.get((i + di, j + dj)) for di in (-1, 0, 1) for dj in (-1, 0, 1) if di or dj]
        if any(x is not None and x < v for x in nb):
            continue
        tau = complex(-0.5 + i * step, im_min + j * step)
        for _ in range(50):
            f = evaluate_numeric(s, tau)[0]
            fp = 2j * math.pi * evaluate_numeric(ds, tau, growth=2.0)[0]
            if fp == 0:
                break
            delta = f / fp
            tau -= delta
            if tau.imag <= im_min / 2:
                break
            if abs(delta) < 1e-13:
                break
        if tau.imag <= im_min / 2 or abs(tau.real) > 0.5 + 1e-9:
            continue
        if abs(evaluate_numeric(s, tau)[0]) > tol:
            continue
        if all(abs(tau - z) > 1e-6 for z in zeros):
            zeros.append(tau)
    return sorted(zeros, key=lambda z: (z.imag, z.real))
