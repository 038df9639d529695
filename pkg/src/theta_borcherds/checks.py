"""Criteria deciding whether particular theta series can be Borcherds products."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .lattice import (
    GramMatrix,
    NonIntegralLatticeError,
    discriminant,
    level,
    named_lattice,
    rescaled_dual,
    theta_series,
)
from .modforms import delta, eisenstein, j_invariant
from .qseries import QSeries

__all__ = [
    "ClassNumberOneTable",
    "CLASS_NUMBER_ONE",
    "CheckResult",
    "fricke_modular_check",
    "sturm_bound",
    "leech_identity_check",
    "quaternary_counterexample_theta",
    "level5_theta",
    "LEVEL5_PLUS_SPACE_INPUT",
    "run_all",
]


class ClassNumberOneTable(tuple):
    """j-invariants of the imaginary quadratic orders of class number one."""

    def __new__(cls):
        values = (
            0,
            12**3,
            -(15**3),
            20**3,
            -(32**3),
            2 * 15**3,
            66**3,
            -(96**3),
            -3 * 160**3,
            255**3,
            -(960**3),
            -(5280**3),
            -(640320**3),
        )
        assert len(values) == 13
        return super().__new__(cls, values)


CLASS_NUMBER_ONE = ClassNumberOneTable()

# weight 1/2 plus-space input attached to the level 5 lattice; stored, not lifted
LEVEL5_PLUS_SPACE_INPUT = {-4: 1, 0: 1, 1: -6, 4: 3, 5: 10, 9: 14, 16: -60}


@dataclass
class CheckResult:
    name: str
    passed: bool
    reason: str = ""
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "reason": self.reason, "details": self.details}


def _first_difference(a: QSeries, b: QSeries) -> Optional[int]:
    T = min(a.trunc, b.trunc)
    for n in range(T):
        if a[n] != b[n]:
            return n
    return None


def sturm_bound(rank: int, N: int) -> int:
    """``(k/12) [SL_2(Z) : Gamma_0(N)]`` for weight ``k = rank/2``, rounded down."""
    index = Fraction(N)
    for p in _prime_divisors(N):
        index *= Fraction(p + 1, p)
    return int(Fraction(rank, 24) * index)


def _prime_divisors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _default_trunc(G: GramMatrix) -> int:
    # enumeration cost grows like T^(rank/2); rank 8 to q^40 takes ~10^8 vectors
    return 40 if G.n <= 6 else 12


def fricke_modular_check(G: GramMatrix, N: Optional[int] = None, T: Optional[int] = None) -> CheckResult:
    """Necessary condition for a Fricke eigenform: ``theta_L = theta_{L'(N)}``.

    ``N`` defaults to the level of ``G``; ``T`` defaults to 40 (12 above rank
    6), always past the Sturm bound, which is reported.
    """
    if not G.is_positive_definite():
        raise ValueError("Gram matrix is not positive definite")
    if N is None:
        N = level(G)
    if T is None:
        T = _default_trunc(G)
    name = f"fricke(N={N})"
    disc, r = discriminant(G), G.n
    # disc == N^(r/2)  <=>  disc^2 == N^r
    if disc * disc != N**r:
        return CheckResult(name, False, "discriminant ≠ N^{r/2}", {"discriminant": disc, "N": N, "rank": r})
    try:
        dual = rescaled_dual(G, N)
    except NonIntegralLatticeError as exc:
        return CheckResult(name, False, f"rescaled dual not even integral: {exc}", {"N": N})
    a, b = theta_series(G, T), theta_series(dual, T)
    n = _first_difference(a, b)
    if n is not None:
        return CheckResult(name, False, f"theta series differ at q^{n}", {"n": n, "lhs": a[n], "rhs": b[n]})
    return CheckResult(name, True, "", {"N": N, "T": T, "sturm_bound": sturm_bound(r, N)})


@dataclass
class LeechReport:
    series: QSeries
    matches_delta_j: bool
    q1: int
    q2: int
    in_table: bool

    @property
    def passed(self) -> bool:
        return self.matches_delta_j and self.q1 == 0 and self.q2 == 196560 and not self.in_table

    def to_json(self) -> dict:
        return {
            "name": "leech",
            "passed": self.passed,
            "matches_delta_j": self.matches_delta_j,
            "q1": self.q1,
            "q2": self.q2,
            "720_in_table": self.in_table,
            "series": self.series.to_json(),
        }


def leech_identity_check(T: int = 20) -> LeechReport:
    """``E_4^3 - 720 Delta`` against ``Delta (j - 720)`` below ``q^T``."""
    if T < 3:
        raise ValueError("T must be at least 3")
    e4 = eisenstein(4, T)
    lhs = e4 * e4 * e4 - delta(T).scale(720)
    j = j_invariant(T - 1)
    rhs = (delta(T + 1) * (j - QSeries({0: 720}, j.trunc))).truncate(T)
    lhs = lhs.truncate(T)
    return LeechReport(lhs, lhs == rhs, lhs[1], lhs[2], 720 in CLASS_NUMBER_ONE)


def quaternary_counterexample_theta(T: int = 6) -> QSeries:
    """Theta series of ``2|x|^2 + tr(x conj y) + 2|y|^2`` over the Eisenstein integers."""
    if T < 6:
        raise ValueError("T must be at least 6")
    return theta_series(named_lattice("Q81"), T)


def level5_theta(T: int = 5) -> QSeries:
    """Theta series of the rank 4 lattice of discriminant 25 and level 5."""
    if T < 5:
        raise ValueError("T must be at least 5")
    G = named_lattice("Q25")
    assert discriminant(G) == 25 and level(G) == 5
    return theta_series(G, T)


def run_all(T: int = 40) -> List[dict]:
    out = []
    for name, N, expect in [("A2", 3, True), ("D4", 2, True), ("E8", 1, True), ("A4", None, False), ("D6", None, False), ("E6", None, False)]:
        G = named_lattice(name)
        r = fricke_modular_check(G, N, min(T, _default_trunc(G)))
        d = r.to_json()
        d["name"] = f"fricke {name}"
        d["expected"] = expect
        d["ok"] = r.passed == expect
        out.append(d)
    lr = leech_identity_check(min(T, 20) if T >= 3 else 3)
    d = lr.to_json()
    d.pop("series")
    d["ok"] = lr.passed
    out.append(d)
    q = quaternary_counterexample_theta(max(T, 6))
    want = [1, 0, 18, 12, 0, 36]
    G = named_lattice("Q81")
    out.append({
        "name": "quaternary Eisenstein form",
        "coefficients": [int(q[n]) for n in range(6)],
        "discriminant": discriminant(G),
        "level": level(G),
        "ok": [q[n] for n in range(6)] == want and discriminant(G) == 81,
    })
    s = level5_theta(max(T, 5))
    G = named_lattice("Q25")
    out.append({
        "name": "level 5 quaternary form",
        "coefficients": [int(s[n]) for n in range(5)],
        "discriminant": discriminant(G),
        "level": level(G),
        "ok": [s[n] for n in range(5)] == [1, 6, 18, 24, 42] and discriminant(G) == 25,
    })
    out.append({
        "name": "class number one table",
        "entries": len(CLASS_NUMBER_ONE),
        "ok": len(CLASS_NUMBER_ONE) == 13 and 0 in CLASS_NUMBER_ONE and -(640320**3) in CLASS_NUMBER_ONE,
    })
    return out
