"""Quadratic and hermitian forms, Gram matrices, and lattice theta series.

Conventions: a :class:`GramMatrix` flagged ``even`` defines ``Q(x) = x^T G x / 2``;
otherwise ``Q(x) = x^T G x``.  Enumeration always works with the even matrix
``2G`` in the second case, so both conventions share one code path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from . import kernels
from .qseries import QSeries

__all__ = [
    "QuadForm",
    "GramMatrix",
    "Quaternion",
    "NonIntegralLatticeError",
    "quaternion_mul",
    "hermitian_to_gram",
    "theta_series",
    "enumerate_vectors",
    "rescaled_dual",
    "level",
    "discriminant",
    "named_lattice",
    "NAMED_LATTICES",
    "parse_form",
]


class NonIntegralLatticeError(ValueError):
    """A rescaled dual is not an even integral lattice."""


@dataclass(frozen=True)
class QuadForm:
    """``a|x|^2 + Re(x b conj(y)) + c|y|^2`` with ``b`` in the order of rank ``m``.

    ``m = 1`` is the binary form ``[a, b, c]``; ``m = 2`` takes Gaussian
    integers and ``m = 3`` quaternions, with ``b = b1 + b2 i (+ b3 j)``.
    """

    m: int
    a: int
    b: Tuple[int, ...]
    c: int

    def __post_init__(self):
        if self.m not in (1, 2, 3):
            raise ValueError("m must be 1, 2 or 3")
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if len(self.b) != self.m:
            raise ValueError(f"b must have {self.m} components")
        if self.a <= 0 or self.c <= 0:
            raise ValueError("a and c must be positive")
        if self.D >= 0:
            raise ValueError(f"form is not positive definite (D = {self.D})")

    @classmethod
    def binary(cls, a: int, b: int, c: int) -> "QuadForm":
        return cls(1, a, (b,), c)

    @property
    def D(self) -> int:
        return sum(x * x for x in self.b) - 4 * self.a * self.c

    @property
    def rank(self) -> int:
        return 2 * _ORDER_RANK[self.m]

    def negate_b(self) -> "QuadForm":
        return QuadForm(self.m, self.a, tuple(-x for x in self.b), self.c)

    def __call__(self, x: int, y: int) -> int:
        if self.m != 1:
            raise TypeError("direct evaluation only for binary forms")
        return self.a * x * x + self.b[0] * x * y + self.c * y * y

    def __str__(self):
        mid = ",".join(str(x) for x in self.b)
        return f"[{self.a},{'(' + mid + ')' if self.m > 1 else mid},{self.c}]"


# real dimension of O_1 = Z, O_2 = Z[i], O_3 = Z[i,j,k]
_ORDER_RANK = {1: 1, 2: 2, 3: 4}


@dataclass(frozen=True)
class Quaternion:
    x0: int
    x1: int = 0
    x2: int = 0
    x3: int = 0

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return quaternion_mul(self, other)

    def conj(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def norm(self) -> int:
        return self.x0**2 + self.x1**2 + self.x2**2 + self.x3**2

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.x0, self.x1, self.x2, self.x3)


def quaternion_mul(x: Quaternion, y: Quaternion) -> Quaternion:
    """Hamilton product with ``i^2 = j^2 = k^2 = ijk = -1``."""
    a0, a1, a2, a3 = x.as_tuple()
    b0, b1, b2, b3 = y.as_tuple()
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def _basis(m: int) -> List[Quaternion]:
    units = [Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)]
    return units[: _ORDER_RANK[m]]


def _ldl(gram: Sequence[Sequence[int]]):
    """Exact ``Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`` for ``Q = x^T G x / 2``.

    Returns ``(mu, d)`` as Fractions, or ``None`` when some ``d_i <= 0``.
    """
    n = len(gram)
    A = [[Fraction(gram[i][j], 2) for j in range(n)] for i in range(n)]
    mu = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for i in range(n):
        d[i] = A[i][i] - sum(d[k] * mu[k][i] ** 2 for k in range(i))
        if d[i] <= 0:
            return None
        for j in range(i + 1, n):
            mu[i][j] = (A[i][j] - sum(d[k] * mu[k][i] * mu[k][j] for k in range(i))) / d[i]
    return mu, d


def _det(M) -> Fraction:
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if A[r][i] != 0), None)
        if p is None:
            return Fraction(0)
        if p != i:
            A[i], A[p] = A[p], A[i]
            det = -det
        det *= A[i][i]
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            if f:
                for c in range(i, n):
                    A[r][c] -= f * A[i][c]
    return det


def _inverse(M) -> List[List[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for i in range(n):
        p = next(r for r in range(i, n) if A[r][i] != 0)
        A[i], A[p] = A[p], A[i]
        piv = A[i][i]
        A[i] = [x / piv for x in A[i]]
        for r in range(n):
            if r != i and A[r][i]:
                f = A[r][i]
                A[r] = [x - f * y for x, y in zip(A[r], A[i])]
    return [row[n:] for row in A]


class GramMatrix:
    """Integral symmetric matrix defining a lattice.

    Positive definiteness is checked lazily, when an enumeration is requested;
    indefinite matrices may be stored as metadata.
    """

    __slots__ = ("entries", "even", "_ldl_cache")

    def __init__(self, entries: Sequence[Sequence[int]], even: bool = True):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("Gram matrix must be square and nonempty")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        if even and any(rows[i][i] % 2 for i in range(n)):
            raise ValueError("even-flagged Gram matrix has an odd diagonal entry")
        self.entries = rows
        self.even = bool(even)
        self._ldl_cache = None

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def even_entries(self) -> Tuple[Tuple[int, ...], ...]:
        """The matrix ``G`` with ``Q(x) = x^T G x / 2``."""
        if self.even:
            return self.entries
        return tuple(tuple(2 * x for x in row) for row in self.entries)

    def norm(self, x: Sequence[int]) -> int:
        G = self.even_entries
        s = sum(G[i][j] * x[i] * x[j] for i in range(self.n) for j in range(self.n))
        return s // 2

    def det(self) -> int:
        return int(_det(self.even_entries))

    def cholesky(self):
        if self._ldl_cache is None:
            self._ldl_cache = _ldl(self.even_entries) or False
        return self._ldl_cache or None

    def is_positive_definite(self) -> bool:
        return self.cholesky() is not None

    def __eq__(self, other):
        return isinstance(other, GramMatrix) and self.even_entries == other.even_entries

    def __hash__(self):
        return hash(self.even_entries)

    def __repr__(self):
        return f"GramMatrix({[list(r) for r in self.entries]}, even={self.even})"

    def to_json(self) -> dict:
        return {"rank": self.n, "gram": [list(r) for r in self.entries], "even": self.even}

    @classmethod
    def from_json(cls, data) -> "GramMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        g = cls(data["gram"], even=data.get("even", True))
        if "rank" in data and data["rank"] != g.n:
            raise ValueError("rank does not match the Gram matrix size")
        return g


def hermitian_to_gram(A: QuadForm) -> GramMatrix:
    """Gram matrix of the real form obtained by splitting x, y into components."""
    basis = _basis(A.m)
    r = len(basis)
    b = Quaternion(*(list(A.b) + [0] * (4 - len(A.b))))
    n = 2 * r
    G = [[0] * n for _ in range(n)]
    for p in range(r):
        G[p][p] = 2 * A.a
        G[r + p][r + p] = 2 * A.c
        for q in range(r):
            # Re(e_p b conj(e_q)) is the coefficient of x_p y_q
            v = quaternion_mul(quaternion_mul(basis[p], b), basis[q].conj()).x0
            G[p][r + q] = v
            G[r + q][p] = v
    return GramMatrix(G, even=True)


def _require_pd(G: GramMatrix):
    ch = G.cholesky()
    if ch is None:
        raise ValueError("Gram matrix is not positive definite")
    mu, d = ch
    return [[float(x) for x in row] for row in mu], [float(x) for x in d]


def theta_series(G: GramMatrix, T: int) -> QSeries:
    """``sum_x q^{Q(x)}`` over all ``x`` with ``Q(x) < T``."""
    if isinstance(G, QuadForm):
        G = hermitian_to_gram(G)
    if T < 1:
        raise ValueError("T must be at least 1")
    mu, d = _require_pd(G)
    hist = kernels.norm_histogram(mu, d, G.even_entries, T - 1)
    return QSeries.from_list(hist)


def enumerate_vectors(G: GramMatrix, maxnorm: int) -> List[Tuple[int, ...]]:
    """All ``x`` with ``Q(x) <= maxnorm``, sorted lexicographically."""
    if maxnorm < 0:
        return []
    mu, d = _require_pd(G)
    return sorted(kernels.short_vectors(mu, d, G.even_entries, maxnorm))


def discriminant(G: GramMatrix) -> int:
    """Order of the discriminant group, ``det`` of the even Gram matrix."""
    return abs(G.det())


def rescaled_dual(G: GramMatrix, N: int) -> GramMatrix:
    """Gram matrix of ``L'(N)`` in the dual basis, i.e. ``N G^{-1}``."""
    if N <= 0:
        raise ValueError("N must be positive")
    inv = _inverse(G.even_entries)
    out = [[N * x for x in row] for row in inv]
    n = len(out)
    if any(x.denominator != 1 for row in out for x in row):
        raise NonIntegralLatticeError(f"N G^-1 is not integral for N = {N}")
    if any(out[i][i].numerator % 2 for i in range(n)):
        raise NonIntegralLatticeError(f"L'({N}) is integral but not even")
    return GramMatrix([[int(x) for x in row] for row in out], even=True)


def level(G: GramMatrix) -> int:
    """Smallest ``N`` with ``L'(N)`` even integral."""
    inv = _inverse(G.even_entries)
    n = len(inv)
    N = 1
    for row in inv:
        for x in row:
            N = N * x.denominator // math.gcd(N, x.denominator)
    # the diagonal must be even as well
    if any((N * inv[i][i]).numerator % 2 for i in range(n)):
        N *= 2
    return N


def _cartan(kind: str, n: int) -> List[List[int]]:
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        G[i][i] = 2
    if kind == "A":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    else:  # E_n: chain 0..n-2 with node n-1 attached to node 2
        edges = [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
    for i, j in edges:
        G[i][j] = G[j][i] = -1
    return G


NAMED_LATTICES = {
    "A2": lambda: GramMatrix(_cartan("A", 2)),
    "A4": lambda: GramMatrix(_cartan("A", 4)),
    "D4": lambda: GramMatrix(_cartan("D", 4)),
    "D6": lambda: GramMatrix(_cartan("D", 6)),
    "E6": lambda: GramMatrix(_cartan("E", 6)),
    "E8": lambda: GramMatrix(_cartan("E", 8)),
    "Q25": lambda: GramMatrix(
        [[2, -1, -1, -1], [-1, 2, 0, 0], [-1, 0, 4, -1], [-1, 0, -1, 4]]
    ),
    # 2|x|^2 + tr(x conj y) + 2|y|^2 over Z[w], w = (1 + sqrt(-3))/2,
    # coordinates x = x1 + x2 w, y = y1 + y2 w
    "Q81": lambda: GramMatrix(
        [[4, 2, 2, 1], [2, 4, 1, 2], [2, 1, 4, 2], [1, 2, 2, 4]]
    ),
}


def named_lattice(name: str) -> GramMatrix:
    try:
        return NAMED_LATTICES[name]()
    except KeyError:
        raise KeyError(f"unknown lattice {name!r}") from None


def parse_form(text: str) -> QuadForm:
    """Parse ``"a,b1[,b2[,b3]],c"``."""
    parts = [p.strip() for p in text.strip().strip("[]").replace("(", "").replace(")", "").split(",")]
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"malformed form spec {text!r}") from None
    if not 3 <= len(nums) <= 5:
        raise ValueError(f"malformed form spec {text!r}")
    return QuadForm(len(nums) - 2, nums[0], tuple(nums[1:-1]), nums[-1])
