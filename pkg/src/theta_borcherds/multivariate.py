"""Truncated genus-2 style theta constants and their infinite products.

A monomial ``q^(alpha/2) r_1^beta_1 .. r_m^beta_m s^(gamma/2)`` is stored as the
integer tuple ``(alpha, beta_1, .., beta_m, gamma)``; the grading is
``alpha + gamma``.  Polynomials are dicts from such tuples to nonzero ints.
"""

from __future__ import annotations

import itertools
import math
from typing import Dict, List, Tuple

import numpy as np

from .lattice import Quaternion, _basis, quaternion_mul
from .modforms import _theta_neg_power_list

__all__ = ["psi_m_truncated", "theta_constant_m_truncated", "compare_polynomials"]

Poly = Dict[Tuple[int, ...], int]


def _order_elements(m: int, maxnorm: int) -> List[Quaternion]:
    """Elements of ``Z``, ``Z[i]`` or ``Z[i,j,k]`` with ``|x|^2 <= maxnorm``."""
    r = len(_basis(m))
    bound = math.isqrt(maxnorm)
    out = []
    for comps in itertools.product(range(-bound, bound + 1), repeat=r):
        if sum(x * x for x in comps) <= maxnorm:
            out.append(Quaternion(*(list(comps) + [0] * (4 - r))))
    return out


def theta_constant_m_truncated(m: int, B: int) -> Poly:
    """``sum q^{|l|^2/2} r^{Re(l e_i conj(u))} s^{|u|^2/2}`` over ``|l|^2 + |u|^2 <= 2B``.

    ``e_i`` runs over ``1, i, j``; for ``m = 3`` the ``k`` direction is dropped.
    """
    if B < 1:
        raise ValueError("B must be at least 1")
    basis = _basis(m)[:m]
    elems = _order_elements(m, 2 * B)
    out: Poly = {}
    for lam in elems:
        nl = lam.norm()
        lam_e = [quaternion_mul(lam, e) for e in basis]
        for mu in elems:
            nm = mu.norm()
            if nl + nm > 2 * B:
                continue
            mc = mu.conj()
            key = (nl,) + tuple(quaternion_mul(le, mc).x0 for le in lam_e) + (nm,)
            out[key] = out.get(key, 0) + 1
    return out


def _plusminus_coeffs(c: int, kmax: int) -> List[int]:
    # ((1+y)/(1-y))^c: k a_k = 2c sum_{j odd} a_{k-j}
    a = [0] * (kmax + 1)
    a[0] = 1
    for k in range(1, kmax + 1):
        s = sum(a[k - j] for j in range(1, k + 1, 2))
        q, r = divmod(2 * c * s, k)
        assert r == 0
        a[k] = q
    return a


def psi_m_truncated(m: int, B: int) -> Poly:
    """The product over ``alpha + gamma > 0`` truncated at grading ``2B``.

    Each factor is ``((1 + e x)/(1 - e x))^c`` with ``x`` the monomial of
    ``(alpha, beta, gamma)``, ``e = (-1)^((alpha+1)(gamma+1))`` and ``c`` the
    coefficient of ``2^(m-1)/theta^m`` at ``alpha*gamma - |beta|^2``.
    """
    if B < 1:
        raise ValueError("B must be at least 1")
    G = 2 * B
    f = _theta_neg_power_list(m, B * B + 1)
    scale = 2 ** (m - 1)
    # |beta_i|^2 <= alpha*gamma <= B^2
    shape = (G + 1,) * 2 + (2 * B + 1,) * m
    arr = np.zeros(shape, dtype=object)
    arr[(0, 0) + (B,) * m] = 1
    for g in range(1, G + 1):
        for alpha in range(g + 1):
            gamma = g - alpha
            R = alpha * gamma
            r = math.isqrt(R)
            eps = -1 if (alpha % 2 == 0 and gamma % 2 == 0) else 1
            kmax = G // g
            for beta in itertools.product(range(-r, r + 1), repeat=m):
                P = R - sum(b * b for b in beta)
                if P < 0:
                    continue
                c = scale * f[P]
                if c == 0:
                    continue
                coeffs = _plusminus_coeffs(c, kmax)
                new = arr.copy()
                for k in range(1, kmax + 1):
                    ak = coeffs[k] * eps**k
                    if ak == 0:
                        continue
                    shift = (k * alpha, k * gamma) + tuple(k * b for b in beta)
                    if any(abs(s) > B for s in shift[2:]):
                        continue
                    dst, src = [], []
                    for ax, s in enumerate(shift):
                        n = shape[ax]
                        if s >= 0:
                            dst.append(slice(s, n))
                            src.append(slice(0, n - s))
                        else:
                            dst.append(slice(0, n + s))
                            src.append(slice(-s, n))
                    new[tuple(dst)] += ak * arr[tuple(src)]
                arr = new
    out: Poly = {}
    for idx in zip(*np.nonzero(arr)):
        alpha, gamma = int(idx[0]), int(idx[1])
        if alpha + gamma > G:
            continue
        beta = tuple(int(i) - B for i in idx[2:])
        out[(alpha,) + beta + (gamma,)] = int(arr[idx])
    return out


def compare_polynomials(p: Poly, q: Poly) -> List[Tuple[Tuple[int, ...], int, int]]:
    """Monomials where the two polynomials differ, as ``(key, p[key], q[key])``."""
    keys = sorted(set(p) | set(q))
    return [(k, p.get(k, 0), q.get(k, 0)) for k in keys if p.get(k, 0) != q.get(k, 0)]
