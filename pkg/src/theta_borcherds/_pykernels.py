"""Pure-Python versions of the enumeration kernels.

Same contracts as the compiled ``_ckernels`` module; selected by
:mod:`theta_borcherds.kernels` when the extension is unavailable.
"""

from __future__ import annotations

import math


def _fincke_pohst(mu, d, gram, maxnorm, visit=None, hist=None):
    n = len(d)
    x = [0] * n
    eps = 1e-9 * (1.0 + maxnorm)

    # S is the exact value of x^T G x over the coordinates already fixed
    def rec(i, R, S):
        c = 0.0
        mi = mu[i]
        gi = gram[i]
        lin = 0
        for j in range(i + 1, n):
            xj = x[j]
            if xj:
                c -= mi[j] * xj
                lin += gi[j] * xj
        r = math.sqrt(max(R + eps, 0.0) / d[i])
        lo = math.ceil(c - r)
        hi = math.floor(c + r)
        di, gii = d[i], gi[i]
        for v in range(lo, hi + 1):
            t = v - c
            R2 = R - di * t * t
            if R2 < -eps:
                continue
            x[i] = v
            S2 = S + v * (2 * lin + gii * v)
            if i == 0:
                q = S2 // 2
                if q <= maxnorm:
                    if hist is not None:
                        hist[q] += 1
                    else:
                        visit(q, x)
            else:
                rec(i - 1, R2, S2)
        x[i] = 0

    rec(n - 1, float(maxnorm), 0)


def norm_histogram(mu, d, gram, maxnorm):
    """Counts of lattice vectors of each norm ``0..maxnorm``."""
    hist = [0] * (maxnorm + 1)
    _fincke_pohst(mu, d, gram, maxnorm, hist=hist)
    return hist


def short_vectors(mu, d, gram, maxnorm):
    """All integer vectors of norm at most ``maxnorm`` (unordered)."""
    out = []

    def visit(q, x):
        out.append(tuple(x))

    _fincke_pohst(mu, d, gram, maxnorm, visit)
    return out


def exponent_tables(m, ka, kb, kc, absD, T, pmax):
    """Signed counts over tuples (alpha, beta, gamma) in the forward light cone.

    For each pairing ``p = ka*alpha + kb.beta + kc*gamma`` with ``0 < p < T``
    and each ``P = alpha*gamma - |beta|^2`` in ``0..pmax``:

    * ``A1[p][P]`` sums ``(-1)^((alpha+1)(gamma+1))``;
    * ``A2[p][P]`` sums, over tuples with every entry even, ``-1`` when
      ``alpha, gamma = 0 mod 4`` and ``+1`` otherwise.
    """
    A1 = [[0] * (pmax + 1) for _ in range(T)]
    A2 = [[0] * (pmax + 1) for _ in range(T)]
    if T <= 1:
        return A1, A2
    order = sorted(range(m), key=lambda i: kb[i] != 0)
    kbo = [kb[i] for i in order]
    # tail weights W[i] = sum_{j >= i} kb_j^2
    W = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        W[i] = W[i + 1] + kbo[i] * kbo[i]
    amax = 4 * (T - 1) * kc // absD
    gmax = 4 * (T - 1) * ka // absD
    beta = [0] * m

    def feasible(s, R, w):
        # some completion with |rest|^2 <= R can land the pairing in (0, T)
        if s >= T:
            return (s - T + 1) ** 2 <= w * R
        if s <= 0:
            return (1 - s) ** 2 <= w * R
        return True

    def record(alpha, gamma, p, P):
        sgn = -1 if (alpha % 2 == 0 and gamma % 2 == 0) else 1
        A1[p][P] += sgn
        if alpha % 2 == 0 and gamma % 2 == 0 and all(b % 2 == 0 for b in beta):
            A2[p][P] += -1 if (alpha % 4 == 0 and gamma % 4 == 0) else 1

    def rec(alpha, gamma, i, s, R):
        if i == m:
            # the remaining budget R = alpha*gamma - |beta|^2 is P itself
            if 0 < s < T:
                if R > pmax:
                    raise ValueError("pmax too small for the requested range")
                record(alpha, gamma, s, R)
            return
        r = math.isqrt(R)
        k = kbo[i]
        if i == m - 1 and k != 0:
            # solve for the last coordinate: 0 < s + k*b < T
            if k > 0:
                lo = max(-r, -((s - 1) // k))
                hi = min(r, (T - 1 - s) // k)
            else:
                kk = -k
                lo = max(-r, -((T - 1 - s) // kk))
                hi = min(r, (s - 1) // kk)
            for b in range(lo, hi + 1):
                beta[i] = b
                rec(alpha, gamma, i + 1, s + k * b, R - b * b)
            beta[i] = 0
            return
        for b in range(-r, r + 1):
            s2 = s + k * b
            R2 = R - b * b
            if not feasible(s2, R2, W[i + 1]):
                continue
            beta[i] = b
            rec(alpha, gamma, i + 1, s2, R2)
        beta[i] = 0

    for alpha in range(amax + 1):
        for gamma in range(gmax + 1):
            if alpha == 0 and gamma == 0:
                continue
            R = alpha * gamma
            s = ka * alpha + kc * gamma
            if not feasible(s, R, W[0]):
                continue
            rec(alpha, gamma, 0, s, R)
    return A1, A2
