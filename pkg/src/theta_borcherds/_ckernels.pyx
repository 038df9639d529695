# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled enumeration kernels.

Contracts match :mod:`theta_borcherds._pykernels`; the inputs are plain
Python sequences, converted to C buffers here.
"""

import numpy as np
from libc.math cimport sqrt, floor, ceil
from libc.stdlib cimport malloc, realloc, free

ctypedef long long i64


cdef struct FPState:
    int n
    double *mu
    double *d
    i64 *gram
    i64 maxnorm
    double eps
    i64 *x
    int mode          # 0: histogram, 1: collect vectors
    i64 *hist
    i64 *buf
    Py_ssize_t nbuf
    Py_ssize_t capbuf
    int err


cdef inline void _leaf(FPState *s, i64 S) nogil:
    # S is the exact value of x^T G x
    cdef int i, n = s.n
    cdef i64 q = S // 2
    if q > s.maxnorm:
        return
    if s.mode == 0:
        s.hist[q] += 1
        return
    cdef i64 *nb
    if s.nbuf + n > s.capbuf:
        s.capbuf = 2 * s.capbuf + 16 * n
        nb = <i64 *> realloc(s.buf, s.capbuf * sizeof(i64))
        if nb == NULL:
            s.err = 1
            return
        s.buf = nb
    for i in range(n):
        s.buf[s.nbuf + i] = s.x[i]
    s.nbuf += n


cdef void _rec(FPState *s, int i, double R, i64 S) nogil:
    cdef int j, n = s.n
    cdef double c = 0.0, r, t, R2
    cdef i64 v, lo, hi, lin = 0, gii = s.gram[i * n + i]
    for j in range(i + 1, n):
        if s.x[j] != 0:
            c -= s.mu[i * n + j] * s.x[j]
            lin += s.gram[i * n + j] * s.x[j]
    r = R + s.eps
    if r < 0:
        r = 0
    r = sqrt(r / s.d[i])
    lo = <i64> ceil(c - r)
    hi = <i64> floor(c + r)
    v = lo
    while v <= hi:
        if s.err:
            return
        t = v - c
        R2 = R - s.d[i] * t * t
        if R2 >= -s.eps:
            s.x[i] = v
            if i == 0:
                _leaf(s, S + v * (2 * lin + gii * v))
            else:
                _rec(s, i - 1, R2, S + v * (2 * lin + gii * v))
        v += 1
    s.x[i] = 0


cdef _run(mu, d, gram, i64 maxnorm, int mode):
    cdef int n = len(d)
    cdef int i, j
    cdef FPState s
    s.n = n
    s.maxnorm = maxnorm
    s.eps = 1e-9 * (1.0 + maxnorm)
    s.mode = mode
    s.mu = <double *> malloc(n * n * sizeof(double))
    s.d = <double *> malloc(n * sizeof(double))
    s.gram = <i64 *> malloc(n * n * sizeof(i64))
    s.x = <i64 *> malloc(n * sizeof(i64))
    s.hist = NULL
    s.buf = NULL
    s.nbuf = 0
    s.capbuf = 0
    s.err = 0
    cdef i64[::1] hv
    cdef i64[:, ::1] ov
    cdef Py_ssize_t k, rows
    try:
        for i in range(n):
            s.d[i] = d[i]
            s.x[i] = 0
            for j in range(n):
                s.mu[i * n + j] = mu[i][j]
                s.gram[i * n + j] = gram[i][j]
        if mode == 0:
            hist = np.zeros(maxnorm + 1, dtype=np.int64)
            hv = hist
            s.hist = &hv[0]
        with nogil:
            _rec(&s, n - 1, <double> maxnorm, 0)
        if s.err:
            raise MemoryError("vector buffer allocation failed")
        if mode == 0:
            return hist.tolist()
        rows = s.nbuf // n if n else 0
        out = np.empty((rows, n), dtype=np.int64)
        if rows:
            ov = out
            for k in range(rows):
                for j in range(n):
                    ov[k, j] = s.buf[k * n + j]
        return [tuple(row) for row in out.tolist()]
    finally:
        free(s.mu)
        free(s.d)
        free(s.gram)
        free(s.x)
        free(s.buf)


def norm_histogram(mu, d, gram, maxnorm):
    """Counts of lattice vectors of each norm ``0..maxnorm``."""
    return _run(mu, d, gram, maxnorm, 0)


def short_vectors(mu, d, gram, maxnorm):
    """All integer vectors of norm at most ``maxnorm`` (unordered)."""
    return _run(mu, d, gram, maxnorm, 1)


cdef struct ExpState:
    int m
    i64 *kb
    i64 *W
    i64 *beta
    i64 T
    i64 pmax
    i64 *A1
    i64 *A2
    i64 alpha
    i64 gamma
    int err


cdef inline i64 _isqrt(i64 v) nogil:
    if v <= 0:
        return 0
    cdef i64 r = <i64> sqrt(<double> v)
    while r * r > v:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r


cdef inline bint _feasible(i64 s, i64 R, i64 w, i64 T) nogil:
    if s >= T:
        return (s - T + 1) * (s - T + 1) <= w * R
    if s <= 0:
        return (1 - s) * (1 - s) <= w * R
    return True


cdef inline i64 _floordiv(i64 a, i64 b) nogil:
    # b > 0
    cdef i64 q = a / b
    if (a % b != 0) and (a < 0):
        q -= 1
    return q


cdef void _record(ExpState *st, i64 p, i64 P) nogil:
    cdef i64 a = st.alpha, g = st.gamma
    cdef int i
    cdef bint alleven
    cdef i64 w = st.pmax + 1
    if P > st.pmax:
        st.err = 1
        return
    if a % 2 == 0 and g % 2 == 0:
        st.A1[p * w + P] -= 1
        alleven = True
        for i in range(st.m):
            if st.beta[i] % 2 != 0:
                alleven = False
                break
        if alleven:
            if a % 4 == 0 and g % 4 == 0:
                st.A2[p * w + P] -= 1
            else:
                st.A2[p * w + P] += 1
    else:
        st.A1[p * w + P] += 1


cdef void _erec(ExpState *st, int i, i64 s, i64 R) nogil:
    cdef i64 r, k, kk, lo, hi, b, s2, R2
    if st.err:
        return
    if i == st.m:
        if s > 0 and s < st.T:
            _record(st, s, R)
        return
    r = _isqrt(R)
    k = st.kb[i]
    if i == st.m - 1 and k != 0:
        if k > 0:
            lo = -_floordiv(s - 1, k)
            hi = _floordiv(st.T - 1 - s, k)
        else:
            kk = -k
            lo = -_floordiv(st.T - 1 - s, kk)
            hi = _floordiv(s - 1, kk)
        if lo < -r:
            lo = -r
        if hi > r:
            hi = r
        b = lo
        while b <= hi:
            st.beta[i] = b
            _erec(st, i + 1, s + k * b, R - b * b)
            b += 1
        st.beta[i] = 0
        return
    b = -r
    while b <= r:
        s2 = s + k * b
        R2 = R - b * b
        if _feasible(s2, R2, st.W[i + 1], st.T):
            st.beta[i] = b
            _erec(st, i + 1, s2, R2)
        b += 1
    st.beta[i] = 0


def exponent_tables(m, ka, kb, kc, absD, T, pmax):
    """Signed light-cone counts; see ``_pykernels.exponent_tables``."""
    cdef ExpState st
    cdef int i
    cdef i64 alpha, gamma, amax, gmax, R, s
    cdef i64 cka = ka, ckc = kc
    order = sorted(range(m), key=lambda i: kb[i] != 0)
    A1 = np.zeros((T, pmax + 1), dtype=np.int64)
    A2 = np.zeros((T, pmax + 1), dtype=np.int64)
    if T <= 1:
        return A1.tolist(), A2.tolist()
    cdef i64[:, ::1] a1 = A1
    cdef i64[:, ::1] a2 = A2
    st.m = m
    st.T = T
    st.pmax = pmax
    st.err = 0
    st.kb = <i64 *> malloc((m + 1) * sizeof(i64))
    st.W = <i64 *> malloc((m + 1) * sizeof(i64))
    st.beta = <i64 *> malloc((m + 1) * sizeof(i64))
    st.A1 = &a1[0, 0]
    st.A2 = &a2[0, 0]
    try:
        for i in range(m):
            st.kb[i] = kb[order[i]]
            st.beta[i] = 0
        st.W[m] = 0
        for i in range(m - 1, -1, -1):
            st.W[i] = st.W[i + 1] + st.kb[i] * st.kb[i]
        amax = 4 * (T - 1) * kc // absD
        gmax = 4 * (T - 1) * ka // absD
        with nogil:
            alpha = 0
            while alpha <= amax:
                gamma = 0
                while gamma <= gmax:
                    if alpha != 0 or gamma != 0:
                        R = alpha * gamma
                        s = cka * alpha + ckc * gamma
                        if _feasible(s, R, st.W[0], st.T):
                            st.alpha = alpha
                            st.gamma = gamma
                            _erec(&st, 0, s, R)
                    gamma += 1
                alpha += 1
        if st.err:
            raise ValueError("pmax too small for the requested range")
        return A1.tolist(), A2.tolist()
    finally:
        free(st.kb)
        free(st.W)
        free(st.beta)
