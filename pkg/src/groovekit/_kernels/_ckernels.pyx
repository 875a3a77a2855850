# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``; same signatures."""
import numpy as np

from libc.math cimport exp, fabs, pow, copysign, rint

cdef double INV_SQRT_PI = 0.56418958354775628695
cdef double RYB_H = 0.2
cdef int RYB_NMAX = 20
cdef double RYB_C[20]

cdef int _i
for _i in range(20):
    RYB_C[_i] = exp(-((2.0 * (_i + 1) - 1.0) * RYB_H) ** 2)


cdef inline double _falling(double p, int r) nogil:
    cdef double out = 1.0
    cdef int j
    for j in range(r):
        out *= p - j
    return out


def quartic_series(double a, double b1, double b2, double b3, int shift,
                   int order, u, double rtol, double abs_floor,
                   int max_terms, int nsmall):
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = uv.shape[0]
    values = np.zeros(n)
    counts = np.full(n, -1, dtype=np.int64)
    abs_sums = np.zeros(n)
    cdef double[::1] out = values
    cdef long long[::1] nt = counts
    cdef double[::1] asum = abs_sums
    cdef Py_ssize_t i
    cdef int k, e, small
    cdef double c, x, u4, g, ratio, term, total, tabs
    cdef bint started
    with nogil:
        for i in range(n):
            x = uv[i]
            u4 = x * x * x * x
            c = 1.0
            total = 0.0
            tabs = 0.0
            small = 0
            started = False
            g = 0.0
            for k in range(max_terms):
                e = 4 * k + shift - order
                ratio = (a + k) / ((b1 + k) * (b2 + k) * (b3 + k) * (k + 1) * 256.0)
                if e >= 0:
                    if not started:
                        # g = c_k u^e, then carried recursively so neither
                        # factor over- or underflows on its own
                        g = c * pow(x, e)
                        started = True
                    term = g * _falling(4 * k + shift, order)
                    total += term
                    tabs += fabs(term)
                    if fabs(term) < rtol * fabs(total) + abs_floor:
                        small += 1
                    else:
                        small = 0
                    if small >= nsmall:
                        nt[i] = k + 1
                        break
                    g *= ratio * u4
                else:
                    c *= ratio
            out[i] = total
            asum[i] = tabs
    return values, counts, abs_sums


def pfq_series(a, b, nu, double rtol, double abs_floor, int max_terms,
               int nsmall):
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] nv = np.ascontiguousarray(nu, dtype=np.float64)
    cdef Py_ssize_t n = nv.shape[0]
    cdef Py_ssize_t p = av.shape[0], q = bv.shape[0]
    values = np.zeros(n)
    counts = np.full(n, -1, dtype=np.int64)
    abs_sums = np.zeros(n)
    lasts = np.zeros(n)
    cdef double[::1] out = values
    cdef long long[::1] nt = counts
    cdef double[::1] asum = abs_sums
    cdef double[::1] lt = lasts
    cdef Py_ssize_t i, j
    cdef int k, small
    cdef double term, total, tabs, ratio
    with nogil:
        for i in range(n):
            term = 1.0
            total = 0.0
            tabs = 0.0
            small = 0
            for k in range(max_terms):
                total += term
                tabs += fabs(term)
                lt[i] = term
                if fabs(term) < rtol * fabs(total) + abs_floor:
                    small += 1
                else:
                    small = 0
                if small >= nsmall:
                    nt[i] = k + 1
                    break
                ratio = nv[i] / (k + 1)
                for j in range(p):
                    ratio *= av[j] + k
                for j in range(q):
                    ratio /= bv[j] + k
                term *= ratio
            out[i] = total
            asum[i] = tabs
    return values, counts, abs_sums, lasts


cdef double _dawson1(double x) nogil:
    cdef double ax = fabs(x)
    cdef double acc, term, x2, n0, xp, e1, e2, d1, d2, inv2x2
    cdef int n
    if ax < 0.5:
        x2 = -2.0 * x * x
        term = x
        acc = x
        for n in range(40):
            term = term * x2 / (2 * n + 3)
            acc += term
            if fabs(term) <= 1e-17 * fabs(acc):
                break
        return acc
    if ax > 10.0:
        inv2x2 = 0.5 / (x * x)
        term = 0.5 / x
        acc = term
        for n in range(1, 60):
            term = term * (2 * n - 1) * inv2x2
            acc += term
            if fabs(term) <= 1e-17 * fabs(acc):
                break
        return acc
    n0 = 2.0 * rint(0.5 * ax / RYB_H)
    xp = ax - n0 * RYB_H
    e1 = exp(2.0 * xp * RYB_H)
    e2 = e1 * e1
    d1 = n0 + 1.0
    d2 = d1 - 2.0
    acc = 0.0
    for n in range(RYB_NMAX):
        acc += RYB_C[n] * (e1 / d1 + 1.0 / (d2 * e1))
        d1 += 2.0
        d2 -= 2.0
        e1 *= e2
    return copysign(INV_SQRT_PI * exp(-xp * xp) * acc, x)


def dawson(x):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xv.shape[0], i
    values = np.empty(n)
    cdef double[::1] out = values
    with nogil:
        for i in range(n):
            out[i] = _dawson1(xv[i])
    return values.reshape(np.shape(x))


def ibp_y1(int k, coeffs, w):
    cdef double[::1] cv = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64).ravel()
    cdef Py_ssize_t n = wv.shape[0], m = cv.shape[0], i, j
    values = np.empty(n)
    cdef double[::1] out = values
    cdef double x, x4, base, lead, inner, acc, term, inv_fact, sign, kfact, xp
    cdef int nn, p, first
    kfact = 1.0
    for nn in range(2, k + 2):
        kfact *= nn
    sign = -1.0 if k % 2 else 1.0
    first = 1
    while 4 * first - 2 < k:
        first += 1
    with nogil:
        for i in range(n):
            x = wv[i]
            x4 = x * x * x * x
            if x >= 1.0:
                base = pow(x, -k - 2.0)
                inner = 0.0
                for j in range(m - 1, -1, -1):
                    inner = inner * x4 + cv[j]
                out[i] = base * (sign * kfact + exp(-x4) * inner)
            else:
                acc = 0.0
                inv_fact = 1.0
                for nn in range(1, first):
                    inv_fact /= nn
                xp = pow(x, 4 * first - 2 - k)
                for nn in range(first, 40):
                    inv_fact /= nn
                    term = inv_fact * _falling(4 * nn - 2, k) * xp
                    if nn % 2 == 0:
                        term = -term
                    acc += term
                    if fabs(term) <= 1e-18 * fabs(acc):
                        break
                    xp *= x4
                out[i] = acc
    return values.reshape(np.shape(w))
