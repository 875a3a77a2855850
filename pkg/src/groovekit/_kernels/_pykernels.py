"""Reference (numpy) implementation of the hot numerical kernels.

Every function here has an identically named twin in ``_ckernels.pyx``;
the package picks the compiled one at import when it is available.
All array arguments are 1-D float64 and are not modified.
"""
import math

import numpy as np

_INV_SQRT_PI = 0.56418958354775628695

# Rybicki step and table for the mid-range Dawson sum.
_RYB_H = 0.2
_RYB_NMAX = 20
_RYB_C = np.exp(-((2.0 * np.arange(1, _RYB_NMAX + 1) - 1.0) * _RYB_H) ** 2)


def _falling(p, r):
    out = 1.0
    for j in range(r):
        out *= p - j
    return out


def quartic_series(a, b1, b2, b3, shift, order, u, rtol, abs_floor,
                   max_terms, nsmall):
    """Derivative of order `order` of sum_k c_k u**(4k+shift).

    c_0 = 1 and c_{k+1}/c_k = (a+k) / ((b1+k)(b2+k)(b3+k)(k+1) 256).
    `u` must be nonnegative. Returns ``(values, nterms, abs_sum)``;
    ``nterms[i] == -1`` flags a point that hit `max_terms`.
    """
    u = np.asarray(u, dtype=float)
    n = u.size
    total = np.zeros(n)
    abs_sum = np.zeros(n)
    small = np.zeros(n, dtype=np.int64)
    nterms = np.full(n, -1, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    c = 1.0
    u4 = u ** 4
    g = None  # c_k u^e, carried recursively to avoid overflow in u^e alone
    for k in range(max_terms):
        e = 4 * k + shift - order
        ratio = (a + k) / ((b1 + k) * (b2 + k) * (b3 + k) * (k + 1) * 256.0)
        if e >= 0:
            if g is None:
                g = c * u ** e
            ff = _falling(4 * k + shift, order)
            term = g * ff
            idx = active
            total[idx] += term[idx]
            abs_sum[idx] += np.abs(term[idx])
            is_small = np.abs(term) < rtol * np.abs(total) + abs_floor
            small = np.where(is_small, small + 1, 0)
            done = active & (small >= nsmall)
            nterms[done] = k + 1
            active &= ~done
            if not active.any():
                break
            g = g * (ratio * u4)
        else:
            c *= ratio
    return total, nterms, abs_sum


def pfq_series(a, b, nu, rtol, abs_floor, max_terms, nsmall):
    """Term-recursive sum of the generalized hypergeometric series.

    Returns ``(values, nterms, abs_sum, last_term)`` with the same
    non-convergence convention as :func:`quartic_series`.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    nu = np.asarray(nu, dtype=float)
    n = nu.size
    total = np.zeros(n)
    abs_sum = np.zeros(n)
    last = np.zeros(n)
    small = np.zeros(n, dtype=np.int64)
    nterms = np.full(n, -1, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    term = np.ones(n)
    for k in range(max_terms):
        total[active] += term[active]
        abs_sum[active] += np.abs(term[active])
        last[active] = term[active]
        is_small = np.abs(term) < rtol * np.abs(total) + abs_floor
        small = np.where(is_small, small + 1, 0)
        done = active & (small >= nsmall)
        nterms[done] = k + 1
        active &= ~done
        if not active.any():
            break
        ratio = np.prod(a + k) / np.prod(b + k) / (k + 1)
        term = term * ratio * nu
    return total, nterms, abs_sum, last


def _dawson_maclaurin(x):
    x2 = -2.0 * x * x
    term = x.copy()
    acc = x.copy()
    for n in range(40):
        term = term * x2 / (2 * n + 3)
        acc += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(acc)):
            break
    return acc


def _dawson_rybicki(x):
    ax = np.abs(x)
    n0 = 2.0 * np.rint(0.5 * ax / _RYB_H)
    xp = ax - n0 * _RYB_H
    e1 = np.exp(2.0 * xp * _RYB_H)
    e2 = e1 * e1
    d1 = n0 + 1.0
    d2 = d1 - 2.0
    acc = np.zeros_like(ax)
    for i in range(_RYB_NMAX):
        acc += _RYB_C[i] * (e1 / d1 + 1.0 / (d2 * e1))
        d1 += 2.0
        d2 -= 2.0
        e1 = e1 * e2
    return np.copysign(_INV_SQRT_PI * np.exp(-xp * xp) * acc, x)


def _dawson_asymptotic(x):
    inv2x2 = 0.5 / (x * x)
    term = 0.5 / x
    acc = term.copy()
    for n in range(1, 60):
        term = term * (2 * n - 1) * inv2x2
        acc += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(acc)):
            break
    return acc


def dawson(x):
    """Dawson's integral F(x) = exp(-x^2) int_0^x exp(t^2) dt."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    ax = np.abs(x)
    lo = ax < 0.5
    hi = ax > 10.0
    mid = ~(lo | hi)
    if lo.any():
        out[lo] = _dawson_maclaurin(x[lo])
    if mid.any():
        out[mid] = _dawson_rybicki(x[mid])
    if hi.any():
        out[hi] = _dawson_asymptotic(x[hi])
    return out


def ibp_y1(k, coeffs, w):
    """k-th derivative of (1 - exp(-w^4)) / w^2 for w > 0.

    `coeffs[i]` is the integer weight of exp(-w^4) w^(-k-2+4i) in the
    closed form; a Maclaurin sum takes over for w < 1, where the closed
    form cancels catastrophically.
    """
    w = np.asarray(w, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    out = np.empty_like(w)
    big = w >= 1.0
    if big.any():
        wb = w[big]
        val = (-1) ** k * math.factorial(k + 1) * wb ** (-k - 2.0)
        ew = np.exp(-wb ** 4)
        inner = np.zeros_like(wb)
        for i in range(coeffs.size):
            inner += coeffs[i] * wb ** (-k - 2.0 + 4 * i)
        out[big] = val + ew * inner
    if (~big).any():
        ws = w[~big]
        acc = np.zeros_like(ws)
        inv_fact = 1.0
        for n in range(1, 40):
            inv_fact /= n
            p = 4 * n - 2
            if p < k:
                continue
            term = (-1) ** (n + 1) * inv_fact * _falling(p, k) * ws ** (p - k)
            acc += term
            if np.all(np.abs(term) <= 1e-18 * np.abs(acc)):
                break
        out[~big] = acc
    return out
