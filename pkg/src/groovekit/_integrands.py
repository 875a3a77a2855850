"""Derivatives of the two non-oscillatory Fourier-cosine integrands.

f(w) = (1 - exp(-w^4)) / w^2 and g(w) = 2 F(w^2) / w^2 (F = Dawson),
plus w^r-weighted versions for x-derivatives of the transforms.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import _kernels

K_MAX = 6  # highest derivative order supported by the closed form of f


@lru_cache(maxsize=None)
def f_coefficients(k: int) -> tuple[int, ...]:
    """Integer weights a_i(k) of exp(-w^4) w^(-k-2+4i), i = 0..k, in f^(k)."""
    a = [-1]
    for n in range(k):
        nxt = [0] * (len(a) + 1)
        for i, coef in enumerate(a):
            nxt[i] += coef * (-n - 2 + 4 * i)
            nxt[i + 1] -= 4 * coef
        a = nxt
    return tuple(a)


def f_derivative(k: int, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    return _kernels.ibp_y1(k, np.array(f_coefficients(k), dtype=float), w)


@lru_cache(maxsize=None)
def _exp_quartic_poly(n: int) -> tuple[int, ...]:
    """h_{n,i} with d^n/dw^n exp(-v w^4) = exp(-v w^4) sum_i h_{n,i} v^i w^(4i-n)."""
    h = [1]
    for m in range(n):
        nxt = [0] * (len(h) + 1)
        for i, coef in enumerate(h):
            nxt[i] += (4 * i - m) * coef
            nxt[i + 1] -= 4 * coef
        h = nxt
    return tuple(h)


def exp_quartic_derivative(n: int, w) -> np.ndarray:
    """n-th derivative of exp(-w^4)."""
    w = np.asarray(w, dtype=float)
    acc = np.zeros_like(w)
    for i, coef in enumerate(_exp_quartic_poly(n)):
        if coef == 0:
            continue
        e = 4 * i - n
        if e < 0:
            continue  # these terms carry a zero coefficient
        acc += coef * w ** e
    return acc * np.exp(-w ** 4)


# g(w) = 2 sum_n (-2)^n w^(4n) / (2n+1)!!  for small w
def _g_taylor(n: int, w):
    acc = np.zeros_like(w)
    coef = 2.0
    for j in range(60):
        p = 4 * j
        if p >= n:
            ff = 1.0
            for q in range(n):
                ff *= p - q
            term = coef * ff * w ** (p - n)
            acc += term
            if np.all(np.abs(term) <= 1e-18 * np.abs(acc)):
                break
        coef *= -2.0 / (2 * j + 3)
    return acc


# g(w) ~ sum_j (2j-1)!!/2^j w^(-4j-4)  for large w
def _g_asymptotic(n: int, w):
    acc = np.zeros_like(w)
    coef = 1.0
    prev = np.full(w.shape, np.inf)
    for j in range(200):
        p = -4 * j - 4
        ff = 1.0
        for q in range(n):
            ff *= p - q
        term = coef * ff * w ** (p - n)
        if np.all(np.abs(term) >= prev):
            break  # smallest term reached
        acc += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(acc)):
            break
        prev = np.abs(term)
        coef *= (2 * j + 1) / 2.0
    return acc


def _geometric_gl_nodes():
    x, wts = np.polynomial.legendre.leggauss(24)
    edges = [0.0, 0.5]
    while 1.0 - edges[-1] > 1e-5:
        edges.append(1.0 - (1.0 - edges[-1]) / 2.0)
    edges.append(1.0)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (hi + lo) + 0.5 * (hi - lo) * x)
        weights.append(0.5 * (hi - lo) * wts)
    return np.concatenate(nodes), np.concatenate(weights)


_S_NODES, _S_WEIGHTS = _geometric_gl_nodes()
_V_NODES = 1.0 - _S_NODES ** 2


def _g_integral(n: int, w):
    """g^(n) from g = 2 int_0^1 exp(-(1-s^2) w^4) ds."""
    wq = w[:, None]
    v = _V_NODES[None, :]
    kernel = np.exp(-v * wq ** 4)
    acc = np.zeros(w.shape)
    for i, coef in enumerate(_exp_quartic_poly(n)):
        if coef == 0:
            continue
        moment = (v ** i * kernel) @ _S_WEIGHTS
        acc += coef * w ** (4 * i - n) * moment
    return 2.0 * acc


def g_derivative(n: int, w) -> np.ndarray:
    """n-th derivative of g(w) = 2 F(w^2)/w^2, with g(0) = 2."""
    w = np.asarray(w, dtype=float)
    flat = w.reshape(-1)
    out = np.empty_like(flat)
    lo = flat <= 1.0
    hi = flat >= 3.0
    mid = ~(lo | hi)
    if n == 0:
        small = flat < 0.05
        big = ~small
        out[big] = 2.0 * _kernels.dawson(flat[big] ** 2) / flat[big] ** 2
        if small.any():
            out[small] = _g_taylor(0, flat[small])
        return out.reshape(w.shape)
    if lo.any():
        out[lo] = _g_taylor(n, flat[lo])
    if mid.any():
        out[mid] = _g_integral(n, flat[mid])
    if hi.any():
        out[hi] = _g_asymptotic(n, flat[hi])
    return out.reshape(w.shape)


def _falling(x, n):
    out = 1.0
    for j in range(n):
        out *= x - j
    return out


class Integrand:
    """H(w) = sign * w^r * base(w), with derivatives by Leibniz' rule.

    ``base`` is "f" or "g".  For base "f" and r = 2 the function
    w^2 f = 1 - exp(-w^4) is replaced by -exp(-w^4); the constant 1
    contributes nothing to a cosine transform at u > 0 and its Abel
    limit at u = 0.
    """

    def __init__(self, base: str, r: int):
        self.base = base
        self.r = r
        self.exponential = base == "f" and r == 2
        self.leading_power = (r - 2) if base == "f" else (r - 4)

    def derivative(self, n: int, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        if self.exponential:
            return -exp_quartic_derivative(n, w)
        fn = f_derivative if self.base == "f" else g_derivative
        if self.r == 0:
            return fn(n, w)
        acc = np.zeros_like(w)
        for j in range(min(n, self.r) + 1):
            acc += math.comb(n, j) * _falling(self.r, j) * w ** (self.r - j) * fn(n - j, w)
        return acc

    def __call__(self, w):
        return self.derivative(0, w)

    def envelope_tail(self, n: int, big_w: float) -> float:
        """Bound on int_W^inf |H^(n)| from the leading power-law decay."""
        if self.exponential:
            return 0.0 if big_w >= 4.0 else math.inf
        lead = self.leading_power
        amp = 2.0 * abs(_falling(lead, n))
        p = n - lead
        if amp == 0.0:
            return 0.0
        if p <= 1:
            return math.inf
        return amp * big_w ** (1 - p) / (p - 1)

    def tail_at_zero(self, big_w: float) -> float:
        """int_W^inf H(w) dw from the large-w expansion (W >= 6)."""
        if self.exponential:
            return 0.0
        if self.base == "f":
            if self.r >= 1:
                return math.inf
            return 1.0 / big_w
        acc = 0.0
        coef = 1.0
        for j in range(40):
            p = 4 * j + 3 - self.r
            acc += coef * big_w ** (-p) / p
            coef *= (2 * j + 1) / 2.0
        return acc
