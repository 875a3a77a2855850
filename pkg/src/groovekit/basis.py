"""The four hypergeometric solutions z1..z4 of Z'''' - u Z'/4 + Z/4 = 0.

Each z_i is a single power series sum_k c_k u^(4k+s) whose coefficient
ratio is that of a 1F3 in u^4/256, so values and derivatives up to order
four come from one term-wise differentiated sum.  The series is reliable
for |u| <= 12; beyond that the decaying combinations must be evaluated
through :mod:`groovekit.transforms`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import DomainError, NonConvergence, TruncationError
from .hypergeom import DEFAULT_POLICY, SeriesEvalPolicy

__all__ = [
    "SimilarityCoefficients", "SeriesSolution", "z", "z_derivative",
    "ode_residual", "extend_series", "series_eval", "taylor_coefficients",
    "basis_matrix", "PARITY", "CERTIFIED_U",
]

#: |u| up to which double-precision series evaluation is trusted.
CERTIFIED_U = 12.0

#: +1 for even basis functions, -1 for odd ones.
PARITY = (1, -1, 1, -1)

# (a; b1, b2, b3) of the 1F3 and the leading power s of u for z1, z3, z4.
_SERIES = {
    1: (Fraction(-1, 4), (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)), 0),
    3: (Fraction(1, 4), (Fraction(3, 4), Fraction(5, 4), Fraction(3, 2)), 2),
    4: (Fraction(1, 2), (Fraction(5, 4), Fraction(3, 2), Fraction(7, 4)), 3),
}


@dataclass(frozen=True)
class SimilarityCoefficients:
    """Weights C1..C4 on z1..z4 for one side of the groove."""

    c: tuple[float, float, float, float]

    def __init__(self, c):
        vals = tuple(float(v) for v in c)
        if len(vals) != 4:
            raise DomainError("exactly four coefficients are required")
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "c", vals)

    def __iter__(self):
        return iter(self.c)

    def __getitem__(self, idx):
        return self.c[idx]

    def as_array(self) -> np.ndarray:
        return np.array(self.c)


@dataclass(frozen=True)
class SeriesSolution:
    """Power-series coefficients a_0..a_{n_max} of a similarity profile.

    ``exact`` keeps the rational coefficients when the seeds were
    rational (up to n = 40); ``a`` always holds floats.
    """

    a: tuple[float, ...]
    n_max: int
    exact: tuple[Fraction, ...] | None = None


def _check_index(i):
    if i not in (1, 2, 3, 4):
        raise DomainError(f"basis index must be 1..4, got {i}")


def _prepare(u):
    arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("u must be finite")
    return arr.reshape(-1), arr.ndim == 0, arr.shape


def z_derivative(i: int, order: int, u, policy: SeriesEvalPolicy = DEFAULT_POLICY):
    """d^order z_i / du^order, for order 0..4, scalar or array `u`.

    Odd/even symmetry is imposed by evaluating at |u| and applying the
    sign, so parity holds bit for bit.  At u = 0 and order <= 3 the result
    is exactly ``order!`` when ``i == order + 1`` and 0 otherwise.
    """
    _check_index(i)
    if order not in (0, 1, 2, 3, 4):
        raise DomainError(f"derivative order must be 0..4, got {order}")
    flat, scalar, shape = _prepare(u)
    au = np.abs(flat)
    if i == 2:
        vals = au.copy() if order == 0 else np.full(au.shape, 1.0 if order == 1 else 0.0)
    else:
        a, (b1, b2, b3), shift = _SERIES[i]
        vals, nterms, _ = _kernels.quartic_series(
            float(a), float(b1), float(b2), float(b3), shift, order, au,
            policy.rel_tolerance, policy.abs_floor, policy.max_terms,
            policy.consecutive_small_terms_required)
        if np.any(nterms < 0):
            raise NonConvergence(f"z{i} series did not converge at u={au[nterms < 0][0]}")
    at_zero = au == 0.0
    if order <= 3 and at_zero.any():
        vals[at_zero] = float(math.factorial(order)) if i == order + 1 else 0.0
    sign = PARITY[i - 1] * (-1) ** order
    if sign < 0:
        vals = np.where(flat < 0, -vals, vals)
    if scalar:
        return float(vals[0])
    return vals.reshape(shape)


def z(i: int, u, policy: SeriesEvalPolicy = DEFAULT_POLICY):
    """Basis function z_i(u)."""
    return z_derivative(i, 0, u, policy)


def basis_matrix(u, order: int = 0) -> np.ndarray:
    """Array of shape ``(len(u), 4)`` with columns z_1^(order) .. z_4^(order)."""
    flat = np.atleast_1d(np.asarray(u, dtype=float))
    return np.column_stack([z_derivative(i, order, flat) for i in (1, 2, 3, 4)])


def _combine(coeffs, order, u):
    c = coeffs.c if isinstance(coeffs, SimilarityCoefficients) else tuple(coeffs)
    total = 0.0
    for i, ci in enumerate(c, start=1):
        if ci != 0.0:
            total = total + ci * np.asarray(z_derivative(i, order, u))
    return total


def ode_residual(coeffs: SimilarityCoefficients, u):
    """Z'''' - (u/4) Z' + Z/4 for Z = sum C_i z_i, from series derivatives."""
    u_arr = np.asarray(u, dtype=float)
    res = (_combine(coeffs, 4, u_arr) - 0.25 * u_arr * _combine(coeffs, 1, u_arr)
           + 0.25 * _combine(coeffs, 0, u_arr))
    res = np.asarray(res, dtype=float) + np.zeros_like(u_arr)
    return float(res) if res.ndim == 0 else res


def _recursion_factor(n):
    return Fraction(n - 1, 4 * (n + 1) * (n + 2) * (n + 3) * (n + 4))


_EXACT_LIMIT = 40


def extend_series(a0, a1, a2, a3, n_max: int) -> SeriesSolution:
    """Extend four seed coefficients with a_{n+4} = (n-1) a_n / [4(n+1)(n+2)(n+3)(n+4)].

    Rational seeds (int or Fraction) are propagated exactly through
    n = 40; the float view is rounded once from the exact values.
    """
    if n_max < 4:
        raise DomainError("n_max must be at least 4")
    seeds = (a0, a1, a2, a3)
    rational = all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in seeds)
    if rational:
        exact = [Fraction(v) for v in seeds]
        for n in range(0, min(n_max, _EXACT_LIMIT) - 3):
            exact.append(exact[n] * _recursion_factor(n))
        a = [float(v) for v in exact]
    else:
        exact = None
        a = [float(v) for v in seeds]
    for n in range(len(a) - 4, n_max - 3):
        a.append(a[n] * (n - 1) / (4.0 * (n + 1) * (n + 2) * (n + 3) * (n + 4)))
    return SeriesSolution(tuple(a[: n_max + 1]), n_max, tuple(exact[: n_max + 1]) if exact else None)


def series_eval(sol: SeriesSolution, u: float, tol: float = 1e-10) -> float:
    """Horner evaluation of a truncated series, refusing uncertified `u`.

    The tail is estimated by continuing the recursion four more terms
    and bounding the remainder geometrically.

    Raises
    ------
    TruncationError
        If the tail estimate exceeds ``tol * max(1, |value|)``.
    """
    u = float(u)
    a = sol.a
    n = sol.n_max
    value = 0.0
    for coef in reversed(a):
        value = value * u + coef
    ext = list(a[-4:])
    nxt = []
    for j in range(4):
        m = n - 3 + j
        nxt.append(ext[j] * (m - 1) / (4.0 * (m + 1) * (m + 2) * (m + 3) * (m + 4)))
    au = abs(u)
    tail_block = sum(abs(c) * au ** (n + 1 + j) for j, c in enumerate(nxt))
    ratio = au ** 4 * (n + 1) / (4.0 * (n + 2) * (n + 3) * (n + 4) * (n + 5))
    tail = tail_block / (1.0 - ratio) if ratio < 1.0 else math.inf
    if tail > tol * max(1.0, abs(value)):
        raise TruncationError(
            f"series with n_max={n} cannot certify u={u}: tail estimate {tail:.3e}")
    return value


def _z_taylor(i: int, n_max: int):
    """Exact Taylor coefficients of z_i, read off its 1F3 term ratio."""
    out = [Fraction(0)] * (n_max + 1)
    if i == 2:
        if n_max >= 1:
            out[1] = Fraction(1)
        return out
    a, (b1, b2, b3), shift = _SERIES[i]
    c = Fraction(1)
    k = 0
    while 4 * k + shift <= n_max:
        out[4 * k + shift] = c
        c = c * (a + k) / ((b1 + k) * (b2 + k) * (b3 + k) * (k + 1) * 256)
        k += 1
    return out


def taylor_coefficients(coeffs, n_max: int) -> list[float]:
    """Taylor coefficients about u = 0 of sum C_i z_i up to u^n_max.

    Built from the hypergeometric term ratios of each basis function,
    independently of the three-term recursion used by
    :func:`extend_series`.
    """
    c = coeffs.c if isinstance(coeffs, SimilarityCoefficients) else tuple(coeffs)
    out = np.zeros(n_max + 1)
    for i, ci in enumerate(c, start=1):
        if ci != 0.0:
            out += float(ci) * np.array([float(v) for v in _z_taylor(i, n_max)])
    return out.tolist()
