"""Independent routes to the decay basis: Laplace inversion and Fourier integrals.

Laplace side
    The x-dependence of the transformed profile is exp(-/+ r x)(sin, cos)(r x)
    with r = p^(1/4) / (B^(1/4) sqrt 2).  Inversion uses a fixed Talbot-type
    contour and a node-halving consistency check.

Fourier side
    The decaying combinations y1 - y2 and y1 + y2 are cosine transforms of
    f(w) = (1 - exp(-w^4))/w^2 and g(w) = 2 F(w^2)/w^2 (F = Dawson).  For
    large u the integrands are replaced by their 2k-th derivatives
    (integration by parts), which decay fast enough that the small result
    is computed with relative accuracy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import _oscquad
from ._integrands import K_MAX, Integrand, f_coefficients, f_derivative, g_derivative
from .errors import ContourFailure, DomainError

__all__ = [
    "LaplaceQuery", "QuadratureSpec", "FourierValue", "laplace_fundamental",
    "talbot_invert", "inverse_laplace", "fourier_y1", "fourier_y2",
    "y_decaying_large_u", "ibp_coefficients", "ibp_integrand_y1",
    "ibp_integrand_y2", "IBP_THRESHOLD", "K_MAX",
]

#: u above which the integrated-by-parts integrands are used.
IBP_THRESHOLD = 8.0
IBP_PASSES = 2

_SQRT2 = math.sqrt(2.0)
_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class LaplaceQuery:
    p: float
    x: float
    B: float = 1.0

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError(f"Laplace variable must be positive, got {self.p}")
        if not self.B > 0:
            raise DomainError(f"B must be positive, got {self.B}")


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_panels: int = 4096
    ibp_order: int | None = None  # None: 0 below IBP_THRESHOLD, IBP_PASSES above

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.ibp_order is not None and not 0 <= self.ibp_order <= 3:
            raise DomainError("ibp_order must be between 0 and 3")


DEFAULT_QUADRATURE = QuadratureSpec()


class FourierValue(NamedTuple):
    value: float
    error: float


def _transform(i, p, x, B, order):
    # sin and cos written through exp(+/- i r x) so complex p stays analytic
    r = p ** 0.25 / (B ** 0.25 * _SQRT2)
    sgn = -1.0 if i <= 2 else 1.0
    lam_plus = (sgn + 1j) * r
    lam_minus = (sgn - 1j) * r
    e_plus = lam_plus ** order * np.exp(lam_plus * x)
    e_minus = lam_minus ** order * np.exp(lam_minus * x)
    shape = (e_plus - e_minus) / 2j if i % 2 == 1 else (e_plus + e_minus) / 2
    return B ** 0.25 * p ** -1.25 * shape


def laplace_fundamental(i: int, q: LaplaceQuery, x_derivative: int = 0) -> float:
    """x-derivative (order 0..4) of the i-th fundamental Laplace-domain solution."""
    if i not in (1, 2, 3, 4):
        raise DomainError(f"index must be 1..4, got {i}")
    if x_derivative not in range(5):
        raise DomainError("x_derivative must be 0..4")
    val = _transform(i, complex(q.p), q.x, q.B, x_derivative)
    return float(val.real)


# Parameters of the optimized Talbot contour z = N (a t cot(alpha t) - b + i c t).
_TALBOT = (0.5017, 0.6122, 0.2645, 0.6407)


def _talbot_nodes(nodes):
    a, b, c, alpha = _TALBOT
    k = np.arange(nodes)
    theta = -math.pi + (k + 0.5) * 2.0 * math.pi / nodes
    theta = theta[theta > 0]
    zz = nodes * (a * theta / np.tan(alpha * theta) - b + 1j * c * theta)
    dz = nodes * (a / np.tan(alpha * theta)
                  - a * alpha * theta / np.sin(alpha * theta) ** 2 + 1j * c)
    return zz, np.exp(zz) * dz


def talbot_invert(transform, t: float, nodes: int = 48) -> float:
    """Invert a real-on-real-axis Laplace transform at time t > 0.

    `transform` must accept a complex numpy array of p values.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    if nodes < 8 or nodes % 2:
        raise DomainError("node count must be an even number >= 8")
    zz, weight = _talbot_nodes(nodes)
    vals = weight * transform(zz / t)
    return float((2.0 / (nodes * t)) * np.sum(vals.imag))


def _invert_many(i, t, x, B, nodes, order):
    zz, weight = _talbot_nodes(nodes)
    vals = weight * _transform(i, (zz / t)[None, :], x[:, None], B, order)
    return (2.0 / (nodes * t)) * np.sum(vals.imag, axis=1)


def inverse_laplace(i: int, t: float, x, B: float = 1.0, nodes: int = 48,
                    x_derivative: int = 0, rtol: float = 1e-8):
    """y_i(t, x) (or an x-derivative) by numerical Laplace inversion.

    Only the decaying direction is allowed: x >= 0 for i = 1, 2 and
    x <= 0 for i = 3, 4.  `x` may be an array.

    Raises
    ------
    ContourFailure
        If inversion with half the nodes disagrees by more than
        ``rtol * |value| + 0.01 * rtol * (Bt)^((1 - r)/4)``, r the
        derivative order.
    """
    if i not in (1, 2, 3, 4):
        raise DomainError(f"index must be 1..4, got {i}")
    if not (t > 0 and B > 0):
        raise DomainError("t and B must be positive")
    if x_derivative not in range(5):
        raise DomainError("x_derivative must be 0..4")
    if nodes < 8 or nodes % 4:
        raise DomainError("node count must be a multiple of 4, at least 8")
    xa = np.asarray(x, dtype=float)
    flat = xa.reshape(-1)
    if (i <= 2 and np.any(flat < 0)) or (i >= 3 and np.any(flat > 0)):
        raise DomainError("inverse_laplace only covers the decaying direction of y_i")
    full = _invert_many(i, t, flat, B, nodes, x_derivative)
    half = _invert_many(i, t, flat, B, nodes // 2, x_derivative)
    scale = (B * t) ** ((1 - x_derivative) / 4.0)
    bad = np.abs(full - half) > rtol * np.abs(full) + 1e-2 * rtol * scale
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise ContourFailure(
            f"Talbot inversion of y{i} at t={t}, x={flat[k]}: {nodes} vs {nodes // 2} "
            f"nodes differ by {abs(full[k] - half[k]):.3e}")
    return float(full[0]) if xa.ndim == 0 else full.reshape(xa.shape)


def ibp_coefficients(k: int) -> tuple[int, ...]:
    """Integer coefficients a_i(k), i = 0..k, of the closed form of f^(k)."""
    if not 0 <= k <= K_MAX:
        raise DomainError(f"k must be in 0..{K_MAX}")
    return f_coefficients(k)


def ibp_integrand_y1(k: int, w):
    """k-th derivative of (1 - exp(-w^4))/w^2 for w > 0 (w = 0 gives the limit)."""
    if not 0 <= k <= K_MAX:
        raise DomainError(f"k must be in 0..{K_MAX}")
    arr = np.asarray(w, dtype=float)
    if np.any(arr < 0):
        raise DomainError("w must be nonnegative")
    out = f_derivative(k, arr.reshape(-1)).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def ibp_integrand_y2(k: int, w):
    """k-th derivative of 2 F(w^2)/w^2 = sqrt(pi) exp(-w^4) erfi(w^2)/w^2."""
    if not 0 <= k <= K_MAX:
        raise DomainError(f"k must be in 0..{K_MAX}")
    arr = np.asarray(w, dtype=float)
    if np.any(arr < 0):
        raise DomainError("w must be nonnegative")
    out = g_derivative(k, arr.reshape(-1)).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=1 << 16)
def _cosine_transform(base: str, u: float, r: int, spec: QuadratureSpec) -> FourierValue:
    """d^r/du^r of int_0^inf h(w) cos(u w) dw for h = f or g, u >= 0."""
    integrand = Integrand(base, r)
    # d^r/du^r cos(uw) = w^r cos(uw + r pi/2):  r=1 -> -w sin, r=2 -> -w^2 cos
    sign = -1.0 if r in (1, 2) else 1.0
    if u == 0.0:
        if r == 1:
            return FourierValue(0.0, 0.0)
        big_w = 8.0
        est = _oscquad.half_line_at_zero(integrand, integrand.tail_at_zero(big_w), big_w,
                                         spec.abs_tol, spec.max_panels)
        return FourierValue(sign * est.value, est.error)
    passes = spec.ibp_order
    if passes is None:
        passes = IBP_PASSES if u > IBP_THRESHOLD else 0
    if r == 1:
        # int sin(uw) H = (1/u) int cos(uw) H'   (H odd, H(0) = 0)
        if passes == 0:
            est = _oscquad.oscillatory(integrand, u, "sin",
                                       lambda big_w: integrand.envelope_tail(0, big_w),
                                       spec.abs_tol, spec.rel_tol, spec.max_panels)
            return FourierValue(sign * est.value, est.error)
        n = 2 * passes + 1
        factor = (-1) ** passes / u ** (2 * passes + 1)
    else:
        n = 2 * passes
        factor = (-1) ** passes / u ** (2 * passes)
    func = (lambda w: integrand.derivative(n, w)) if n else integrand
    est = _oscquad.oscillatory(func, u, "cos",
                               lambda big_w: integrand.envelope_tail(n, big_w),
                               spec.abs_tol / abs(factor) if passes else spec.abs_tol,
                               spec.rel_tol, spec.max_panels)
    return FourierValue(sign * factor * est.value, abs(factor) * est.error)


def _check_txB(t, x, B):
    if not (t > 0 and B > 0):
        raise DomainError("t and B must be positive")
    if x < 0:
        raise DomainError("the Fourier representation is used for x >= 0")


def fourier_y1(t: float, x: float, B: float = 1.0, spec: QuadratureSpec = DEFAULT_QUADRATURE,
               x_derivative: int = 0, full: bool = False):
    """(y1 - y2)/sqrt 2 from its cosine integral, for x >= 0.

    `x_derivative` 0, 1 or 2 differentiates under the integral.  With
    ``full=True`` a :class:`FourierValue` (value, error estimate) is
    returned.
    """
    _check_txB(t, x, B)
    if x_derivative not in (0, 1, 2):
        raise DomainError("x_derivative must be 0, 1 or 2")
    s = (B * t) ** 0.25
    res = _cosine_transform("f", float(x / s), x_derivative, spec)
    scale = -2.0 * s ** (1 - x_derivative) / math.pi
    out = FourierValue(scale * res.value, abs(scale) * res.error)
    return out if full else out.value


def fourier_y2(t: float, x: float, B: float = 1.0, spec: QuadratureSpec = DEFAULT_QUADRATURE,
               x_derivative: int = 0, full: bool = False):
    """sqrt(pi)(y1 + y2)/sqrt 2 from its cosine integral, for x >= 0."""
    _check_txB(t, x, B)
    if x_derivative not in (0, 1, 2):
        raise DomainError("x_derivative must be 0, 1 or 2")
    s = (B * t) ** 0.25
    res = _cosine_transform("g", float(x / s), x_derivative, spec)
    scale = 2.0 * s ** (1 - x_derivative) / math.pi
    out = FourierValue(scale * res.value, abs(scale) * res.error)
    return out if full else out.value


def y_decaying_large_u(i: int, t: float, x: float, B: float = 1.0,
                       spec: QuadratureSpec = DEFAULT_QUADRATURE, x_derivative: int = 0) -> float:
    """y1 or y2 at x > 0 from the two cosine integrals (no cancellation)."""
    if i not in (1, 2):
        raise DomainError("only y1 and y2 decay as x -> +inf")
    a = fourier_y1(t, x, B, spec, x_derivative)
    b = fourier_y2(t, x, B, spec, x_derivative)
    if i == 1:
        return a / _SQRT2 + b / (_SQRT2 * _SQRT_PI)
    return -a / _SQRT2 + b / (_SQRT2 * _SQRT_PI)
