"""Physical-space self-similar groove profiles.

y(t, x) = (Bt)^(1/4) Z(x / (Bt)^(1/4)) with Z a combination of z1..z4.  The
decay basis y1..y4 mixes the z_i through the matrix D so that y1, y2 vanish
as x -> +inf and y3, y4 as x -> -inf.  Decaying values beyond |u| = 6 are
computed by Laplace inversion (or cosine integrals) instead of the
(cancelling) series.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import transforms
from .basis import PARITY, SimilarityCoefficients, z_derivative
from .errors import DomainError
from .hypergeom import gamma_rational

__all__ = [
    "PhysicalParams", "TwoSidedSolution", "DecayBasisWeights", "AsymptoticClass",
    "d_matrix", "y", "y_derivative", "coeffs_from_boundary", "boundary_derivatives",
    "z_to_decay_weights", "decay_weights_to_z", "evaluate", "mullins_solution",
    "amram_solution", "mullins_coefficients", "amram_coefficients", "groove_depth",
    "classify_asymptotics", "U_SWITCH", "similarity_scale",
]

#: |u| beyond which decaying solutions switch to the Fourier route.
U_SWITCH = 6.0

_R2 = math.sqrt(2.0)
_G54 = gamma_rational((5, 4))
_G34 = gamma_rational((3, 4))
_G12 = gamma_rational((1, 2))

# y_i = s * sum_j D_ij * z_j(u) * _W[j]
_W = np.array([1.0 / _G54, 1.0, 1.0 / (2.0 * _G34), 1.0 / (6.0 * _G12)])
# (j-1)! Gamma((6-j)/4), the inverse weights
_W_INV = np.array([_G54, 1.0, 2.0 * _G34, 6.0 * _G12])

_D = np.array([
    [0.0, 1.0 / _R2, -1.0, 1.0 / _R2],
    [1.0, -1.0 / _R2, 0.0, 1.0 / _R2],
    [0.0, 1.0 / _R2, 1.0, 1.0 / _R2],
    [1.0, 1.0 / _R2, 0.0, -1.0 / _R2],
])


@dataclass(frozen=True)
class PhysicalParams:
    """Mullins coefficient B (length^4/time) and root slope parameter m."""

    B: float = 1.0
    m: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.B) and self.B > 0):
            raise DomainError(f"B must be positive, got {self.B}")
        if not math.isfinite(self.m):
            raise DomainError("m must be finite")
        if not 0.0 <= self.m < 1.0 / 3.0:
            warnings.warn(f"m = {self.m} is outside the usual range [0, 1/3)", stacklevel=3)


@dataclass(frozen=True)
class TwoSidedSolution:
    plus: SimilarityCoefficients
    minus: SimilarityCoefficients
    params: PhysicalParams


@dataclass(frozen=True)
class DecayBasisWeights:
    """Weights c1..c4 on y1..y4."""

    c: tuple[float, float, float, float]

    def __init__(self, c):
        vals = tuple(float(v) for v in c)
        if len(vals) != 4 or not all(math.isfinite(v) for v in vals):
            raise DomainError("four finite weights are required")
        object.__setattr__(self, "c", vals)

    def as_array(self) -> np.ndarray:
        return np.array(self.c)


class AsymptoticClass(NamedTuple):
    kind: str  # "decaying" or "growing"
    offending: dict  # e.g. {"c3": 0.7}


def d_matrix() -> np.ndarray:
    return _D.copy()


def similarity_scale(t: float, B: float) -> float:
    """(Bt)^(1/4)."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if not B > 0:
        raise DomainError(f"B must be positive, got {B}")
    return (B * t) ** 0.25


def _series_y(i, order, u, s):
    u = np.asarray(u, dtype=float)
    acc = np.zeros(u.shape)
    for j in range(4):
        dij = _D[i - 1, j]
        if dij != 0.0:
            acc += dij * _W[j] * z_derivative(j + 1, order, u)
    return s ** (1 - order) * acc


def y_derivative(i: int, order: int, t: float, x, params: PhysicalParams,
                 quad: transforms.QuadratureSpec = transforms.DEFAULT_QUADRATURE,
                 route: str = "laplace"):
    """x-derivative (order 0..4) of y_i(t, x).

    On the decaying side beyond |u| = 6 the series cancels badly, so
    values there come from Talbot inversion (``route="laplace"``) or, for
    orders 0..2, from the cosine integrals (``route="fourier"``, slower).
    """
    if i not in (1, 2, 3, 4):
        raise DomainError(f"index must be 1..4, got {i}")
    if route not in ("laplace", "fourier"):
        raise DomainError(f"unknown route {route!r}")
    s = similarity_scale(t, params.B)
    xa = np.asarray(x, dtype=float)
    flat = xa.reshape(-1)
    u = flat / s
    direction = 1.0 if i <= 2 else -1.0
    far = direction * u > U_SWITCH
    out = np.empty(flat.shape)
    if (~far).any():
        out[~far] = _series_y(i, order, u[~far], s)
    if far.any():
        if route == "laplace":
            out[far] = transforms.inverse_laplace(i, t, flat[far], params.B, x_derivative=order)
        elif order <= 2:
            # y3(x) = -y1(-x), y4(x) = y2(-x)
            sign = (-1.0 if i == 3 else 1.0) * direction ** order
            base = i if i <= 2 else i - 2
            for k in np.flatnonzero(far):
                out[k] = sign * transforms.y_decaying_large_u(
                    base, t, direction * flat[k], params.B, quad, order)
        else:
            out[far] = _series_y(i, order, u[far], s)
    if xa.ndim == 0:
        return float(out[0])
    return out.reshape(xa.shape)


def y(i: int, t: float, x, params: PhysicalParams,
      quad: transforms.QuadratureSpec = transforms.DEFAULT_QUADRATURE,
      route: str = "laplace"):
    """Decay-basis solution y_i(t, x)."""
    return y_derivative(i, 0, t, x, params, quad, route)


def coeffs_from_boundary(derivs, t: float, params: PhysicalParams) -> SimilarityCoefficients:
    """C_i = d_i / [(Bt)^((2-i)/4) (i-1)!] from (y, y_x, y_xx, y_xxx) at the root."""
    s = similarity_scale(t, params.B)
    d = [float(v) for v in derivs]
    if len(d) != 4:
        raise DomainError("four boundary derivatives are required")
    return SimilarityCoefficients(
        [d[i] / (s ** (1 - i) * math.factorial(i)) for i in range(4)])


def boundary_derivatives(coeffs: SimilarityCoefficients, t: float, params: PhysicalParams):
    """(y, y_x, y_xx, y_xxx) at the root implied by coefficients C."""
    s = similarity_scale(t, params.B)
    return tuple(coeffs.c[i] * s ** (1 - i) * math.factorial(i) for i in range(4))


def z_to_decay_weights(coeffs: SimilarityCoefficients) -> DecayBasisWeights:
    """c = (1/2) D diag((j-1)! Gamma((6-j)/4)) C."""
    return DecayBasisWeights(0.5 * _D @ (_W_INV * coeffs.as_array()))


def decay_weights_to_z(weights: DecayBasisWeights) -> SimilarityCoefficients:
    """Inverse map, C = diag(w) D^T c."""
    return SimilarityCoefficients(_W * (_D.T @ weights.as_array()))


def _decaying_plus(c, scale):
    return abs(c[2]) <= 1e-12 * scale and abs(c[3]) <= 1e-12 * scale


def _decaying_minus(c, scale):
    return abs(c[0]) <= 1e-12 * scale and abs(c[1]) <= 1e-12 * scale


def classify_asymptotics(coeffs: SimilarityCoefficients, side: str) -> AsymptoticClass:
    """Does the profile decay on `side` ("plus" or "minus")?

    The plus side decays when the weights on y3, y4 vanish, the minus
    side when those on y1, y2 do, both to within 1e-12 ||c||.
    """
    if side not in ("plus", "minus"):
        raise DomainError("side must be 'plus' or 'minus'")
    c = z_to_decay_weights(coeffs).c
    scale = math.sqrt(sum(v * v for v in c))
    idx = (2, 3) if side == "plus" else (0, 1)
    bad = {f"c{k + 1}": c[k] for k in idx if abs(c[k]) > 1e-12 * scale}
    return AsymptoticClass("growing" if bad else "decaying", bad)


def _side_values(coeffs, t, x, params, side, quad):
    s = similarity_scale(t, params.B)
    c = z_to_decay_weights(coeffs).c
    scale = math.sqrt(sum(v * v for v in c))
    safe = _decaying_plus(c, scale) if side == "plus" else _decaying_minus(c, scale)
    if safe and scale > 0:
        idx = (0, 1) if side == "plus" else (2, 3)
        acc = np.zeros_like(x)
        for k in idx:
            if c[k] != 0.0:
                acc += c[k] * y(k + 1, t, x, params, quad)
        return acc
    acc = np.zeros_like(x)
    u = x / s
    for j, cj in enumerate(coeffs.c):
        if cj != 0.0:
            acc += cj * z_derivative(j + 1, 0, u)
    return s * acc


def evaluate(sol: TwoSidedSolution, t: float, x,
             quad: transforms.QuadratureSpec = transforms.DEFAULT_QUADRATURE):
    """Two-sided profile: C+ for x > 0, C- for x < 0; x = 0 is rejected.

    A side whose coefficients lie in the decaying subspace is evaluated
    through the decay basis, which stays accurate far from the root.
    """
    xa = np.asarray(x, dtype=float)
    flat = xa.reshape(-1)
    if np.any(flat == 0.0):
        raise DomainError("evaluate is undefined at the groove root x = 0")
    out = np.empty_like(flat)
    pos = flat > 0
    if pos.any():
        out[pos] = _side_values(sol.plus, t, flat[pos], sol.params, "plus", quad)
    if (~pos).any():
        out[~pos] = _side_values(sol.minus, t, flat[~pos], sol.params, "minus", quad)
    return float(out[0]) if xa.ndim == 0 else out.reshape(xa.shape)


def mullins_solution(params: PhysicalParams, t: float, x,
                     quad: transforms.QuadratureSpec = transforms.DEFAULT_QUADRATURE):
    """Symmetric groove with slope +/- m/2 and zero flux at the root.

    (m / (2 sqrt 2)) (y1 - y2) evaluated at |x|.
    """
    xa = np.abs(np.asarray(x, dtype=float))
    k = params.m / (2.0 * _R2)
    out = k * (np.asarray(y(1, t, xa, params, quad)) - np.asarray(y(2, t, xa, params, quad)))
    return float(out) if out.ndim == 0 else out


def amram_solution(params: PhysicalParams, t: float, x,
                   quad: transforms.QuadratureSpec = transforms.DEFAULT_QUADRATURE):
    """Symmetric groove with slope +/- m/2 and zero curvature: -(m/sqrt 2) y2(|x|)."""
    xa = np.abs(np.asarray(x, dtype=float))
    out = -(params.m / _R2) * np.asarray(y(2, t, xa, params, quad))
    return float(out) if out.ndim == 0 else out


def _mirror(coeffs: SimilarityCoefficients) -> SimilarityCoefficients:
    """Coefficients of Z(-u): odd-index weights flip sign."""
    return SimilarityCoefficients([p * c for p, c in zip(PARITY, coeffs.c)])


def mullins_coefficients(params: PhysicalParams) -> TwoSidedSolution:
    k = params.m / (2.0 * _R2)
    plus = decay_weights_to_z(DecayBasisWeights((k, -k, 0.0, 0.0)))
    return TwoSidedSolution(plus, _mirror(plus), params)


def amram_coefficients(params: PhysicalParams) -> TwoSidedSolution:
    plus = decay_weights_to_z(DecayBasisWeights((0.0, -params.m / _R2, 0.0, 0.0)))
    return TwoSidedSolution(plus, _mirror(plus), params)


def groove_depth(params: PhysicalParams, t: float) -> float:
    """Root height -m (Bt)^(1/4) / (2 sqrt 2 Gamma(5/4)); zero at t = 0."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    if t == 0:
        return 0.0
    return -params.m * (params.B * t) ** 0.25 / (2.0 * _R2 * _G54)
