"""Special functions behind the similarity solutions.

Pochhammer symbols, the generalized hypergeometric series pFq (p <= q),
Gamma at the quarter-integer arguments the solutions use, Dawson's
integral and the overflow-free scaled erfi ``exp(-w^4) erfi(w^2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DomainError, NonConvergence

__all__ = [
    "HyperSeriesSpec", "SeriesEvalPolicy", "PFQResult", "pochhammer", "pfq",
    "gamma_rational", "dawson", "erfi_scaled", "GAMMA_TABLE",
]

#: Gamma at the seven rational arguments used by the solution family,
#: rounded from a 40-digit evaluation.
GAMMA_TABLE = {
    Fraction(1, 4): 3.6256099082219083119,
    Fraction(1, 2): 1.7724538509055160273,
    Fraction(3, 4): 1.2254167024651776451,
    Fraction(1, 1): 1.0,
    Fraction(5, 4): 0.90640247705547707798,
    Fraction(3, 2): 0.88622692545275801365,
    Fraction(7, 4): 0.91906252684888323385,
}

_TWO_OVER_SQRT_PI = 1.1283791670955125739


def _to_fraction(value) -> Fraction:
    if isinstance(value, tuple):
        num, den = value
        return Fraction(int(num), int(den))
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr.reshape(-1), arr.ndim == 0, arr.shape


def _restore(values, scalar, shape):
    if scalar:
        return float(values[0])
    return values.reshape(shape)


@dataclass(frozen=True)
class HyperSeriesSpec:
    """Parameters a_1..a_p ; b_1..b_q of a pFq series, kept exact."""

    numerator_params: tuple[Fraction, ...]
    denominator_params: tuple[Fraction, ...]

    def __init__(self, numerator_params, denominator_params):
        a = tuple(_to_fraction(v) for v in numerator_params)
        b = tuple(_to_fraction(v) for v in denominator_params)
        for bi in b:
            if bi <= 0 and bi.denominator == 1:
                raise DomainError(f"denominator parameter {bi} is zero or a negative integer")
        if len(a) > len(b):
            raise DomainError("only p <= q series (convergent for every argument) are supported")
        object.__setattr__(self, "numerator_params", a)
        object.__setattr__(self, "denominator_params", b)

    @property
    def p(self) -> int:
        return len(self.numerator_params)

    @property
    def q(self) -> int:
        return len(self.denominator_params)

    def as_pairs(self):
        """Parameters as ``(numerator, denominator)`` integer pairs."""
        return ([(f.numerator, f.denominator) for f in self.numerator_params],
                [(f.numerator, f.denominator) for f in self.denominator_params])


@dataclass(frozen=True)
class SeriesEvalPolicy:
    rel_tolerance: float = 1e-14
    abs_floor: float = 1e-300
    max_terms: int = 10_000
    consecutive_small_terms_required: int = 3

    def __post_init__(self):
        if not self.rel_tolerance > 0:
            raise DomainError("rel_tolerance must be positive")
        if self.max_terms < 8:
            raise DomainError("max_terms must be at least 8")


DEFAULT_POLICY = SeriesEvalPolicy()


class PFQResult(NamedTuple):
    """Value of a pFq sum with its diagnostics.

    ``condition`` is sum|term| / |sum|; values far above 1 mean the
    double-precision sum lost that factor to cancellation.
    """

    value: float | np.ndarray
    n_terms: int | np.ndarray
    truncation_bound: float | np.ndarray
    condition: float | np.ndarray


def pochhammer(lam, k: int):
    """Rising factorial (lam)_k = lam (lam+1) ... (lam+k-1).

    Computed as a direct product, so exact for ``Fraction`` input and
    well defined for negative `lam`.

    >>> pochhammer(4, 2)
    20
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    out = lam * 0 + 1
    for j in range(k):
        out *= lam + j
    return out


def pfq(spec: HyperSeriesSpec, nu, policy: SeriesEvalPolicy = DEFAULT_POLICY,
        full: bool = False):
    """Sum the series pFq(a; b; nu) term by term.

    Parameters
    ----------
    spec : HyperSeriesSpec
    nu : float or array_like
        Finite argument(s).
    policy : SeriesEvalPolicy
        Stopping rule: ``consecutive_small_terms_required`` successive
        terms below ``rel_tolerance * |partial sum| + abs_floor``.
    full : bool
        Return a :class:`PFQResult` instead of just the value.

    Raises
    ------
    NonConvergence
        If some argument needs more than ``policy.max_terms`` terms.
    """
    flat, scalar, shape = _as_array(nu)
    if not np.all(np.isfinite(flat)):
        raise DomainError("nu must be finite")
    a = np.array([float(v) for v in spec.numerator_params])
    b = np.array([float(v) for v in spec.denominator_params])
    values, nterms, abs_sum, last = _kernels.pfq_series(
        a, b, flat, policy.rel_tolerance, policy.abs_floor, policy.max_terms,
        policy.consecutive_small_terms_required)
    if np.any(nterms < 0):
        bad = flat[nterms < 0][0]
        raise NonConvergence(f"pFq series at nu={bad} did not converge in {policy.max_terms} terms")
    if not full:
        return _restore(values, scalar, shape)
    bound = np.empty_like(values)
    for i, (k, t, x) in enumerate(zip(nterms - 1, last, flat)):
        ratio = abs(x) / (k + 1)
        for ai in a:
            ratio *= abs(ai + k)
        for bi in b:
            ratio /= abs(bi + k)
        bound[i] = abs(t) * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(values != 0, abs_sum / np.abs(values), np.inf)
    cond[abs_sum == 0] = 1.0
    if scalar:
        return PFQResult(float(values[0]), int(nterms[0]), float(bound[0]), float(cond[0]))
    return PFQResult(values.reshape(shape), nterms.reshape(shape),
                     bound.reshape(shape), cond.reshape(shape))


def gamma_rational(q) -> float:
    """Gamma function for positive (usually rational) arguments.

    The quarter-integer arguments 1/4 ... 7/4 come from a stored table;
    anything else goes through :func:`math.gamma` (a Lanczos
    approximation).
    """
    if isinstance(q, (Fraction, int, tuple)) or (isinstance(q, float) and q.is_integer()):
        frac = _to_fraction(q)
        if frac <= 0:
            raise DomainError(f"Gamma argument must be positive, got {frac}")
        if frac in GAMMA_TABLE:
            return GAMMA_TABLE[frac]
        return math.gamma(frac.numerator / frac.denominator)
    q = float(q)
    if not q > 0:
        raise DomainError(f"Gamma argument must be positive, got {q}")
    exact = Fraction(q)
    if exact in GAMMA_TABLE:
        return GAMMA_TABLE[exact]
    return math.gamma(q)


def dawson(x):
    """Dawson's integral exp(-x^2) * int_0^x exp(t^2) dt (odd in x)."""
    flat, scalar, shape = _as_array(x)
    return _restore(_kernels.dawson(flat), scalar, shape)


def erfi_scaled(w):
    """exp(-w^4) * erfi(w^2) for w > 0, via (2/sqrt(pi)) F(w^2)."""
    flat, scalar, shape = _as_array(w)
    if np.any(flat <= 0):
        raise DomainError("erfi_scaled needs w > 0")
    return _restore(_TWO_OVER_SQRT_PI * _kernels.dawson(flat * flat), scalar, shape)
