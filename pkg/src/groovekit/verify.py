"""Self-check suites: identities, cross-route agreement, asymptotics.

Each check returns a :class:`Check` with the measured error and its
tolerance; suites are lists of zero-argument callables so they can be
run concurrently.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, NamedTuple

import numpy as np

from . import transforms
from ._config import thread_count
from .basis import z, z_derivative
from .hypergeom import gamma_rational
from .solutions import (
    DecayBasisWeights, PhysicalParams, classify_asymptotics, d_matrix,
    decay_weights_to_z, mullins_coefficients, y, z_to_decay_weights,
)

__all__ = ["Check", "SUITES", "run_suite"]


class Check(NamedTuple):
    suite: str
    name: str
    measured: float
    tolerance: float
    passed: bool

    def as_dict(self):
        return {"suite": self.suite, "name": self.name, "measured": self.measured,
                "tolerance": self.tolerance, "pass": self.passed}


def _check(suite, name, measured, tol, passed=None):
    measured = float(measured)
    ok = (measured <= tol) if passed is None else bool(passed)
    return Check(suite, name, measured, tol, ok)


_P = PhysicalParams(1.0, 0.2)


# ------------------------------------------------------------ identities

def _dd_t():
    D = d_matrix()
    return _check("identities", "half_D_Dt_is_identity", np.max(np.abs(0.5 * D @ D.T - np.eye(4))), 1e-15)


def _kronecker():
    err = max(abs(z_derivative(i, j - 1, 0.0) - (math.factorial(j - 1) if i == j else 0.0))
              for i in range(1, 5) for j in range(1, 5))
    return _check("identities", "z_derivatives_at_zero", err, 1e-12)


def _parity():
    u = np.linspace(0.1, 8.0, 40)
    err = 0.0
    for i, sign in zip(range(1, 5), (1, -1, 1, -1)):
        err = max(err, float(np.max(np.abs(z(i, -u) - sign * z(i, u)))))
    return _check("identities", "z_parity", err, 0.0)


def _reflection():
    x = np.linspace(-6.0, 6.0, 49)
    e3 = np.max(np.abs(y(3, 1.0, x, _P) + y(1, 1.0, -x, _P)))
    e4 = np.max(np.abs(y(4, 1.0, x, _P) - y(2, 1.0, -x, _P)))
    return _check("identities", "reflection_y3_y1_y4_y2", max(e3, e4), 1e-11)


def _weights_round_trip():
    rng = np.random.default_rng(7)
    err = 0.0
    for _ in range(20):
        c = rng.uniform(-1, 1, 4)
        back = z_to_decay_weights(decay_weights_to_z(DecayBasisWeights(c))).as_array()
        err = max(err, float(np.max(np.abs(back - c))))
    return _check("identities", "decay_weight_round_trip", err, 1e-14)


def _laplace_boundary():
    Dt = d_matrix().T
    err = 0.0
    for p in (0.5, 2.0):
        for B in (0.7, 1.5):
            for i in range(1, 5):
                for j in range(1, 5):
                    val = transforms.laplace_fundamental(j, transforms.LaplaceQuery(p, 0.0, B), i - 1)
                    ref = Dt[i - 1, j - 1] * B ** ((2 - i) / 4) * p ** ((i - 6) / 4)
                    err = max(err, abs(val - ref))
    return _check("identities", "laplace_boundary_pattern", err, 1e-12)


# ------------------------------------------------------------ routes

def _series_vs_laplace():
    worst = 0.0
    for t in (0.5, 1.0, 3.0):
        for x in (0.3, 1.0, 2.5, 4.0):
            for i in (1, 2):
                ref = y(i, t, x, _P)
                val = transforms.inverse_laplace(i, t, x, 1.0)
                worst = max(worst, abs(val - ref) / max(abs(ref), 1e-3 * t ** 0.25))
            for i in (3, 4):
                ref = y(i, t, -x, _P)
                val = transforms.inverse_laplace(i, t, -x, 1.0)
                worst = max(worst, abs(val - ref) / max(abs(ref), 1e-3 * t ** 0.25))
    return _check("routes", "series_vs_laplace", worst, 1e-7)


def _series_vs_fourier():
    from .solutions import _series_y
    worst = 0.0
    r2 = math.sqrt(2.0)
    for u in np.linspace(0.5, 6.0, 12):
        y1 = float(_series_y(1, 0, np.array([u]), 1.0)[0])
        y2 = float(_series_y(2, 0, np.array([u]), 1.0)[0])
        worst = max(worst, abs(transforms.fourier_y1(1.0, u) - (y1 - y2) / r2),
                    abs(transforms.fourier_y2(1.0, u) - math.sqrt(math.pi) * (y1 + y2) / r2))
    return _check("routes", "series_vs_fourier", worst, 1e-7)


def _fourier_at_root():
    g34, g54 = gamma_rational((3, 4)), gamma_rational((5, 4))
    e0 = abs(transforms.fourier_y2(1.0, 0.0) - 2.0 / math.sqrt(math.pi) * g34)
    e2 = abs(transforms.fourier_y2(1.0, 0.0, x_derivative=2) + 2.0 / math.sqrt(math.pi) * g54)
    return _check("routes", "fourier_root_values", max(e0, e2), 1e-8)


# ------------------------------------------------------------ asymptotics

def _decay_far():
    v = max(abs(y(1, 1.0, 25.0, _P, route="fourier")), abs(y(2, 1.0, 25.0, _P, route="fourier")))
    return _check("asymptotics", "y1_y2_decay_at_x25", v, 1e-8)


def _growth_far():
    y3, y4 = y(3, 1.0, 25.0, _P), y(4, 1.0, 25.0, _P)
    return _check("asymptotics", "y3_grows_y4_falls_at_x25", min(y3, -y4), 1e3, passed=(y3 > 1e3 and y4 < -1e3))


def _planarity():
    vals = [abs(y(1, t, 2.0, _P)) + abs(y(2, t, 2.0, _P)) for t in (1e-1, 1e-3, 1e-5)]
    ok = vals[0] > vals[1] > vals[2]
    return _check("asymptotics", "initial_planarity", vals[-1], vals[0], passed=ok)


def _z_monotone():
    u = np.linspace(6.0, 12.0, 61)
    ok = bool(np.all(np.diff(z(1, u)) < 0))
    for i in (2, 3, 4):
        ok &= bool(np.all(np.diff(z(i, u)) > 0))
    return _check("asymptotics", "z_growth_directions", 0.0, 0.0, passed=ok)


def _classify():
    ms = mullins_coefficients(_P)
    ok = (classify_asymptotics(ms.plus, "plus").kind == "decaying"
          and classify_asymptotics(ms.minus, "minus").kind == "decaying"
          and classify_asymptotics(decay_weights_to_z(DecayBasisWeights((0, 0, 1, 0))), "plus").kind == "growing")
    return _check("asymptotics", "decay_classification", 0.0, 0.0, passed=ok)


SUITES: dict[str, list[Callable[[], Check]]] = {
    "identities": [_dd_t, _kronecker, _parity, _reflection, _weights_round_trip, _laplace_boundary],
    "routes": [_series_vs_laplace, _series_vs_fourier, _fourier_at_root],
    "asymptotics": [_decay_far, _growth_far, _planarity, _z_monotone, _classify],
}


def run_suite(name: str) -> list[Check]:
    """Run ``identities``, ``routes``, ``asymptotics`` or ``all``."""
    if name == "all":
        checks = [c for suite in SUITES.values() for c in suite]
    elif name in SUITES:
        checks = SUITES[name]
    else:
        raise ValueError(f"unknown suite {name!r}")
    threads = thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda f: f(), checks))
    return [f() for f in checks]
