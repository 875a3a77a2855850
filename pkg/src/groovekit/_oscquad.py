"""Oscillatory half-line quadrature: int_0^inf H(w) trig(u w) dw.

The half-line is cut at the zeros of trig(u w).  Each panel is integrated
with a 20-point Gauss-Legendre rule and bisected until it agrees with a
10-point rule.  Partial sums over panels alternate in sign; when the
power-law envelope of H cannot certify truncation, Euler's repeated
averaging of the last partial sums extrapolates the limit.
"""
from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .errors import QuadratureFailure

_X20, _W20 = np.polynomial.legendre.leggauss(20)
_X10, _W10 = np.polynomial.legendre.leggauss(10)

_EULER_POINTS = 30
_EULER_LEVELS = 20
_MAX_DEPTH = 40


class QuadEstimate(NamedTuple):
    value: float
    error: float
    panels: int


def _panel_rules(func, trig, u, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    w20 = mid[:, None] + half[:, None] * _X20[None, :]
    w10 = mid[:, None] + half[:, None] * _X10[None, :]
    if trig is None:
        v20 = func(w20)
        v10 = func(w10)
    else:
        v20 = func(w20) * trig(u * w20)
        v10 = func(w10) * trig(u * w10)
    g20 = half * (v20 @ _W20)
    g10 = half * (v10 @ _W10)
    return g20, np.abs(g20 - g10)


def adaptive_panels(func, trig, u, edges, tol, budget):
    """Integrate over consecutive [edges[j], edges[j+1]], adaptively.

    Returns per-panel values, the summed error estimate and the number
    of subpanels used.
    """
    n = edges.size - 1
    owner = np.arange(n)
    a = edges[:-1].copy()
    b = edges[1:].copy()
    result = np.zeros(n)
    err_total = 0.0
    used = 0
    for _ in range(_MAX_DEPTH):
        vals, errs = _panel_rules(func, trig, u, a, b)
        used += a.size
        if used > budget:
            raise QuadratureFailure(f"panel budget {budget} exhausted")
        local_tol = tol * (b - a) / (edges[-1] - edges[0])
        ok = (errs <= np.maximum(local_tol, 1e-15 * np.abs(vals))) | (b - a < 1e-12)
        np.add.at(result, owner[ok], vals[ok])
        err_total += float(np.sum(errs[ok]))
        if ok.all():
            return result, err_total, used
        bad = ~ok
        mid = 0.5 * (a[bad] + b[bad])
        a = np.concatenate([a[bad], mid])
        b = np.concatenate([mid, b[bad]])
        owner = np.concatenate([owner[bad], owner[bad]])
    raise QuadratureFailure("panel bisection depth exhausted")


def _euler_limit(partial):
    t = np.array(partial[-_EULER_POINTS:], dtype=float)
    for _ in range(_EULER_LEVELS):
        if t.size == 1:
            break
        t = 0.5 * (t[1:] + t[:-1])
    return float(t[-1])


def oscillatory(func: Callable, u: float, kind: str, tail: Callable[[float], float],
                abs_tol: float, rel_tol: float, max_panels: int,
                n_start: int = 64) -> QuadEstimate:
    """int_0^inf func(w) cos(u w) dw (kind "cos") or sin (kind "sin"), u > 0.

    `tail(W)` bounds int_W^inf |func|; it decides whether plain
    truncation is enough or Euler acceleration is needed.
    """
    trig = np.cos if kind == "cos" else np.sin
    offset = 0.5 if kind == "cos" else 1.0
    n_osc = n_start
    previous = None
    used_total = 0
    while True:
        edges = np.concatenate([[0.0], (np.arange(n_osc) + offset) * math.pi / u])
        panel_tol = 0.1 * abs_tol
        vals, qerr, used = adaptive_panels(func, trig, u, edges, panel_tol,
                                           max_panels - used_total)
        used_total += used
        partial = np.cumsum(vals)
        big_w = edges[-1]
        tail_bound = tail(big_w)
        if tail_bound <= 0.1 * abs_tol:
            value = float(partial[-1])
            err = qerr + tail_bound
        else:
            value = _euler_limit(partial)
            shifted = _euler_limit(partial[:-1])
            err = qerr + abs(value - shifted)
        if err <= max(abs_tol, rel_tol * abs(value)):
            return QuadEstimate(value, err, used_total)
        if previous is not None and abs(value - previous) <= max(abs_tol, rel_tol * abs(value)):
            return QuadEstimate(value, max(err, abs(value - previous)), used_total)
        previous = value
        n_osc *= 2
        if used_total + n_osc > max_panels:
            raise QuadratureFailure(
                f"oscillatory quadrature at u={u} did not reach tolerance (error {err:.2e})")


def half_line_at_zero(func: Callable, tail_value: float, big_w: float,
                      abs_tol: float, max_panels: int) -> QuadEstimate:
    """int_0^inf func(w) dw as int_0^W (adaptive) plus an analytic tail."""
    edges = np.linspace(0.0, big_w, 33)
    vals, qerr, used = adaptive_panels(func, None, 0.0, edges, 0.1 * abs_tol, max_panels)
    return QuadEstimate(float(np.sum(vals)) + tail_value, qerr, used)
