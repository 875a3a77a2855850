"""Finite-difference solver for y_t + B y_xxxx = 0 on the half-line x >= 0.

Second-order central differences with two ghost nodes at the root carry
the two root conditions; the far end is clamped (y = y_x = 0).  Time
stepping is the theta-scheme (Crank-Nicolson by default) with a few
implicit-Euler start-up steps to damp the jump from the flat initial
surface to the imposed root slope.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import DomainError, SolveError, StabilityError
from .solutions import PhysicalParams

__all__ = [
    "GridSpec", "RootBoundaryCondition", "OracleResult", "solve",
    "measure_depth_exponent", "write_snapshots", "suggested_length",
]


@dataclass(frozen=True)
class GridSpec:
    domain_length: float
    n_cells: int
    dt: float
    t_end: float
    scheme_theta: float = 0.5
    startup_steps: int = 4  # implicit-Euler half steps replacing the first two steps

    def __post_init__(self):
        if not self.domain_length > 0:
            raise DomainError("domain_length must be positive")
        if self.n_cells < 64:
            raise DomainError("n_cells must be at least 64")
        if not self.dt > 0:
            raise DomainError("dt must be positive")
        if not self.t_end > self.dt:
            raise DomainError("t_end must exceed dt")
        if not 0.0 <= self.scheme_theta <= 1.0:
            raise DomainError("scheme_theta must lie in [0, 1]")
        if self.startup_steps < 0 or self.startup_steps % 2:
            raise DomainError("startup_steps must be a nonnegative even number")

    @property
    def dx(self) -> float:
        return self.domain_length / self.n_cells


@dataclass(frozen=True)
class RootBoundaryCondition:
    """Two of (slope, curvature, third derivative) imposed at x = 0+.

    ``kind="mullins"`` fixes slope and y_xxx = 0, ``"amram"`` fixes slope
    and y_xx = 0; ``"general"`` takes exactly two non-None values.
    """

    kind: str
    slope: float | None = None
    curvature: float | None = None
    third_deriv: float | None = None

    def __post_init__(self):
        if self.kind == "mullins":
            if self.slope is None:
                raise DomainError("mullins condition needs a slope")
            object.__setattr__(self, "curvature", None)
            object.__setattr__(self, "third_deriv", 0.0)
        elif self.kind == "amram":
            if self.slope is None:
                raise DomainError("amram condition needs a slope")
            object.__setattr__(self, "curvature", 0.0)
            object.__setattr__(self, "third_deriv", None)
        elif self.kind == "general":
            given = [v is not None for v in (self.slope, self.curvature, self.third_deriv)]
            if sum(given) != 2:
                raise DomainError("general condition needs exactly two of slope, curvature, third_deriv")
        else:
            raise DomainError(f"unknown boundary kind {self.kind!r}")

    @classmethod
    def for_params(cls, kind: str, params: PhysicalParams) -> "RootBoundaryCondition":
        return cls(kind, slope=params.m / 2.0)


class OracleResult(NamedTuple):
    x: np.ndarray            # grid nodes 0..L
    times: np.ndarray        # snapshot times
    profiles: np.ndarray     # (len(times), n_cells + 1)
    depth_t: np.ndarray      # every step time
    depth: np.ndarray        # y(t, 0) at every step
    mass_change: np.ndarray  # relative trapezoid-mass change per step
    far_flux: np.ndarray     # mass leaving through the clamped end per step


def suggested_length(B: float, t_end: float) -> float:
    """Domain length with decaying solutions below 1e-8 of the depth at t_end."""
    return 24.0 * (B * t_end) ** 0.25


def _assemble(n, dx, B, dt, theta, bc):
    """Sparse system for unknowns y_{-2} .. y_{n+1} (index j + 2)."""
    size = n + 4
    rows, cols, vals = [], [], []

    def put(r, c, v):
        rows.append(r)
        cols.append(c)
        vals.append(v)

    lam = B * dt / dx ** 4
    stencil = (1.0, -4.0, 6.0, -4.0, 1.0)
    for j in range(n):
        r = j
        for off, sc in zip(range(-2, 3), stencil):
            put(r, j + off + 2, theta * lam * sc + (1.0 if off == 0 else 0.0))
    r = n
    conds = []
    if bc.slope is not None:
        conds.append(("slope", bc.slope))
    if bc.curvature is not None:
        conds.append(("curvature", bc.curvature))
    if bc.third_deriv is not None:
        conds.append(("third", bc.third_deriv))
    rhs_bc = []
    for name, value in conds:
        if name == "slope":
            put(r, 1, -1.0 / (2 * dx))
            put(r, 3, 1.0 / (2 * dx))
        elif name == "curvature":
            put(r, 1, 1.0 / dx ** 2)
            put(r, 2, -2.0 / dx ** 2)
            put(r, 3, 1.0 / dx ** 2)
        else:
            put(r, 0, -1.0 / (2 * dx ** 3))
            put(r, 1, 2.0 / (2 * dx ** 3))
            put(r, 3, -2.0 / (2 * dx ** 3))
            put(r, 4, 1.0 / (2 * dx ** 3))
        rhs_bc.append(value)
        r += 1
    put(r, n + 2, 1.0)          # y_n = 0
    put(r + 1, n + 3, 1.0)      # y_{n+1} - y_{n-1} = 0
    put(r + 1, n + 1, -1.0)
    mat = sp.csc_matrix((vals, (rows, cols)), shape=(size, size))
    return mat, np.array(rhs_bc)


def _d4(full, dx):
    return (full[:-4] - 4 * full[1:-3] + 6 * full[2:-2] - 4 * full[3:-1] + full[4:]) / dx ** 4


def _far_third(full):
    # third difference centred at x_{n - 1/2}
    return full[-1] - 3 * full[-2] + 3 * full[-3] - full[-4]


def _mass(full, dx):
    y = full[2:-1]
    return dx * (0.5 * y[0] + np.sum(y[1:-1]) + 0.5 * y[-1])


class _Stepper:
    def __init__(self, n, dx, B, dt, theta, bc):
        self.n, self.dx, self.B, self.dt, self.theta = n, dx, B, dt, theta
        mat, self.bc_rhs = _assemble(n, dx, B, dt, theta, bc)
        try:
            self.lu = splu(mat)
        except RuntimeError as exc:
            raise SolveError(f"factorization failed: {exc}") from exc

    def step(self, full):
        n = self.n
        rhs = np.empty(n + 4)
        explicit = full[2:n + 2].copy()
        if self.theta < 1.0:
            explicit -= (1.0 - self.theta) * self.B * self.dt * _d4(full, self.dx)[:n]
        rhs[:n] = explicit
        rhs[n:n + 2] = self.bc_rhs
        rhs[n + 2:] = 0.0
        new = self.lu.solve(rhs)
        if not np.all(np.isfinite(new)):
            raise SolveError("non-finite values in the linear solve")
        return new


def solve(grid: GridSpec, bc: RootBoundaryCondition, params: PhysicalParams,
          output_times=None) -> OracleResult:
    """March from y = 0 to ``grid.t_end`` and return snapshots and diagnostics.

    Parameters
    ----------
    output_times : sequence of float, optional
        Times at which profiles are stored (rounded to the nearest step);
        defaults to ``[t_end]``.

    Raises
    ------
    StabilityError
        theta < 1/2 with dt above dx^4 / (8 B (1 - 2 theta)).
    SolveError
        The linear system is singular or produced non-finite values.
    """
    n, dx, B = grid.n_cells, grid.dx, params.B
    theta = grid.scheme_theta
    if theta < 0.5:
        limit = dx ** 4 / (8.0 * B * (1.0 - 2.0 * theta))
        if grid.dt > limit:
            raise StabilityError(f"dt={grid.dt:.3e} exceeds the explicit bound {limit:.3e}")
    n_steps = int(round(grid.t_end / grid.dt))
    dt = grid.t_end / n_steps
    if output_times is None:
        output_times = [grid.t_end]
    out_steps = sorted({max(1, min(n_steps, int(round(t / dt)))) for t in output_times})

    main = _Stepper(n, dx, B, dt, theta, bc)
    startup = None
    n_start = min(grid.startup_steps, 2 * n_steps) if theta < 1.0 else 0
    if n_start:
        startup = _Stepper(n, dx, B, dt / 2.0, 1.0, bc)

    schedule = [(startup, dt / 2.0)] * n_start + [(main, dt)] * (n_steps - n_start // 2)
    full = np.zeros(n + 4)
    x = np.arange(n + 1) * dx
    times, profiles = [], []
    depth_t, depth, mass_change, far_flux = [], [], [], []
    t = 0.0
    for stepper, h in schedule:
        m_old = _mass(full, dx)
        third_old = _far_third(full)
        new = stepper.step(full)
        th = stepper.theta
        flux = h * B / dx ** 3 * (th * _far_third(new) + (1 - th) * third_old)
        norm = dx * float(np.sum(np.abs(new[2:-1])))
        mass_change.append((_mass(new, dx) - m_old) / norm if norm > 0 else 0.0)
        far_flux.append(flux / norm if norm > 0 else 0.0)
        full = new
        t += h
        depth_t.append(t)
        depth.append(full[2])
        k = int(round(t / dt))
        if abs(t - k * dt) < 1e-9 * dt and k in out_steps:
            times.append(k * dt)
            profiles.append(full[2:n + 3].copy())
    return OracleResult(x, np.array(times), np.array(profiles), np.array(depth_t),
                        np.array(depth), np.array(mass_change), np.array(far_flux))


def measure_depth_exponent(depths) -> float:
    """Least-squares slope of log|d| against log t."""
    arr = np.asarray(depths, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise DomainError("depths must be a sequence of (t, d) pairs")
    t, d = arr[:, 0], arr[:, 1]
    if np.any(t <= 0):
        raise DomainError("times must be positive")
    if np.any(d == 0):
        raise DomainError("depths must be nonzero")
    slope, _ = np.polyfit(np.log(t), np.log(np.abs(d)), 1)
    return float(slope)


def write_snapshots(result: OracleResult, directory: str, prefix: str = "snapshot",
                    B_hint: float | None = None, two_sided: bool = True,
                    max_u: float | None = None) -> list[str]:
    """Write each stored profile as a profile CSV readable by the fitting loader.

    Lengths are written in nm.  With `two_sided` the half-line profile is
    mirrored (the root node appears once).  `max_u` (needs `B_hint`) keeps
    only |x| <= max_u (B t)^(1/4).
    """
    if max_u is not None and B_hint is None:
        raise DomainError("max_u needs B_hint")
    os.makedirs(directory, exist_ok=True)
    paths = []
    for t, prof in zip(result.times, result.profiles):
        keep = np.ones(result.x.size, dtype=bool)
        if max_u is not None:
            keep = result.x <= max_u * (B_hint * t) ** 0.25
        x, prof = result.x[keep], prof[keep]
        if two_sided:
            xs = np.concatenate([-x[:0:-1], x])
            ys = np.concatenate([prof[:0:-1], prof])
        else:
            xs, ys = x, prof
        path = os.path.join(directory, f"{prefix}_t{t:.6g}.csv")
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"# t_seconds={float(t)!r}\n")
            if B_hint is not None:
                fh.write(f"# B_hint={float(B_hint)!r}\n")
            fh.write("x_nm,y_nm\n")
            for xv, yv in zip(xs, ys):
                fh.write(f"{float(xv)!r},{float(yv)!r}\n")
        paths.append(path)
    return paths
