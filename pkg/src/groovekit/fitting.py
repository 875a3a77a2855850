"""Least-squares fits of measured groove profiles to the similarity family.

Profiles are linear in the coefficients once B (and the root position) is
fixed, so every fit is an orthogonal-factorization solve; B and the root
offset are found by an outer one- or two-dimensional search over the
inner residual.

Models
    flat        y = 0                                    (0 parameters)
    mullins     m * symmetric Mullins groove             (1)
    amram       m * symmetric Amram groove               (1)
    decaying    y1, y2 on x > 0 and y3, y4 on x < 0      (2 per side)
    general4    z1..z4 on each side                      (4 per side)

Lengths keep the units of the input file, so B is in length_unit^4/s.
"""
from __future__ import annotations

import io
import json
import math
import os
import re
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg
from scipy.optimize import minimize, minimize_scalar

from ._config import thread_count
from .basis import SimilarityCoefficients, basis_matrix
from .errors import (
    DomainError, NoMinimum, NonConvergence, ParseError, QuadratureFailure, RankDeficient,
    TruncationError, UnitError,
)
from .solutions import (
    DecayBasisWeights, PhysicalParams, TwoSidedSolution, amram_coefficients,
    boundary_derivatives, decay_weights_to_z, mullins_coefficients, similarity_scale, y,
)

__all__ = [
    "GrooveProfile", "FitConfig", "FitResult", "ModelRow", "load_profile", "design_matrix",
    "fit_linear", "fit_with_B", "compare_models", "boundary_report", "aicc",
    "MODELS", "SCHEMA", "profile_to_csv",
]

SCHEMA = "groovekit-fit/1"
MODELS = ("flat", "mullins", "amram", "decaying", "general4")
_MODEL_ALIASES = {"general-decaying": "decaying", "general": "general4"}
UNITS = {"nm": 1e-9, "um": 1e-6}
MIN_SIDE_SAMPLES = 8
#: AICc margin within which the model with fewer parameters is preferred.
PARSIMONY_MARGIN = 4.0


@dataclass(frozen=True)
class GrooveProfile:
    x: np.ndarray
    y: np.ndarray
    anneal_time: float
    length_unit: str = "nm"
    height_unit: str = "nm"
    root_hint: float | None = None
    B_hint: float | None = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        yv = np.asarray(self.y, dtype=float)
        if x.shape != yv.shape or x.ndim != 1:
            raise DomainError("x and y must be 1-D arrays of equal length")
        if not self.anneal_time > 0:
            raise DomainError("anneal time must be positive")
        if x.size > 1 and not np.all(np.diff(x) > 0):
            raise DomainError("x must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", yv)

    @property
    def n_samples(self) -> int:
        return int(self.x.size)


@dataclass(frozen=True)
class FitConfig:
    model: str = "general4"
    B: float = 1.0
    fit_B: bool = False
    B_range: tuple[float, float] = (1e-3, 1e3)
    fit_root_offset: bool = False
    continuity_constraint: bool = False
    decay_constraint: bool = False
    grid_points: int = 32

    def __post_init__(self):
        model = _MODEL_ALIASES.get(self.model, self.model)
        if model not in MODELS:
            raise DomainError(f"unknown model {self.model!r}")
        object.__setattr__(self, "model", model)
        if not self.B > 0:
            raise DomainError("B must be positive")
        lo, hi = self.B_range
        if self.fit_B and not (0 < lo < hi):
            raise DomainError("B_range must satisfy 0 < B_min < B_max")
        if self.grid_points < 3:
            raise DomainError("grid_points must be at least 3")

    @property
    def effective_model(self) -> str:
        if self.model == "general4" and self.decay_constraint:
            return "decaying"
        return self.model


class ModelRow(dict):
    """One line of a model-comparison table (a plain dict for JSON)."""


@dataclass
class FitResult:
    model: str
    coeffs: TwoSidedSolution
    boundary_derivatives: dict
    residual_rss: float
    n_samples: int
    n_params: int
    params: np.ndarray
    param_stderr: np.ndarray
    per_param_stderr: np.ndarray  # stderr of (C1+..C4+, C1-..C4-)
    B_estimate: float
    B_bracket: tuple[float, float] | None
    root_offset: float
    aicc: float
    condition_number: float
    anneal_time: float
    model_comparison: list = field(default_factory=list)
    preferred_model: str | None = None

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "model": self.model,
            "anneal_time": self.anneal_time,
            "B_estimate": self.B_estimate,
            "B_bracket": list(self.B_bracket) if self.B_bracket else None,
            "root_offset": self.root_offset,
            "coeffs": {"plus": list(self.coeffs.plus.c), "minus": list(self.coeffs.minus.c)},
            "boundary_derivatives": {k: list(v) for k, v in self.boundary_derivatives.items()},
            "residual_rss": self.residual_rss,
            "n_samples": self.n_samples,
            "n_params": self.n_params,
            "params": self.params.tolist(),
            "param_stderr": self.param_stderr.tolist(),
            "per_param_stderr": self.per_param_stderr.tolist(),
            "aicc": _json_float(self.aicc),
            "condition_number": _json_float(self.condition_number),
            "model_comparison": [{k: _json_float(v) for k, v in row.items()}
                                 for row in self.model_comparison],
            "preferred_model": self.preferred_model,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _json_float(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


# ---------------------------------------------------------------- loading

_HEADER = re.compile(r"^\s*x_([A-Za-z]+)\s*,\s*y_([A-Za-z]+)\s*$")


def load_profile(source) -> GrooveProfile:
    """Read a profile CSV from a path, bytes, or a text/binary stream.

    Layout::

        # t_seconds=3600
        # B_hint=2.5e-3        (optional)
        # root_hint=0.0        (optional)
        x_nm,y_nm              (or x_um,y_um)
        -120.0,0.31
        ...

    Rows may be in increasing or decreasing x order; anything else,
    including repeated x, is an error.
    """
    text = _read_text(source)
    meta = {}
    header = None
    xs, ys = [], []
    data_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, val = body.partition("=")
                meta[key.strip()] = (val.strip(), lineno)
            continue
        if header is None:
            match = _HEADER.match(line)
            if not match:
                raise ParseError(f"expected header 'x_<unit>,y_<unit>', got {line!r}", lineno)
            for unit in match.groups():
                if unit not in UNITS:
                    raise UnitError(f"unknown length unit {unit!r} (use nm or um)", lineno)
            header = match.groups()
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 2 columns, found {len(parts)}", lineno)
        try:
            xv, yv = float(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(f"non-numeric value in {line!r}", lineno) from None
        if not (math.isfinite(xv) and math.isfinite(yv)):
            raise ParseError("non-finite value", lineno)
        xs.append(xv)
        ys.append(yv)
        data_lines.append(lineno)
    if "t_seconds" not in meta:
        raise ParseError("missing '# t_seconds=<value>' metadata row")
    t = _meta_float(meta, "t_seconds")
    if not t > 0:
        raise ParseError("t_seconds must be positive", meta["t_seconds"][1])
    if header is None:
        raise ParseError("missing column header")
    if not xs:
        raise ParseError("no data rows")
    x = np.array(xs)
    yv = np.array(ys)
    if x.size > 1:
        d = np.diff(x)
        if np.all(d < 0):
            x, yv = x[::-1], yv[::-1]
            data_lines = data_lines[::-1]
            d = np.diff(x)
        bad = np.flatnonzero(d <= 0)
        if bad.size:
            k = bad[0]
            kind = "duplicate" if d[k] == 0 else "non-monotone"
            raise ParseError(f"{kind} x value {x[k + 1]!r}", data_lines[k + 1])
    return GrooveProfile(
        x, yv, t, header[0], header[1],
        root_hint=_meta_float(meta, "root_hint") if "root_hint" in meta else None,
        B_hint=_meta_float(meta, "B_hint") if "B_hint" in meta else None,
    )


def _meta_float(meta, key):
    val, lineno = meta[key]
    try:
        return float(val)
    except ValueError:
        raise ParseError(f"metadata {key} is not a number: {val!r}", lineno) from None


def _read_text(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            return fh.read()
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def profile_to_csv(profile: GrooveProfile) -> str:
    buf = io.StringIO()
    buf.write(f"# t_seconds={float(profile.anneal_time)!r}\n")
    if profile.B_hint is not None:
        buf.write(f"# B_hint={float(profile.B_hint)!r}\n")
    if profile.root_hint is not None:
        buf.write(f"# root_hint={float(profile.root_hint)!r}\n")
    buf.write(f"x_{profile.length_unit},y_{profile.height_unit}\n")
    for xv, yv in zip(profile.x, profile.y):
        buf.write(f"{float(xv)!r},{float(yv)!r}\n")
    return buf.getvalue()


# ---------------------------------------------------------------- design

def design_matrix(profile: GrooveProfile, B: float, side: str, offset: float = 0.0,
                  basis: str = "z") -> np.ndarray:
    """Columns for the samples on one side of the root.

    ``basis="z"`` gives (Bt)^(1/4) z_j(x/(Bt)^(1/4)), j = 1..4; ``"decay"``
    gives the two decaying solutions for that side (y1, y2 on the plus
    side, y3, y4 on the minus side), evaluated without cancellation.
    """
    xs = _side_x(profile, side, offset)
    return _columns(xs, profile.anneal_time, B, side, basis)


def _side_x(profile, side, offset):
    x = profile.x - offset
    if side == "plus":
        return x[x > 0]
    if side == "minus":
        return x[x < 0]
    raise DomainError("side must be 'plus' or 'minus'")


def _columns(xs, t, B, side, basis):
    s = similarity_scale(t, B)
    if basis == "z":
        return s * basis_matrix(xs / s) if xs.size else np.zeros((0, 4))
    if basis == "decay":
        params = PhysicalParams(B, 0.0)
        idx = (1, 2) if side == "plus" else (3, 4)
        if not xs.size:
            return np.zeros((0, 2))
        return np.column_stack([np.atleast_1d(y(i, t, xs, params)) for i in idx])
    raise DomainError(f"unknown basis {basis!r}")


def _named_column(x, t, B, model):
    """Profile of the named symmetric solution with m = 1 at nonzero x."""
    params = PhysicalParams(B, 0.0)
    xa = np.abs(x)
    if model == "mullins":
        return (np.atleast_1d(y(1, t, xa, params)) - np.atleast_1d(y(2, t, xa, params))) / (2 * math.sqrt(2))
    return -np.atleast_1d(y(2, t, xa, params)) / math.sqrt(2)


# ---------------------------------------------------------------- linear fit

class _Problem:
    """Assembled linear problem: A theta ~ b plus maps theta -> C+, C-."""

    def __init__(self, profile, B, offset, model, continuity):
        t = profile.anneal_time
        x = profile.x - offset
        keep = x != 0
        x = x[keep]
        self.b = profile.y[keep]
        self.x = x
        plus = x > 0
        minus = x < 0
        n = x.size
        similarity_scale(t, B)  # validates t and B
        if model == "flat":
            self.A = np.zeros((n, 0))
            self.T_plus = np.zeros((4, 0))
            self.T_minus = np.zeros((4, 0))
        elif model in ("mullins", "amram"):
            self.A = _named_column(x, t, B, model)[:, None]
            named = (mullins_coefficients if model == "mullins" else amram_coefficients)(
                _unit_m_params(B))
            self.T_plus = named.plus.as_array()[:, None]
            self.T_minus = named.minus.as_array()[:, None]
        elif model == "decaying":
            A = np.zeros((n, 4))
            _check_side_counts(plus, minus)
            A[plus, 0:2] = _columns(x[plus], t, B, "plus", "decay")
            A[minus, 2:4] = _columns(x[minus], t, B, "minus", "decay")
            self.A = A
            Tp = np.zeros((4, 4))
            Tm = np.zeros((4, 4))
            for k in range(2):
                e = np.zeros(4)
                e[k] = 1.0
                Tp[:, k] = decay_weights_to_z(DecayBasisWeights(e)).as_array()
                e = np.zeros(4)
                e[k + 2] = 1.0
                Tm[:, k + 2] = decay_weights_to_z(DecayBasisWeights(e)).as_array()
            self.T_plus, self.T_minus = Tp, Tm
        else:
            A = np.zeros((n, 8))
            _check_side_counts(plus, minus)
            A[plus, 0:4] = _columns(x[plus], t, B, "plus", "z")
            A[minus, 4:8] = _columns(x[minus], t, B, "minus", "z")
            self.A = A
            self.T_plus = np.hstack([np.eye(4), np.zeros((4, 4))])
            self.T_minus = np.hstack([np.zeros((4, 4)), np.eye(4)])
        self.N = None
        if continuity and model in ("decaying", "general4"):
            g = (self.T_plus[0] - self.T_minus[0])[None, :]
            self.N = scipy.linalg.null_space(g)

    @property
    def n_params(self):
        return self.A.shape[1] if self.N is None else self.N.shape[1]


def _unit_m_params(B):
    return _quiet_params(PhysicalParams, B, 1.0)


_EVAL_FAILURES = (NonConvergence, TruncationError, QuadratureFailure, RankDeficient)


def _check_side_counts(plus, minus):
    for name, mask in (("plus", plus), ("minus", minus)):
        if mask.sum() < MIN_SIDE_SAMPLES:
            raise RankDeficient(f"{name} side has {int(mask.sum())} samples, need {MIN_SIDE_SAMPLES}")


def aicc(rss: float, n: int, k: int) -> float:
    """Corrected AIC, n ln(RSS/n) + 2k + 2k(k+1)/(n-k-1)."""
    if n - k - 1 <= 0:
        return math.inf
    rss = max(rss, 1e-300 * max(n, 1))
    return n * math.log(rss / n) + 2 * k + 2 * k * (k + 1) / (n - k - 1)


def _solve(problem: _Problem):
    A = problem.A if problem.N is None else problem.A @ problem.N
    b = problem.b
    n, p = A.shape
    if p == 0:
        return np.zeros(0), float(b @ b), np.zeros((0, 0)), 1.0
    if n < p:
        raise RankDeficient(f"{n} samples for {p} parameters")
    colnorm = np.linalg.norm(A, axis=0)
    if np.any(colnorm == 0):
        raise RankDeficient("design matrix has an all-zero column")
    As = A / colnorm
    Q, R = np.linalg.qr(As)
    sv = np.linalg.svd(R, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    if sv[-1] <= 1e-13 * sv[0] * max(n, p):
        raise RankDeficient(f"design matrix is rank deficient (condition {cond:.2e})")
    coef_s = scipy.linalg.solve_triangular(R, Q.T @ b)
    coef = coef_s / colnorm
    resid = b - A @ coef
    rss = float(resid @ resid)
    dof = n - p
    sigma2 = rss / dof if dof > 0 else math.nan
    Rinv = scipy.linalg.solve_triangular(R, np.eye(p))
    cov = sigma2 * (Rinv @ Rinv.T) / np.outer(colnorm, colnorm)
    return coef, rss, cov, cond


def _result_from(problem, coef, rss, cov, cond, B, offset, profile, model, bracket=None):
    if problem.N is not None:
        theta = problem.N @ coef
        cov_t = problem.N @ cov @ problem.N.T
    else:
        theta, cov_t = coef, cov
    if theta.size:
        Cp = problem.T_plus @ theta
        Cm = problem.T_minus @ theta
        Tall = np.vstack([problem.T_plus, problem.T_minus])
        covC = Tall @ cov_t @ Tall.T
        stderr_c = np.sqrt(np.clip(np.diag(covC), 0, None))
    else:
        Cp = Cm = np.zeros(4)
        stderr_c = np.zeros(8)
    params = PhysicalParams(B, _clip_m(theta, model))
    sol = TwoSidedSolution(SimilarityCoefficients(Cp), SimilarityCoefficients(Cm), params)
    t = profile.anneal_time
    bd = {"plus": boundary_derivatives(sol.plus, t, params),
          "minus": boundary_derivatives(sol.minus, t, params)}
    n = problem.b.size
    k = problem.n_params
    return FitResult(
        model=model, coeffs=sol, boundary_derivatives=bd, residual_rss=rss,
        n_samples=n, n_params=k, params=np.asarray(coef, dtype=float),
        param_stderr=np.sqrt(np.clip(np.diag(cov), 0, None)) if cov.size else np.zeros(0),
        per_param_stderr=stderr_c, B_estimate=B, B_bracket=bracket,
        root_offset=offset, aicc=aicc(rss, n, k), condition_number=cond,
        anneal_time=t,
    )


def _clip_m(theta, model):
    # PhysicalParams only carries m for the named models
    if model in ("mullins", "amram") and theta.size:
        return float(theta[0])
    return 0.0


def _quiet_params(fn, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args, **kwargs)


def _fit_fixed(profile, B, offset, model, continuity):
    problem = _Problem(profile, B, offset, model, continuity)
    coef, rss, cov, cond = _solve(problem)
    return _quiet_params(_result_from, problem, coef, rss, cov, cond, B, offset, profile, model)


def _rss_at(profile, B, offset, model, continuity):
    problem = _Problem(profile, B, offset, model, continuity)
    return _solve(problem)[1]


def fit_linear(profile: GrooveProfile, B: float, config: FitConfig = FitConfig(),
               offset: float | None = None) -> FitResult:
    """Linear least squares in the coefficients at fixed B.

    Raises
    ------
    RankDeficient
        Fewer than 8 samples on a fitted side or a singular design.
    """
    if not B > 0:
        raise DomainError("B must be positive")
    if offset is None:
        offset = profile.root_hint or 0.0
    if config.fit_root_offset:
        return _fit_offset_only(profile, B, config, offset)
    return _fit_fixed(profile, B, offset, config.effective_model, config.continuity_constraint)


def _fit_offset_only(profile, B, config, start):
    model = config.effective_model
    span = float(profile.x[-1] - profile.x[0])
    res = minimize_scalar(
        lambda x0: _rss_at(profile, B, x0, model, config.continuity_constraint),
        bracket=(start - 0.01 * span, start + 0.01 * span), method="brent")
    return _fit_fixed(profile, B, float(res.x), model, config.continuity_constraint)


def fit_with_B(profile: GrooveProfile, config: FitConfig) -> FitResult:
    """Fit B by a log-spaced grid scan refined with golden-section search.

    With ``fit_root_offset`` the best grid point seeds a Nelder-Mead
    search over (log B, x0).

    Raises
    ------
    NoMinimum
        If the residual is flat in B or its grid minimum lies on the
        edge of ``B_range``.
    """
    if not config.fit_B:
        raise DomainError("fit_with_B needs config.fit_B set")
    model = config.effective_model
    offset0 = profile.root_hint or 0.0
    lo, hi = config.B_range
    grid = np.geomspace(lo, hi, config.grid_points)
    cont = config.continuity_constraint

    def rss_of(B, x0=offset0):
        try:
            return _rss_at(profile, float(B), x0, model, cont)
        except _EVAL_FAILURES:
            # e.g. a tiny trial B pushes u past where the basis can be summed
            return math.inf

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.array(list(pool.map(rss_of, grid)))
    else:
        values = np.array([rss_of(B) for B in grid])
    ok = np.isfinite(values)
    if not ok.any():
        raise NoMinimum("no B in the searched range could be evaluated")
    top = float(np.max(values[ok]))
    if top <= 1e-300 or (top - float(np.min(values[ok]))) <= 1e-12 * top:
        raise NoMinimum("residual does not depend on B over the searched range")
    k = int(np.argmin(np.where(ok, values, math.inf)))
    if k == 0 or k == grid.size - 1 or not (ok[k - 1] and ok[k + 1]):
        raise NoMinimum(f"residual minimum lies at the edge of the usable B range (B={grid[k]:.4g})")
    bracket = (float(grid[k - 1]), float(grid[k + 1]))
    logs = np.log(grid)
    res = minimize_scalar(lambda lb: rss_of(math.exp(lb)),
                          bracket=(logs[k - 1], logs[k], logs[k + 1]),
                          method="golden", options={"xtol": 1e-10})
    B_best = float(math.exp(res.x))
    offset = offset0
    if config.fit_root_offset:
        span = float(profile.x[-1] - profile.x[0])
        nm = minimize(lambda p: rss_of(math.exp(p[0]), p[1]),
                      x0=np.array([math.log(B_best), offset0]), method="Nelder-Mead",
                      options={"xatol": 1e-9, "fatol": 1e-14 * top, "maxiter": 2000,
                               "initial_simplex": np.array([
                                   [math.log(B_best), offset0],
                                   [math.log(B_best) + 0.1, offset0],
                                   [math.log(B_best), offset0 + 0.01 * span]])})
        B_best, offset = float(math.exp(nm.x[0])), float(nm.x[1])
    fit = _fit_fixed(profile, B_best, offset, model, cont)
    fit.B_bracket = bracket
    return fit


def _fit_model(profile, config, model):
    cfg = replace(config, model=model, decay_constraint=False)
    if config.fit_B and model != "flat":  # the flat model has no B dependence
        fit = fit_with_B(profile, cfg)
        fit.n_params += 1
        fit.aicc = aicc(fit.residual_rss, fit.n_samples, fit.n_params)
        return fit
    return fit_linear(profile, config.B, cfg)


def compare_models(profile: GrooveProfile, config: FitConfig = FitConfig(),
                   models=MODELS, margin: float = PARSIMONY_MARGIN):
    """Fit each model and rank them by AICc.

    The preferred model is the one with the fewest parameters whose AICc
    is within `margin` of the best; ties in parameter count go to the
    lower AICc.  Returns ``(rows, preferred, fits)``.
    """
    rows, fits = [], {}
    for model in models:
        try:
            fit = _fit_model(profile, config, model)
        except (RankDeficient, NoMinimum) + _EVAL_FAILURES as exc:
            rows.append(ModelRow(model=model, rss=math.nan, n_params=math.nan,
                                 aicc=math.inf, status=type(exc).__name__))
            continue
        fits[model] = fit
        rows.append(ModelRow(model=model, rss=fit.residual_rss, n_params=fit.n_params,
                             aicc=fit.aicc, B=fit.B_estimate, status="ok"))
    finite = [r for r in rows if math.isfinite(r["aicc"])]
    if not finite:
        raise RankDeficient("no model could be fitted")
    best = min(r["aicc"] for r in finite)
    close = [r for r in finite if r["aicc"] <= best + margin]
    preferred = min(close, key=lambda r: (r["n_params"], r["aicc"]))["model"]
    for r in rows:
        r["delta_aicc"] = r["aicc"] - best if math.isfinite(r["aicc"]) else math.inf
        r["preferred"] = r["model"] == preferred
    for fit in fits.values():
        fit.model_comparison = rows
        fit.preferred_model = preferred
    return rows, preferred, fits


def boundary_report(fit: FitResult, t: float | None = None, B: float | None = None) -> dict:
    """(y, y_x, y_xx, y_xxx) at the root on each side, C_i (Bt)^((2-i)/4) (i-1)!."""
    t = fit.anneal_time if t is None else t
    B = fit.B_estimate if B is None else B
    params = _quiet_params(PhysicalParams, B, 0.0)
    return {"plus": boundary_derivatives(fit.coeffs.plus, t, params),
            "minus": boundary_derivatives(fit.coeffs.minus, t, params)}
