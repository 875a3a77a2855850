"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL`` line with the measured
quantity, its tolerance and the runtime.
"""
import math
import time
import warnings

import numpy as np
import pytest

from groovekit import transforms as T
from groovekit.basis import SimilarityCoefficients, ode_residual, taylor_coefficients, z_derivative
from groovekit.fitting import FitConfig, GrooveProfile, compare_models, fit_linear, fit_with_B
from groovekit.hypergeom import gamma_rational
from groovekit.pde_oracle import GridSpec, RootBoundaryCondition, measure_depth_exponent, solve
from groovekit.solutions import (
    DecayBasisWeights, PhysicalParams, TwoSidedSolution, amram_coefficients,
    boundary_derivatives, d_matrix, decay_weights_to_z, evaluate, groove_depth,
    mullins_coefficients, mullins_solution, similarity_scale, y, y_derivative,
)

G14, G34, G54 = (gamma_rational((k, 4)) for k in (1, 3, 5))


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail, elapsed):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}  {detail}  ({elapsed:.2f} s)")
    return emit


class _Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_01_kronecker_identity(report):
    with _Clock() as clk:
        err = max(abs(z_derivative(i, j - 1, 0.0) - (math.factorial(j - 1) if i == j else 0.0))
                  for i in range(1, 5) for j in range(1, 5))
    ok = err < 1e-12 and clk.elapsed < 1.0
    report(1, ok, f"max |z_i^(j-1)(0) - delta_ij (j-1)!| = {err:.1e} (< 1e-12)", clk.elapsed)
    assert ok


def test_criterion_02_ode_residual(report):
    u = np.linspace(-8, 8, 33)
    with _Clock() as clk:
        err = 0.0
        for i in range(1, 5):
            c = [0.0] * 4
            c[i - 1] = 1.0
            err = max(err, float(np.max(np.abs(ode_residual(SimilarityCoefficients(c), u)))))
    ok = err < 1e-9 and clk.elapsed < 1.0
    report(2, ok, f"max |Z'''' - uZ'/4 + Z/4| on 33 points of [-8, 8] = {err:.1e} (< 1e-9)", clk.elapsed)
    assert ok


def test_criterion_03_matrix_identity(report):
    with _Clock() as clk:
        D = d_matrix()
        err = float(np.max(np.abs(0.5 * D @ D.T - np.eye(4))))
    ok = err < 1e-15
    report(3, ok, f"||D D^T / 2 - I||_max = {err:.1e} (< 1e-15)", clk.elapsed)
    assert ok


def test_criterion_04_groove_depth_law(report):
    with _Clock() as clk:
        worst_rel, worst_scale = 0.0, 0.0
        for m in (0.1, 0.3):
            for B in (0.5, 2.0):
                for t in (1.0, 16.0):
                    params = PhysicalParams(B, m)
                    exact = -m * (B * t) ** 0.25 / (2 * math.sqrt(2) * G54)
                    root = boundary_derivatives(mullins_coefficients(params).plus, t, params)[0]
                    direct = float(mullins_solution(params, t, 0.0))
                    worst_rel = max(worst_rel, abs(root - exact) / abs(exact), abs(direct - exact) / abs(exact))
                    later = boundary_derivatives(mullins_coefficients(params).plus, 16 * t, params)[0]
                    worst_scale = max(worst_scale, abs(later - 2 * root) / abs(root),
                                      abs(groove_depth(params, 16 * t) - 2 * groove_depth(params, t))
                                      / abs(groove_depth(params, t)))
    ok = worst_rel < 1e-12 and worst_scale < 1e-13
    report(4, ok, f"depth rel err {worst_rel:.1e} (< 1e-12); |d(16t) - 2 d(t)|/|d| {worst_scale:.1e} (< 1e-13)",
           clk.elapsed)
    assert ok


def test_criterion_05_named_boundary_conditions(report):
    t = 1.7
    with _Clock() as clk:
        err = 0.0
        for m in (0.05, 0.2, 0.3):
            for B in (0.5, 1.0, 3.0):
                params = PhysicalParams(B, m)
                dm = boundary_derivatives(mullins_coefficients(params).plus, t, params)
                da = boundary_derivatives(amram_coefficients(params).plus, t, params)
                # the same derivatives straight from the decay basis at the root
                k = m / (2 * math.sqrt(2))
                sm = [k * (y_derivative(1, r, t, 0.0, params) - y_derivative(2, r, t, 0.0, params)) for r in (1, 3)]
                sa = [-(m / math.sqrt(2)) * y_derivative(2, r, t, 0.0, params) for r in (1, 2)]
                err = max(err, abs(dm[1] - m / 2), abs(dm[3]), abs(da[1] - m / 2), abs(da[2]),
                          abs(sm[0] - m / 2), abs(sm[1]), abs(sa[0] - m / 2), abs(sa[1]))
    ok = err < 1e-10
    report(5, ok, f"max deviation of y_x = m/2, y_xxx = 0 (Mullins), y_xx = 0 (Amram) = {err:.1e} (< 1e-10)",
           clk.elapsed)
    assert ok


def test_criterion_06_reflection_identities(report):
    with _Clock() as clk:
        worst = 0.0
        for t, B in ((1.0, 1.0), (0.2, 3.0), (9.0, 0.4)):
            params = PhysicalParams(B, 0.2)
            s = similarity_scale(t, B)
            x = np.linspace(-6, 6, 121) * s
            e3 = np.max(np.abs(y(3, t, x, params) + y(1, t, -x, params)))
            e4 = np.max(np.abs(y(4, t, x, params) - y(2, t, -x, params)))
            worst = max(worst, float(max(e3, e4)) / s)
    ok = worst < 1e-11
    report(6, ok, f"max reflection defect / (Bt)^(1/4) on u in [-6, 6] = {worst:.1e} (< 1e-11)", clk.elapsed)
    assert ok


def test_criterion_07_transform_cross_validation(report):
    params = PhysicalParams(1.0, 0.2)
    with _Clock() as clk:
        lap = 0.0
        for t in (0.5, 1.0, 2.0, 4.0, 8.0):
            for x in (0.25, 1.0, 2.5, 4.0):
                for i in (1, 2):
                    ref = y(i, t, x, params)
                    lap = max(lap, abs(T.inverse_laplace(i, t, x, 1.0) - ref) / abs(ref))
        root = max(abs(T.fourier_y2(1.0, 0.0) - 2 / math.sqrt(math.pi) * G34),
                   abs(T.fourier_y2(1.0, 0.0, x_derivative=2) + 2 / math.sqrt(math.pi) * G54))
        band = 0.0
        for u in np.linspace(0.5, 6.0, 23):
            y1, y2 = y(1, 1.0, u, params), y(2, 1.0, u, params)
            band = max(band, abs(T.fourier_y1(1.0, u) - (y1 - y2) / math.sqrt(2)),
                       abs(T.fourier_y2(1.0, u) - math.sqrt(math.pi) * (y1 + y2) / math.sqrt(2)))
    ok = lap < 1e-7 and root < 1e-8 and band < 1e-7 and clk.elapsed < 30
    report(7, ok, f"series vs Laplace rel {lap:.1e} (< 1e-7); root identities {root:.1e} (< 1e-8); "
                  f"Fourier band {band:.1e} (< 1e-7)", clk.elapsed)
    assert ok


def test_criterion_08_taylor_coefficients(report):
    with _Clock() as clk:
        r2 = math.sqrt(2)
        C = decay_weights_to_z(DecayBasisWeights((1 / r2, -1 / r2, 0.0, 0.0)))
        a = taylor_coefficients(C, 16)
        expected = [-(2 / math.pi) * G34, 1.0, -G14 / (4 * math.pi), 0.0]
        head = max(abs(a[k] - expected[k]) for k in range(4))
        rec = 0.0
        for n in range(0, 9):  # a_4 .. a_12
            rhs = (n - 1) * a[n] / (4 * (n + 1) * (n + 2) * (n + 3) * (n + 4))
            rec = max(rec, abs(a[n + 4] - rhs))
    ok = head < 1e-12 and rec < 1e-13
    report(8, ok, f"a0..a3 err {head:.1e} (< 1e-12); recursion residual for a4..a12 {rec:.1e} (< 1e-13)",
           clk.elapsed)
    assert ok


def test_criterion_09_asymptotics(report):
    params = PhysicalParams(1.0, 0.2)
    with _Clock() as clk:
        decay = max(abs(y(1, 1.0, 25.0, params, route="fourier")), abs(y(2, 1.0, 25.0, params, route="fourier")))
        y3, y4 = y(3, 1.0, 25.0, params), y(4, 1.0, 25.0, params)
        planar = [abs(y(1, t, 2.0, params)) + abs(y(2, t, 2.0, params)) for t in (1e-1, 1e-3, 1e-5)]
    ok = decay < 1e-8 and y3 > 1e3 and y4 < -1e3 and planar[0] > planar[1] > planar[2]
    report(9, ok, f"|y1|,|y2| at x=25 <= {decay:.1e} (< 1e-8); y3 = {y3:.1e}, y4 = {y4:.1e}; "
                  f"planarity {['%.1e' % v for v in planar]}", clk.elapsed)
    assert ok


def test_criterion_10_pde_oracle(report):
    params = PhysicalParams(1.0, 0.2)
    bc = RootBoundaryCondition.for_params("mullins", params)
    with _Clock() as clk:
        errs = []
        for n in (120, 240, 480, 960):
            dx = 24.0 / n
            res = solve(GridSpec(24.0, n, dx / 10, 1.0), bc, params)
            errs.append(float(np.max(np.abs(res.profiles[-1] - mullins_solution(params, 1.0, res.x)))))
        orders = [math.log2(errs[k] / errs[k + 1]) for k in range(len(errs) - 1)]
        keep = res.depth_t >= 0.1
        expo = measure_depth_exponent(np.column_stack([res.depth_t[keep], res.depth[keep]]))
        prefactor = res.depth[-1] / res.depth_t[-1] ** 0.25
        exact = groove_depth(params, 1.0)
        pref_err = abs(prefactor - exact) / abs(exact)
    ok = abs(expo - 0.25) <= 0.01 and pref_err < 0.01 and min(orders[-2:]) >= 1.8 and clk.elapsed < 60
    report(10, ok, f"exponent {expo:.4f} (0.25 +/- 0.01); prefactor rel err {pref_err:.1e} (< 1e-2); "
                   f"L_inf errors {['%.1e' % e for e in errs]}, orders {['%.2f' % o for o in orders]} (>= 1.8)",
           clk.elapsed)
    assert ok


def test_criterion_11_fitting_pipeline(report):
    rng = np.random.default_rng(20261014)
    params = PhysicalParams(1.0, 0.2)
    x = np.concatenate([-np.linspace(5, 0.08, 64), np.linspace(0.08, 5, 64)])
    t = 1.0

    def profile(sol, noise=0.0):
        clean = evaluate(sol, t, x)
        return GrooveProfile(x, clean + noise * np.max(np.abs(clean)) * rng.standard_normal(x.size), t)

    with _Clock() as clk:
        worst = 0.0
        for _ in range(50):
            Cp, Cm = rng.uniform(-1, 1, 4), rng.uniform(-1, 1, 4)
            sol = TwoSidedSolution(SimilarityCoefficients(Cp), SimilarityCoefficients(Cm), params)
            fit = fit_linear(profile(sol), 1.0, FitConfig())
            worst = max(worst,
                        np.max(np.abs(fit.coeffs.plus.as_array() - Cp)) / np.max(np.abs(Cp)),
                        np.max(np.abs(fit.coeffs.minus.as_array() - Cm)) / np.max(np.abs(Cm)))

        correct, trials = 0, 0
        kinds = ["mullins", "amram", "general"]
        for k in range(200):
            kind = kinds[k % 3]
            if kind == "mullins":
                sol = mullins_coefficients(params)
            elif kind == "amram":
                sol = amram_coefficients(params)
            else:
                c = rng.uniform(-1, 1, 4)
                sol = TwoSidedSolution(decay_weights_to_z(DecayBasisWeights((c[0], c[1], 0, 0))),
                                       decay_weights_to_z(DecayBasisWeights((0, 0, c[2], c[3]))), params)
            _, preferred, _ = compare_models(profile(sol, 0.01), FitConfig())
            hit = preferred == kind or (kind == "general" and preferred in ("decaying", "general4"))
            correct += hit
            trials += 1
        rate = correct / trials

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            target = PhysicalParams(2.5, 0.2)
            prof = GrooveProfile(x, mullins_solution(target, t, x), t)
            fitB = fit_with_B(prof, FitConfig(model="mullins", fit_B=True, B_range=(0.1, 50)))
        B_err = abs(fitB.B_estimate - 2.5) / 2.5
    ok = worst < 1e-7 and rate >= 0.95 and B_err < 0.02 and clk.elapsed < 120
    report(11, ok, f"noiseless coeff rel err {worst:.1e} (< 1e-7); model choice {correct}/{trials} = {rate:.3f} "
                   f"(>= 0.95); B = {fitB.B_estimate:.6f} rel err {B_err:.1e} (< 2e-2)", clk.elapsed)
    assert ok
