import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle_values as O
from groovekit.basis import SimilarityCoefficients, taylor_coefficients
from groovekit.errors import DomainError
from groovekit.solutions import (
    U_SWITCH, DecayBasisWeights, PhysicalParams, TwoSidedSolution, amram_coefficients,
    amram_solution, boundary_derivatives, classify_asymptotics, coeffs_from_boundary,
    d_matrix, decay_weights_to_z, evaluate, groove_depth, mullins_coefficients,
    mullins_solution, similarity_scale, y, y_derivative, z_to_decay_weights,
)

P = PhysicalParams(1.0, 0.2)
coef = st.floats(min_value=-3, max_value=3, allow_nan=False)
quad4 = st.tuples(coef, coef, coef, coef)


def test_params_validate_and_warn():
    with pytest.raises(DomainError):
        PhysicalParams(0.0, 0.1)
    with pytest.raises(DomainError):
        PhysicalParams(1.0, math.nan)
    with pytest.warns(UserWarning):
        PhysicalParams(1.0, 0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        PhysicalParams(1.0, 0.0)


def test_d_matrix_orthogonality():
    D = d_matrix()
    assert np.max(np.abs(0.5 * D @ D.T - np.eye(4))) < 1e-15


@pytest.mark.parametrize("key", sorted(O.Y))
def test_y_against_mpmath(key):
    i, order, t, x, B = key
    got = y_derivative(i, order, t, x, PhysicalParams(B, 0.1))
    assert got == pytest.approx(O.Y[key], rel=1e-9, abs=1e-13)


@given(x=st.floats(-30, 30), t=st.floats(0.05, 20))
def test_reflection_identities(x, t):
    s = t ** 0.25
    assert abs(y(3, t, x, P) + y(1, t, -x, P)) <= 1e-11 * s
    assert abs(y(4, t, x, P) - y(2, t, -x, P)) <= 1e-11 * s


def test_routes_agree_beyond_switch():
    xs = np.linspace(U_SWITCH + 0.1, 20.0, 15)
    for i in (1, 2):
        for order in (0, 1, 2):
            a = y_derivative(i, order, 1.0, xs, P)
            b = y_derivative(i, order, 1.0, xs, P, route="fourier")
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_switch_is_continuous():
    eps = 1e-12
    for i in (1, 2):
        lo = y(i, 1.0, U_SWITCH - eps, P)
        hi = y(i, 1.0, U_SWITCH + eps, P)
        assert lo == pytest.approx(hi, abs=1e-13)


def test_unknown_route():
    with pytest.raises(DomainError):
        y(1, 1.0, 1.0, P, route="series")


@given(t=st.floats(0.01, 100), B=st.floats(0.1, 10), u=st.floats(-5, 5), i=st.integers(1, 4))
def test_similarity_scaling(t, B, u, i):
    s = similarity_scale(t, B)
    params = PhysicalParams(B, 0.2)
    assert y(i, t, u * s, params) == pytest.approx(s * y(i, 1.0, u, P), rel=1e-12, abs=1e-14 * s)


@given(c=quad4)
def test_decay_weight_round_trip(c):
    back = z_to_decay_weights(decay_weights_to_z(DecayBasisWeights(c))).as_array()
    np.testing.assert_allclose(back, c, atol=1e-14)


@given(c=quad4)
def test_decay_weights_reproduce_profile(c):
    weights = DecayBasisWeights(c)
    C = decay_weights_to_z(weights)
    x = np.array([0.3, 1.2, 2.9])
    direct = sum(ci * y(k + 1, 1.0, x, P) for k, ci in enumerate(c))
    sol = TwoSidedSolution(C, C, P)
    np.testing.assert_allclose(evaluate(sol, 1.0, x), direct, atol=1e-12)


@given(d=quad4, t=st.floats(0.01, 50), B=st.floats(0.1, 10))
def test_boundary_round_trip(d, t, B):
    params = PhysicalParams(B, 0.1)
    C = coeffs_from_boundary(d, t, params)
    np.testing.assert_allclose(boundary_derivatives(C, t, params), d, rtol=1e-13, atol=1e-15)


def test_boundary_derivatives_match_profile_derivatives():
    C = SimilarityCoefficients([0.3, -0.2, 0.5, 0.1])
    params = PhysicalParams(2.0, 0.1)
    t = 3.0
    d = boundary_derivatives(C, t, params)
    s = similarity_scale(t, params.B)
    from groovekit.basis import z_derivative
    for order in range(4):
        direct = s ** (1 - order) * sum(C.c[j] * z_derivative(j + 1, order, 0.0) for j in range(4))
        assert d[order] == pytest.approx(direct, rel=1e-14, abs=1e-16)


@pytest.mark.parametrize("m", [0.05, 0.2, 0.3])
def test_mullins_boundary_conditions(m):
    params = PhysicalParams(1.5, m)
    sol = mullins_coefficients(params)
    d = boundary_derivatives(sol.plus, 2.0, params)
    assert d[1] == pytest.approx(m / 2, abs=1e-14)
    assert abs(d[3]) < 1e-14
    dm = boundary_derivatives(sol.minus, 2.0, params)
    assert dm[1] == pytest.approx(-m / 2, abs=1e-14)
    assert dm[0] == d[0]


@pytest.mark.parametrize("m", [0.05, 0.2, 0.3])
def test_amram_boundary_conditions(m):
    params = PhysicalParams(0.7, m)
    sol = amram_coefficients(params)
    d = boundary_derivatives(sol.plus, 1.0, params)
    assert d[1] == pytest.approx(m / 2, abs=1e-14)
    assert abs(d[2]) < 1e-14


def test_named_solutions_match_coefficient_form():
    x = np.array([-4.0, -0.5, 0.25, 3.0, 9.0])
    for fn, cf in ((mullins_solution, mullins_coefficients), (amram_solution, amram_coefficients)):
        np.testing.assert_allclose(fn(P, 1.3, x), evaluate(cf(P), 1.3, x), atol=1e-13)
        np.testing.assert_array_equal(fn(P, 1.3, x), fn(P, 1.3, -x))


def test_groove_depth_law():
    for m in (0.1, 0.3):
        for B in (0.5, 2.0):
            for t in (1.0, 16.0):
                params = PhysicalParams(B, m)
                expected = -m * (B * t) ** 0.25 / (2 * math.sqrt(2) * O.GAMMA[5])
                assert groove_depth(params, t) == pytest.approx(expected, rel=1e-14)
                assert mullins_solution(params, t, 0.0) == pytest.approx(expected, rel=1e-12)
                assert groove_depth(params, 16 * t) == pytest.approx(2 * groove_depth(params, t), rel=1e-14)
    assert groove_depth(P, 0.0) == 0.0
    with pytest.raises(DomainError):
        groove_depth(P, -1.0)


def test_tilde1_taylor_coefficients():
    # (y1 - y2)/sqrt 2 at t = B = 1 in terms of z coefficients
    C = decay_weights_to_z(DecayBasisWeights((1 / math.sqrt(2), -1 / math.sqrt(2), 0, 0)))
    a = taylor_coefficients(C, 12)
    np.testing.assert_allclose(a[:4], O.TAYLOR_TILDE1, atol=1e-14)


def test_classification():
    ms = mullins_coefficients(P)
    assert classify_asymptotics(ms.plus, "plus").kind == "decaying"
    assert classify_asymptotics(ms.minus, "minus").kind == "decaying"
    grow = classify_asymptotics(SimilarityCoefficients([0, 1, 0, 0]), "plus")
    assert grow.kind == "growing" and set(grow.offending) <= {"c3", "c4"} and grow.offending
    with pytest.raises(DomainError):
        classify_asymptotics(ms.plus, "left")


def test_decay_and_growth_far_out():
    assert abs(y(1, 1.0, 25.0, P)) < 1e-8 and abs(y(2, 1.0, 25.0, P)) < 1e-8
    assert y(3, 1.0, 25.0, P) > 1e3 and y(4, 1.0, 25.0, P) < -1e3


def test_initial_planarity():
    vals = [abs(y(1, t, 2.0, P)) + abs(y(2, t, 2.0, P)) for t in (1e-1, 1e-3, 1e-5)]
    assert vals[0] > vals[1] > vals[2]


def test_evaluate_guards_and_shapes():
    sol = mullins_coefficients(P)
    with pytest.raises(DomainError):
        evaluate(sol, 1.0, 0.0)
    assert isinstance(evaluate(sol, 1.0, 0.5), float)
    assert evaluate(sol, 1.0, np.ones((2, 2))).shape == (2, 2)
    with pytest.raises(DomainError):
        y(5, 1.0, 1.0, P)
    with pytest.raises(DomainError):
        similarity_scale(-1.0, 1.0)


def test_growing_side_uses_series():
    C = SimilarityCoefficients([0.0, 0.0, 1.0, 0.0])
    sol = TwoSidedSolution(C, C, P)
    from groovekit.basis import z
    assert evaluate(sol, 1.0, 3.0) == pytest.approx(z(3, 3.0), rel=1e-14)
