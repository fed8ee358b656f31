import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from rotweingarten import (H2, S2, Ambient, EllipticFunction, PoleError, ProfileState, c_eps,
                           compute_limits, curvatures, eta_eps, normal_vector, s_eps,
                           solve_phi_pp, weingarten_residual)

from conftest import admissible_families
from oracles import brute_force_phi_pp as brute_force

Z = EllipticFunction.zero()
Q1 = EllipticFunction.sqrtshift(1.0)
COTH1 = math.cosh(1.0) / math.sinh(1.0)


def test_ambient_validation():
    with pytest.raises(ValueError):
        Ambient(0)
    assert S2.phi_domain == (0.0, math.pi)
    assert H2.phi_domain == (0.0, math.inf)


def test_equator_values_are_exact():
    assert s_eps(S2, math.pi / 2) == 1.0
    assert c_eps(S2, math.pi / 2) == 0.0
    assert eta_eps(S2, math.pi / 2) == 0.0


def test_eta_examples():
    assert eta_eps(H2, 1.0) == pytest.approx((math.e**2 + 1) / (math.e**2 - 1), rel=1e-15)
    assert eta_eps(S2, math.pi / 4) == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("A,phi", [(S2, 0.0), (S2, math.pi), (S2, 1e-10), (S2, math.pi - 1e-10),
                                   (H2, 0.0), (H2, -1.0), (H2, 5e-10)])
def test_eta_pole_error(A, phi):
    with pytest.raises(PoleError):
        eta_eps(A, phi)


@given(st.floats(1e-6, math.pi - 1e-6))
def test_s_eps_positive_inside_s2(x):
    assert s_eps(S2, x) > 0


@given(st.floats(1e-6, 700.0))
def test_s_eps_positive_inside_h2(x):
    assert s_eps(H2, x) > 0


def test_cylinder_curvatures_vanish():
    c = curvatures(Z, S2, ProfileState(0.0, math.pi / 2, 0.0, 0.0, 1.0), 0.0)
    assert (c.k1, c.k2, c.H, c.Ke) == (0.0, 0.0, 0.0, 0.0)


def test_minimal_neck_curvatures():
    c = curvatures(Z, H2, ProfileState(0.0, 1.0, 0.0, 0.0, 1.0), COTH1)
    assert c.k1 == pytest.approx(-COTH1, rel=1e-15)
    assert c.k2 == pytest.approx(COTH1, rel=1e-15)
    assert c.H == pytest.approx(0.0, abs=1e-15)
    assert c.Ke == pytest.approx(-COTH1**2, rel=1e-15)
    assert c.Ke == pytest.approx(-1.72407, abs=1e-5)


def test_curvatures_need_nonzero_t_p():
    with pytest.raises(ZeroDivisionError):
        curvatures(Z, H2, ProfileState(0.0, 1.0, 1.0, 0.0, 0.0), 0.0)


def test_normal_examples():
    n = normal_vector(S2, ProfileState(0.0, math.pi / 2, 0.0, 0.0, 1.0), 0.0)
    assert np.array_equal(n, [0.0, 0.0, -1.0, -0.0])
    n = normal_vector(H2, ProfileState(0.0, 1.0, 0.0, 0.0, 1.0), 0.0)
    assert n == pytest.approx([math.cosh(1.0), 0.0, -math.sinh(1.0), 0.0], rel=1e-15)


@given(st.floats(0.01, math.pi - 0.01), st.floats(-math.pi, math.pi), st.floats(0.0, 2 * math.pi))
def test_normal_is_unit_in_round_metric(phi, angle, theta):
    st_ = ProfileState(0.0, phi, math.sin(angle), 0.0, math.cos(angle))
    n = normal_vector(S2, st_, theta)
    assert float(n @ n) == pytest.approx(1.0, abs=1e-14)


@given(st.floats(0.01, 20.0), st.floats(-math.pi, math.pi), st.floats(0.0, 2 * math.pi))
def test_normal_is_unit_in_lorentz_metric(phi, angle, theta):
    # the hyperboloid model carries x1^2 + x2^2 - x3^2 + t^2
    st_ = ProfileState(0.0, phi, math.sin(angle), 0.0, math.cos(angle))
    n = normal_vector(H2, st_, theta)
    q = n[0] ** 2 + n[1] ** 2 - n[2] ** 2 + n[3] ** 2
    assert q == pytest.approx(1.0, abs=1e-12 * math.cosh(phi) ** 2)


def test_residual_examples():
    assert weingarten_residual(Z, S2, math.pi / 2, 1.0, 0.0) == 0.0
    assert weingarten_residual(Z, H2, 1.0, 1.0, COTH1) == pytest.approx(0.0, abs=1e-15)
    assert weingarten_residual(Z, H2, 1.0, 1.0, 0.0) == pytest.approx(COTH1 / 2, rel=1e-15)


def test_residual_matches_defining_expression():
    # G = (y^2 eta - z)/(2y) - f(u^2), u = (y^2 eta + z)/(2y)
    F = EllipticFunction.rational(1.2)
    for A, phi in [(S2, 0.7), (S2, 2.1), (H2, 0.4)]:
        for y in (0.3, -0.8):
            for z in (-2.0, 0.1, 3.0):
                eta = eta_eps(A, phi)
                u = (y * y * eta + z) / (2 * y)
                ref = (y * y * eta - z) / (2 * y) - F.param * u * u / (1 + u * u)
                assert weingarten_residual(F, A, phi, y, z) == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_solve_examples():
    assert solve_phi_pp(Z, H2, 1.0, 1.0) == pytest.approx(COTH1, rel=1e-15)
    assert solve_phi_pp(Q1, S2, math.pi / 2, 0.3) == 0.0
    assert solve_phi_pp(Q1, H2, 1.0, 1.0) is None


@given(st.sampled_from([S2, H2]), st.floats(0.05, 3.0), st.floats(-1.0, 1.0))
def test_solve_zero_family_closed_form(A, phi, y):
    assume(abs(y) > 1e-6 and A.contains(phi) and phi < math.pi - 0.05)
    assert solve_phi_pp(Z, A, phi, y) == pytest.approx(y * y * eta_eps(A, phi), rel=1e-13, abs=1e-15)


phis_s2 = st.floats(0.05, math.pi - 0.05)
phis_h2 = st.floats(0.05, 10.0)
ys = st.floats(-1.0, 1.0).filter(lambda y: abs(y) > 1e-4)


def _state(draw_amb, phi_s2, phi_h2):
    return (S2, phi_s2) if draw_amb else (H2, phi_h2)


@given(admissible_families, st.booleans(), phis_s2, phis_h2, ys, st.floats(-50, 50), st.floats(-50, 50))
def test_G_monotone_in_z(F, sphere, p1, p2, y, z1, z2):
    A, phi = _state(sphere, p1, p2)
    assume(abs(z1 - z2) > 1e-6)
    z1, z2 = min(z1, z2), max(z1, z2)
    G1 = weingarten_residual(F, A, phi, y, z1)
    G2 = weingarten_residual(F, A, phi, y, z2)
    assert (G1 > G2) if y > 0 else (G1 < G2)


@given(admissible_families, st.booleans(), phis_s2, phis_h2, ys)
def test_solution_has_small_residual(F, sphere, p1, p2, y):
    A, phi = _state(sphere, p1, p2)
    z = solve_phi_pp(F, A, phi, y)
    assume(z is not None)
    assert abs(weingarten_residual(F, A, phi, y, z)) <= 1e-10


@given(admissible_families, st.booleans(), phis_s2, phis_h2, ys)
def test_sign_dichotomy(F, sphere, p1, p2, y):
    A, phi = _state(sphere, p1, p2)
    z = solve_phi_pp(F, A, phi, y)
    assume(z is not None)
    c = curvatures(F, A, ProfileState(0.0, phi, math.sqrt(1 - y * y), 0.0, y), z)
    assert c.k1 * c.k2 <= 0
    assert c.Ke <= 0
    if c.k1 == c.k2:
        assert c.k1 == 0


@given(admissible_families, phis_h2, ys)
def test_h2_convexity(F, phi, y):
    z = solve_phi_pp(F, H2, phi, y)
    assume(z is not None)
    assert z > 0


@given(admissible_families, phis_s2, ys)
def test_s2_inflection_sign(F, phi, y):
    z = solve_phi_pp(F, S2, phi, y)
    assume(z is not None)
    # this holds for either sign of t', not only t' > 0
    assert np.sign(z) == np.sign(math.pi / 2 - phi)


def test_solve_none_exactly_when_gate_closed():
    lim = compute_limits(Q1)
    lo, hi = lim.g_bar_range
    for phi in np.linspace(0.2, 3.0, 30):
        for y in (1.0, 0.5, -0.5, -1.0):
            w = y * eta_eps(H2, float(phi))
            z = solve_phi_pp(Q1, H2, float(phi), y)
            assert (z is None) == (not lo < w < hi)


def grid_20x20(A, seed):
    rng = np.random.default_rng(seed)
    hi = math.pi - 0.05 if A.epsilon == 1 else 6.0
    phis = np.sort(rng.uniform(0.05, hi, 20))
    ys = rng.uniform(-1.0, 1.0, 20)
    ys = np.where(np.abs(ys) < 1e-3, 0.5, ys)
    return phis, ys


@pytest.mark.parametrize("A", [S2, H2], ids=["S2", "H2"])
@pytest.mark.parametrize("F", [Z, EllipticFunction.rational(1.5), EllipticFunction.rational(-1.2),
                               Q1, EllipticFunction.sqrtshift(-1.0), EllipticFunction.sqrtshift(0.4)],
                         ids=str)
def test_brute_force_equivalence(F, A):
    phis, ys = grid_20x20(A, 7)
    for phi in phis:
        for y in ys:
            z = solve_phi_pp(F, A, float(phi), float(y))
            ref = brute_force(F, A, float(phi), float(y))
            if z is None:
                assert ref is None
                continue
            assert ref is not None
            assert abs(z - ref) <= 1e-8 * max(1.0, abs(ref))
            assert abs(weingarten_residual(F, A, float(phi), float(y), z)) <= 1e-10
