import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from conftest import random_ball
from poincare_linear.geometry import (
    DomainError,
    Hyperplane,
    conformal_factor,
    dist_to_hyperplane,
    dist_to_hyperplane_tangent,
    distance,
    eta_weight,
    exp_map,
    geodesic_point,
    hyperplane_side,
    log_map,
    mobius_add,
    mobius_scalar_mul,
)


def naive_mobius_add(x, y):
    """Scalar-loop version of gyrovector addition used as an oracle."""
    xy = sum(a * b for a, b in zip(x, y))
    x2 = sum(a * a for a in x)
    y2 = sum(b * b for b in y)
    den = 1 + 2 * xy + x2 * y2
    return [((1 + 2 * xy + y2) * a + (1 - x2) * b) / den for a, b in zip(x, y)]


# --- Mobius addition -------------------------------------------------------


def test_mobius_add_identity_and_inverse(rng):
    x = random_ball(rng, 1000, 3, 0.99)
    zero = np.zeros_like(x)
    assert_allclose(mobius_add(x, zero), x, atol=1e-12)
    assert_allclose(mobius_add(zero, x), x, atol=1e-12)
    assert_allclose(mobius_add(-x, x), zero, atol=1e-12)


def test_mobius_add_collinear_is_velocity_addition():
    assert_allclose(mobius_add([0.5, 0.0], [0.25, 0.0]), [2 / 3, 0.0], rtol=1e-14)
    assert_allclose(naive_mobius_add([0.5, 0.0], [0.25, 0.0]), [2 / 3, 0.0], rtol=1e-14)


def test_mobius_add_matches_scalar_oracle(rng):
    x = random_ball(rng, 50, 4, 0.95)
    y = random_ball(rng, 50, 4, 0.95)
    expected = np.array([naive_mobius_add(a, b) for a, b in zip(x.tolist(), y.tolist())])
    assert_allclose(mobius_add(x, y), expected, rtol=1e-12, atol=1e-14)


def test_mobius_add_errors():
    with pytest.raises(ValueError):
        mobius_add([0.1, 0.2], [0.1, 0.2, 0.3])
    with pytest.raises(DomainError):
        mobius_add([1.0, 0.0], [0.0, 0.0])


def test_mobius_add_stays_inside_near_boundary():
    x = np.array([1 - 1e-14, 0.0])
    out = mobius_add(x, x)
    assert np.linalg.norm(out) < 1.0


# --- scalar multiplication -------------------------------------------------


def test_scalar_mul_examples():
    assert_array_equal(mobius_scalar_mul(3.0, [0.0, 0.0]), [0.0, 0.0])
    assert_allclose(mobius_scalar_mul(1.0, [0.3, -0.4]), [0.3, -0.4], rtol=1e-14)
    assert_allclose(mobius_scalar_mul(2.0, [0.5, 0.0]), [0.8, 0.0], rtol=1e-14)
    assert_allclose(math.tanh(2 * math.atanh(0.5)), 2 * 0.5 / 1.25, rtol=1e-15)


def test_scalar_mul_domain_error():
    with pytest.raises(DomainError):
        mobius_scalar_mul(0.5, [0.8, 0.8])


# --- distance --------------------------------------------------------------


def test_distance_examples():
    assert distance([0.3, 0.1], [0.3, 0.1]) == 0.0
    assert_allclose(distance([0.0, 0.0], [0.5, 0.0]), math.log(3.0), rtol=1e-14)


def test_distance_is_a_metric(rng):
    x, y, z = (random_ball(rng, 2000, 3, 0.95) for _ in range(3))
    dxy, dyx = distance(x, y), distance(y, x)
    assert_allclose(dxy, dyx, rtol=1e-12)
    assert np.all(dxy >= 0)
    assert np.all(distance(x, z) <= dxy + distance(y, z) + 1e-12)


def test_distance_matches_arccosh_form(rng):
    # independent closed form: cosh d = 1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))
    x, y = random_ball(rng, 500, 5, 0.9), random_ball(rng, 500, 5, 0.9)
    num = 2 * np.sum((x - y) ** 2, axis=1)
    den = (1 - np.sum(x * x, axis=1)) * (1 - np.sum(y * y, axis=1))
    assert_allclose(distance(x, y), np.arccosh(1 + num / den), rtol=1e-9)


# --- geodesics -------------------------------------------------------------


def test_geodesic_endpoints_and_midpoint(rng):
    x, y = random_ball(rng, 200, 3, 0.95), random_ball(rng, 200, 3, 0.95)
    assert_allclose(geodesic_point(x, y, 0.0), x, atol=1e-12)
    assert_allclose(geodesic_point(x, y, 1.0), y, atol=1e-9)
    m = geodesic_point(x, y, 0.5)
    assert_allclose(distance(x, m), distance(m, y), rtol=1e-9)


@pytest.mark.parametrize("t", [0.1, 0.37, 0.8])
def test_geodesic_constant_speed(rng, t):
    x, y = random_ball(rng, 200, 2, 0.95), random_ball(rng, 200, 2, 0.95)
    assert_allclose(distance(x, geodesic_point(x, y, t)), t * distance(x, y), rtol=1e-9, atol=1e-12)


def test_geodesic_rejects_extrapolation():
    with pytest.raises(ValueError):
        geodesic_point([0.1, 0.0], [0.0, 0.1], 1.5)


# --- exp / log -------------------------------------------------------------


def test_exp_log_examples():
    p = np.array([0.2, -0.3])
    assert_array_equal(exp_map(p, [0.0, 0.0]), p)
    assert_array_equal(log_map(p, p), [0.0, 0.0])
    v = np.array([0.7, -1.1])
    n = np.linalg.norm(v)
    assert_allclose(exp_map([0.0, 0.0], v), math.tanh(n) * v / n, rtol=1e-14)
    assert_allclose(log_map([0.0, 0.0], [0.6, 0.0]), [math.atanh(0.6), 0.0], rtol=1e-14)
    assert_allclose(math.atanh(0.6), 0.6931471805599453, rtol=1e-15)


def test_exp_log_round_trips(rng):
    p = random_ball(rng, 2000, 4, 0.9)
    x = random_ball(rng, 2000, 4, 0.95)
    assert_allclose(exp_map(p, log_map(p, x)), x, rtol=1e-9, atol=1e-9)
    v = log_map(p, x)
    assert_allclose(log_map(p, exp_map(p, v)), v, rtol=1e-9, atol=1e-9)


def test_log_norm_relates_to_distance(rng):
    p, x = random_ball(rng, 300, 3, 0.9), random_ball(rng, 300, 3, 0.95)
    v = log_map(p, x)
    assert_allclose(conformal_factor(p) * np.linalg.norm(v, axis=1), distance(p, x), rtol=1e-9)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(-0.6, 0.6), min_size=2, max_size=2),
    st.lists(st.floats(-0.6, 0.6), min_size=2, max_size=2),
)
def test_exp_log_inverse_property(p, x):
    assert_allclose(exp_map(p, log_map(p, x)), x, atol=1e-9)


# --- hyperplanes -----------------------------------------------------------


def test_hyperplane_validation():
    with pytest.raises(ValueError):
        Hyperplane([0.1, 0.1], [0.0, 0.0])
    with pytest.raises(ValueError):
        Hyperplane([0.1, 0.1], [1.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        Hyperplane([1.0, 0.0], [1.0, 0.0])


def test_dist_to_hyperplane_examples():
    h = Hyperplane([0.0, 0.0], [1.0, 0.0])
    assert_allclose(dist_to_hyperplane([0.5, 0.0], h), math.asinh(4 / 3), rtol=1e-14)
    assert_allclose(dist_to_hyperplane([0.5, 0.0], h), math.log(3.0), rtol=1e-14)
    assert dist_to_hyperplane([0.0, 0.7], h) == 0.0


def test_point_on_hyperplane_has_zero_distance(rng):
    p = np.array([0.3, -0.2])
    w = np.array([0.6, 0.8])
    h = Hyperplane(p, w)
    x = exp_map(p, np.array([-0.8, 0.6]) * 0.7)
    assert_allclose(dist_to_hyperplane(x, h), 0.0, atol=1e-12)
    assert hyperplane_side(p, h) == 0


def test_two_distance_forms_agree(rng):
    for _ in range(1000):
        d = int(rng.integers(2, 6))
        p = random_ball(rng, 1, d, 0.9)[0]
        x = random_ball(rng, 1, d, 0.95)[0]
        h = Hyperplane(p, rng.standard_normal(d))
        a = dist_to_hyperplane(x, h)
        b = dist_to_hyperplane_tangent(log_map(p, x), h)
        assert_allclose(a, b, rtol=1e-9, atol=1e-13)


def test_tangent_distance_zero_cases():
    h = Hyperplane([0.2, 0.1], [1.0, 0.0])
    assert dist_to_hyperplane_tangent([0.0, 0.0], h) == 0.0
    assert dist_to_hyperplane_tangent([0.0, 2.5], h) == 0.0


def test_eta_weight(rng):
    assert eta_weight(np.zeros(3), np.zeros(3)) == 0.0
    v = log_map([0.0, 0.0], [0.6, 0.0])
    expected = 2 * 0.6 / ((1 - 0.36) * math.atanh(0.6))
    assert_allclose(eta_weight(v, [0.0, 0.0]), expected, rtol=1e-14)
    assert_allclose(expected, 2.705, atol=5e-4)
    # eta * |<v, w>| with unit w is the sinh argument of the tangent-form distance
    p = random_ball(rng, 400, 3, 0.9)
    v = log_map(p, random_ball(rng, 400, 3, 0.95))
    w = rng.standard_normal(3)
    w /= np.linalg.norm(w)
    for pi, vi in zip(p, v):
        h = Hyperplane(pi, w)
        assert_allclose(np.arcsinh(eta_weight(vi, pi) * abs(vi @ w)), dist_to_hyperplane_tangent(vi, h), rtol=1e-9)


def test_eta_equals_sinh_form(rng):
    p = random_ball(rng, 300, 4, 0.9)
    v = 0.5 * rng.standard_normal((300, 4))
    n = np.linalg.norm(v, axis=1)
    assert_allclose(eta_weight(v, p), np.sinh(conformal_factor(p) * n) / n, rtol=1e-9)


def test_hyperplane_side(rng):
    p = np.array([0.1, 0.4])
    w = np.array([1.0, -2.0])
    h, h_scaled = Hyperplane(p, w), Hyperplane(p, 7.5 * w)
    x = random_ball(rng, 500, 2, 0.95)
    s = hyperplane_side(x, h)
    assert_array_equal(s, hyperplane_side(x, h_scaled))
    assert_array_equal(s, np.sign(mobius_add(-p, x) @ w))


# --- supremum of |a (+) b| over a ball --------------------------------------


def test_mobius_norm_maximized_along_a(rng):
    R = 0.8
    for _ in range(20):
        a = random_ball(rng, 1, 3, 0.9)[0]
        b_star = R * a / np.linalg.norm(a)
        best = np.linalg.norm(mobius_add(a, b_star))
        b = random_ball(rng, 10_000, 3, R)
        assert np.linalg.norm(mobius_add(a, b), axis=1).max() <= best + 1e-3
        # the closed-form supremum (|a| + R) / (1 + |a| R)
        na = np.linalg.norm(a)
        assert_allclose(best, (na + R) / (1 + na * R), rtol=1e-12)
