import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from hyperball import oracle
from hyperball.domains import BallWeight, Sphere, WeightedBall, ball_mass, sphere_area


def test_graded_indices_order():
    idx = oracle.graded_multi_indices(2, 2)
    assert idx == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert len(oracle.graded_multi_indices(3, 4)) == math.comb(3 + 4, 4)


@pytest.mark.parametrize("beta,dim,expected", [
    ((0, 0, 0), 2, 4 * math.pi),
    ((2, 0, 0), 2, 4 * math.pi / 3),
    ((1, 0, 0), 2, 0.0),
    ((0, 0), 1, 2 * math.pi),
    ((2, 0), 1, math.pi),
])
def test_sphere_moments(beta, dim, expected):
    assert oracle.monomial_sphere_integral(beta, dim) == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_sphere_moment_against_dense_product_rule():
    # S^3 in hyperspherical angles; Gauss-Legendre in each angle with the Jacobian
    x1, w1 = special.roots_legendre(60)
    th1 = (x1 + 1) * math.pi / 2
    th2 = th1
    phi = 2 * math.pi * np.arange(64) / 64
    T1, T2, P = np.meshgrid(th1, th2, phi, indexing="ij")
    W = (w1 * math.pi / 2)[:, None, None] * (w1 * math.pi / 2)[None, :, None] * (2 * math.pi / 64)
    jac = np.sin(T1) ** 2 * np.sin(T2)
    y1 = np.cos(T1)
    y2 = np.sin(T1) * np.cos(T2)
    val = np.sum(W * jac * y1 ** 2 * y2 ** 2)
    assert oracle.monomial_sphere_integral((2, 2, 0, 0), 3) == pytest.approx(val, rel=1e-12)


def test_sphere_moment_length_mismatch():
    with pytest.raises(ValueError):
        oracle.monomial_sphere_integral((0, 0), 2)


@pytest.mark.parametrize("beta,d,m,expected", [
    ((0, 0), 2, 1, math.pi),
    ((2, 0), 2, 1, math.pi / 4),
    ((2,), 1, 1, 2.0 / 3.0),
    ((1, 0), 2, 3, 0.0),
])
def test_ball_moments(beta, d, m, expected):
    assert oracle.monomial_ball_integral(beta, BallWeight(d, m)) == pytest.approx(expected, rel=1e-14, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 3), m=st.integers(1, 4), data=st.data())
def test_ball_moment_two_routes_agree(d, m, data):
    beta = tuple(data.draw(st.lists(st.integers(0, 6), min_size=d, max_size=d)))
    w = BallWeight(d, m)
    a = oracle.monomial_ball_integral(beta, w)
    b = oracle.monomial_ball_integral_via_sphere(beta, w)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("d,m", [(1, 1), (2, 1), (2, 3), (3, 1), (4, 2)])
def test_ball_mass_is_constant_moment(d, m):
    w = BallWeight(d, m)
    assert ball_mass(w) == pytest.approx(oracle.monomial_ball_integral((0,) * d, w), rel=1e-14)


def test_ball_mass_closed_forms():
    assert ball_mass(BallWeight(3, 1)) == pytest.approx(4 * math.pi / 3)
    # (B^1, w_1) is the semicircle weight sqrt(1 - x^2)
    assert ball_mass(BallWeight(1, 2)) == pytest.approx(math.pi / 2)
    assert sphere_area(3) == pytest.approx(2 * math.pi ** 2)


@pytest.mark.parametrize("domain,degree,dims", [
    (WeightedBall(BallWeight(1, 1)), 2, (1, 1, 1)),
    (WeightedBall(BallWeight(2, 1)), 3, (1, 2, 3, 4)),
    (WeightedBall(BallWeight(3, 1)), 3, (1, 3, 6, 10)),
    (Sphere(2), 3, (1, 3, 5, 7)),
    (Sphere(3), 3, (1, 4, 9, 16)),
])
def test_onb_slice_dimensions(domain, degree, dims):
    assert oracle.build_onb(domain, degree).slice_dims() == dims


@pytest.mark.parametrize("domain", [WeightedBall(BallWeight(2, 3)), Sphere(2)])
def test_onb_is_orthonormal_under_exact_moments(domain):
    basis = oracle.build_onb(domain, 4)
    assert basis.gram_tolerance < 1e-12
    n = len(basis.exponents)
    gram = np.empty((n, n))
    for i, a in enumerate(basis.exponents):
        for j, b in enumerate(basis.exponents):
            gram[i, j] = oracle.monomial_integral(tuple(p + q for p, q in zip(a, b)), domain)
    G = basis.coeffs @ gram @ basis.coeffs.T
    np.testing.assert_allclose(G, np.eye(len(G)), atol=1e-11)


def test_onb_constant_kernel_is_inverse_mass():
    w = BallWeight(2, 3)
    basis = oracle.build_onb(WeightedBall(w), 2)
    x, y = np.array([0.1, -0.3]), np.array([0.5, 0.2])
    assert oracle.onb_reproducing_kernel(basis, 0, x, y) == pytest.approx(1 / ball_mass(w), rel=1e-13)


def test_onb_limits():
    with pytest.raises(oracle.OracleError):
        oracle.build_onb(WeightedBall(BallWeight(2, 1)), oracle.MAX_ONB_DEGREE + 1)
    with pytest.raises(oracle.OracleError):
        oracle.build_onb(Sphere(4), 2)
    basis = oracle.build_onb(Sphere(2), 2)
    with pytest.raises(ValueError):
        oracle.onb_kernel(basis, 3, np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))


def test_onb_kernel_pairwise_shapes():
    basis = oracle.build_onb(WeightedBall(BallWeight(2, 1)), 3)
    X = np.array([[0.1, 0.2], [0.0, -0.5], [0.3, 0.3]])
    out = oracle.onb_reproducing_kernel(basis, 3, X, X[::-1])
    assert out.shape == (3,)
    assert out[0] == pytest.approx(out[2])
