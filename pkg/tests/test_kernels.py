import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_ball_points
from hyperball import oracle
from hyperball.cubature import CubatureError, CubatureRule, circle_rule, sphere_rule
from hyperball.domains import BallWeight, Sphere, WeightedBall, ball_mass
from hyperball.kernels import (
    BallKernelSpec,
    SphereKernelSpec,
    ball_kernel,
    ball_kernel_matrix,
    ball_projection_kernel,
    complement_point,
    sphere_kernel,
    sphere_kernel_matrix,
    sphere_projection_kernel,
)


def _unit(rng, dim, k):
    v = rng.normal(size=(k, dim + 1))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def test_sphere_kernel_small_values():
    assert sphere_kernel(SphereKernelSpec(2, 0), 0.37) == pytest.approx(1 / (4 * math.pi))
    assert sphere_projection_kernel(SphereKernelSpec(2, 0), -0.2) == pytest.approx(1 / (4 * math.pi))
    assert sphere_projection_kernel(SphereKernelSpec(2, 1), 1.0) == pytest.approx(3 / (4 * math.pi))
    assert sphere_kernel(SphereKernelSpec(2, 3), 1.0) == pytest.approx(16 / (4 * math.pi))


@pytest.mark.parametrize("dim,n", [(2, 3), (3, 2), (3, 4)])
def test_sphere_projection_against_onb(rng, dim, n):
    basis = oracle.build_onb(Sphere(dim), n)
    X, Y = _unit(rng, dim, 8), _unit(rng, dim, 8)
    ref = oracle.onb_kernel(basis, n, X, Y)
    got = sphere_projection_kernel(SphereKernelSpec(dim, n), np.sum(X * Y, axis=1))
    np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-12)
    refK = oracle.onb_reproducing_kernel(basis, n, X, Y)
    np.testing.assert_allclose(sphere_kernel(SphereKernelSpec(dim, n), np.sum(X * Y, axis=1)), refK,
                               rtol=1e-10)


def test_sphere_kernel_matrix_matches_scalar(rng):
    spec = SphereKernelSpec(3, 5)
    X, Y = _unit(rng, 3, 4), _unit(rng, 3, 6)
    K = sphere_kernel_matrix(spec, X, Y)
    np.testing.assert_allclose(K, sphere_kernel(spec, X @ Y.T), rtol=1e-13, atol=1e-14)


def test_sphere_kernel_validation():
    with pytest.raises(ValueError):
        SphereKernelSpec(1, 3)
    with pytest.raises(ValueError):
        SphereKernelSpec(2, -1)
    with pytest.raises(ValueError):
        sphere_kernel(SphereKernelSpec(2, 2), 1.1)


def test_complement_point():
    np.testing.assert_array_equal(complement_point([0.0, 0.0], 3), [0, 0, 1, 0])
    np.testing.assert_allclose(complement_point([0.6, 0.8], 3), [0.6, 0.8, 0, 0])
    c = complement_point([0.3, -0.1], 4)
    assert np.linalg.norm(c) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        complement_point([0.9, 0.9], 3)


@pytest.mark.parametrize("d,m", [(1, 1), (2, 1), (2, 3), (3, 2)])
def test_constant_ball_kernel(d, m):
    w = BallWeight(d, m)
    x, y = np.full(d, 0.2), np.full(d, -0.3)
    assert ball_kernel(BallKernelSpec(w, 0), x, y) == pytest.approx(1 / ball_mass(w), rel=1e-14)


def test_disk_constant_is_one_over_pi():
    val = ball_kernel(BallKernelSpec(BallWeight(2, 1), 0), [0.1, 0.2], [0.3, 0.1])
    assert val == pytest.approx(1 / math.pi, rel=1e-15)


@pytest.mark.parametrize("d,m,n", [(1, 1, 2), (1, 2, 5), (2, 1, 3), (2, 1, 6), (2, 3, 5), (3, 1, 4)])
def test_ball_kernel_against_onb(rng, d, m, n):
    w = BallWeight(d, m)
    basis = oracle.build_onb(WeightedBall(w), n)
    X, Y = random_ball_points(rng, d, 10), random_ball_points(rng, d, 10)
    ref = oracle.onb_reproducing_kernel(basis, n, X, Y)
    got = np.diag(ball_kernel_matrix(BallKernelSpec(w, n), X, Y))
    np.testing.assert_allclose(got, ref, rtol=1e-9)
    ref_p = oracle.onb_kernel(basis, n, X[:3], Y[:3])
    got_p = [ball_projection_kernel(BallKernelSpec(w, n), x, y) for x, y in zip(X[:3], Y[:3])]
    np.testing.assert_allclose(got_p, ref_p, rtol=1e-9, atol=1e-12)


def test_ball_kernel_symmetric(rng):
    spec = BallKernelSpec(BallWeight(2, 3), 7)
    X = random_ball_points(rng, 2, 12)
    K = ball_kernel_matrix(spec, X, X)
    np.testing.assert_array_equal(K, K.T)


def test_kernel_reproduces_on_boundary(rng):
    # boundary points have zero completion slack; kernel must stay finite and symmetric
    spec = BallKernelSpec(BallWeight(2, 1), 5)
    x = np.array([1.0, 0.0])
    y = random_ball_points(rng, 2, 1)[0]
    assert ball_kernel(spec, x, y) == ball_kernel(spec, y, x)


def _random_completion(rng, x, m):
    v = rng.normal(size=m + 1)
    return v / np.linalg.norm(v) * math.sqrt(max(0.0, 1 - x @ x))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2 ** 31))
def test_completion_independence(seed):
    rng = np.random.default_rng(seed)
    spec = BallKernelSpec(BallWeight(2, 1), 8)
    x, y = random_ball_points(rng, 2, 2)
    a = ball_kernel(spec, x, y, completion=_random_completion(rng, x, 1))
    b = ball_kernel(spec, x, y, completion=_random_completion(rng, x, 1))
    c = ball_kernel(spec, x, y)
    assert a == pytest.approx(b, rel=1e-10)
    assert a == pytest.approx(c, rel=1e-10)


def test_explicit_lift_rule_matches_default(rng):
    w = BallWeight(2, 2)
    default = BallKernelSpec(w, 4)
    base = sphere_rule(2, 8)
    # reversed coordinates: still exact on S^2, but with many first-coordinate values
    rotated = CubatureRule(base.domain, base.degree, base.nodes[:, ::-1], base.weights)
    explicit = BallKernelSpec(w, 4, lift_rule=rotated)
    X, Y = random_ball_points(rng, 2, 5), random_ball_points(rng, 2, 5)
    np.testing.assert_allclose(ball_kernel_matrix(explicit, X, Y), ball_kernel_matrix(default, X, Y),
                               rtol=1e-12, atol=1e-13)
    assert len(default.lift_abscissae[0]) < len(explicit.lift_abscissae[0])


def test_lift_abscissae_merge_weights():
    spec = BallKernelSpec(BallWeight(2, 2), 6)
    s, sw = spec.lift_abscissae
    assert np.all(np.diff(s) > 0)
    assert math.fsum(sw) == pytest.approx(spec.lift_rule.weights.sum(), rel=1e-14)


def test_ball_kernel_spec_validation():
    w = BallWeight(2, 2)
    with pytest.raises(ValueError):
        BallKernelSpec(w, -1)
    with pytest.raises(CubatureError):
        BallKernelSpec(w, 4, lift_rule=circle_rule(8))
    with pytest.raises(CubatureError):
        BallKernelSpec(w, 4, lift_rule=sphere_rule(2, 3))


def test_ball_kernel_rejects_bad_points():
    spec = BallKernelSpec(BallWeight(2, 1), 2)
    with pytest.raises(ValueError):
        ball_kernel(spec, [0.9, 0.9], [0.0, 0.0])
    with pytest.raises(ValueError):
        ball_kernel_matrix(spec, np.zeros((2, 3)), np.zeros((2, 3)))
    with pytest.raises(ValueError):
        ball_kernel(spec, [0.1, 0.1], [0.0, 0.0], completion=[0.5, 0.5])
