import numpy as np
import pytest

from conftest import random_ball_points
from hyperball import _core
from hyperball.cubature import ball_rule
from hyperball.domains import BallWeight
from hyperball.hyperinterp import build, lebesgue_constant, lebesgue_function
from hyperball.kernels import BallKernelSpec, ball_kernel_matrix
from hyperball.orthopoly import gegenbauer_all

needs_ext = pytest.mark.skipif("cython" not in _core.AVAILABLE, reason="compiled extension not built")


def test_backend_selected():
    assert _core.BACKEND in _core.AVAILABLE


def test_recurrence_coefficients_generate_gegenbauer():
    lam, n = 1.5, 9
    A, B = _core.recurrence_coefficients(lam, n)
    t = np.linspace(-1, 1, 11)
    table = gegenbauer_all(lam, n, t)
    for k in range(n + 1):
        e = np.zeros(n + 1)
        e[k] = 1.0
        np.testing.assert_allclose(_core._series_numpy(t, A, B, e), table[k], rtol=1e-13, atol=1e-13)


@needs_ext
@pytest.mark.parametrize("d,m,n", [(1, 2, 6), (2, 1, 9), (2, 3, 7), (3, 1, 5)])
def test_backends_agree(rng, d, m, n):
    spec = BallKernelSpec(BallWeight(d, m), n)
    X, Y = random_ball_points(rng, d, 150), random_ball_points(rng, d, 40)
    a = ball_kernel_matrix(spec, X, Y, backend="cython")
    b = ball_kernel_matrix(spec, X, Y, backend="python")
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-13 * np.max(np.abs(a)))


@needs_ext
def test_lebesgue_backends_agree(rng):
    w = BallWeight(2, 3)
    op = build(w, 6, ball_rule(w, 12))
    X = random_ball_points(rng, 2, 200)
    np.testing.assert_allclose(lebesgue_function(op, X, backend="cython"),
                               lebesgue_function(op, X, backend="python"), rtol=1e-12)


@pytest.mark.parametrize("backend", _core.AVAILABLE)
def test_thread_count_does_not_change_results(rng, backend):
    w = BallWeight(2, 1)
    op = build(w, 8, ball_rule(w, 16))
    X = random_ball_points(rng, 2, 300)
    one = lebesgue_function(op, X, threads=1, backend=backend)
    many = lebesgue_function(op, X, threads=4, backend=backend)
    np.testing.assert_array_equal(one, many)
    r1 = lebesgue_constant(op, threads=1, backend=backend)
    r4 = lebesgue_constant(op, threads=3, backend=backend)
    assert r1.estimate == r4.estimate
    np.testing.assert_array_equal(r1.argmax, r4.argmax)


def test_unavailable_backend_raises(monkeypatch):
    monkeypatch.setattr(_core, "_ckernels", None)
    with pytest.raises(RuntimeError):
        _core.zonal_matrix(np.zeros((1, 1)), [0.0], np.zeros((1, 1)), [0.0], [0.0], [1.0],
                           [0.0], [0.0], [1.0], backend="cython")


def test_empty_inputs():
    out = _core.lebesgue_sums(np.zeros((0, 2)), np.zeros(0), np.zeros((3, 2)), np.ones(3), np.ones(3),
                              [0.0], [1.0], [0.0], [0.0], [1.0], backend="python")
    assert out.shape == (0,)
