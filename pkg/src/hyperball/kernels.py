"""Reproducing kernels on spheres and on Gegenbauer-weighted balls.

Sphere kernels are zonal Gegenbauer series. The ball kernel for
``w_{m/2}`` on ``B^d`` is obtained by integrating the ``S^(d+m)`` kernel
over an auxiliary ``S^m``::

    K_n(w_{m/2}; x, y) = int_{S^m} K_n(1; (x, x^c), (y, sqrt(1-|y|^2) eta)) d omega(eta)

where ``(x, x^c)`` is any completion of ``x`` to a unit vector. The
``S^m`` integral is evaluated exactly with a cubature rule of degree at
least ``n``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import _core
from .cubature import CubatureError, axial_sphere_rule
from .domains import BallWeight, Sphere, sphere_area

__all__ = [
    "SphereKernelSpec",
    "BallKernelSpec",
    "sphere_projection_kernel",
    "sphere_kernel",
    "complement_point",
    "ball_kernel",
    "ball_kernel_matrix",
    "ball_projection_kernel",
    "sphere_kernel_matrix",
]

_CLAMP = 1e-12


@dataclass(frozen=True)
class SphereKernelSpec:
    dim: int
    n: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"zonal kernels need a sphere of dimension >= 2, got S^{self.dim}")
        if self.n < 0:
            raise ValueError(f"degree must be nonnegative, got {self.n}")

    @property
    def lam(self):
        return (self.dim - 1) / 2.0

    def series(self, projection=False):
        """Coefficients ``e[k]`` of ``sum_k e[k] C_k^lam(t)`` for ``K_n`` (or ``P_n``)."""
        lam = self.lam
        k = np.arange(self.n + 1, dtype=float)
        e = (k + lam) / lam / sphere_area(self.dim)
        if projection:
            e[:-1] = 0.0
        return e


def _clamp(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + _CLAMP):
        raise ValueError("inner product outside [-1, 1]")
    return np.clip(t, -1.0, 1.0)


def _zonal(spec, t, projection):
    A, B = _core.recurrence_coefficients(spec.lam, spec.n)
    t = _clamp(t)
    out = _core._series_numpy(t, A, B, spec.series(projection))
    return float(out) if out.ndim == 0 else out


def sphere_projection_kernel(spec, t):
    """``P_n(1; x, y) = (n + lam)/lam * C_n^lam(t) / |S^dim|`` as a function of ``t = <x, y>``."""
    return _zonal(spec, t, projection=True)


def sphere_kernel(spec, t):
    """``K_n(1; x, y) = sum_{k <= n} P_k(1; x, y)`` as a function of ``t = <x, y>``."""
    return _zonal(spec, t, projection=False)


def sphere_kernel_matrix(spec, X, Y, threads=1, backend=None):
    """``K_n(1; x_p, y_q)`` for unit vectors ``X`` (rows) and ``Y`` (rows)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    A, B = _core.recurrence_coefficients(spec.lam, spec.n)
    zx, zy = np.zeros(len(X)), np.zeros(len(Y))
    return _core.zonal_matrix(X, zx, Y, zy, [0.0], [1.0], A, B, spec.series(),
                              threads=threads, backend=backend)


def _check_in_ball(x, what="point"):
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    if np.any(r2 > (1.0 + _CLAMP) ** 2):
        raise ValueError(f"{what} lies outside the unit ball (|x| = {np.sqrt(np.max(r2)):.17g})")
    return x, np.sqrt(np.maximum(1.0 - r2, 0.0))


def complement_point(x, total_dim):
    """Canonical completion ``(x, sqrt(1 - |x|^2), 0, ..., 0)`` on ``S^total_dim``."""
    x, c = _check_in_ball(x)
    if x.ndim != 1 or total_dim < x.shape[0]:
        raise ValueError(f"cannot complete a point of B^{x.shape[-1]} to S^{total_dim}")
    out = np.zeros(total_dim + 1)
    out[: x.shape[0]] = x
    out[x.shape[0]] = c
    return out


@dataclass(frozen=True)
class BallKernelSpec:
    """Kernel ``K_n(w_{m/2}; ., .)`` on ``B^d`` together with its ``S^m`` integration rule.

    When ``lift_rule`` is omitted, a degree-``2n`` rule on ``S^m`` is used
    whose first coordinate takes only ``n + 1`` distinct values.
    """

    w: BallWeight
    n: int
    lift_rule: object = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"degree must be nonnegative, got {self.n}")
        if self.lift_rule is None:
            object.__setattr__(self, "lift_rule", axial_sphere_rule(self.w.m, 2 * self.n))
        dom = self.lift_rule.domain
        if not isinstance(dom, Sphere) or dom.dim != self.w.m:
            raise CubatureError(f"lift rule must live on S^{self.w.m}, got {dom}")
        if self.lift_rule.degree < self.n:
            raise CubatureError(
                f"lift rule degree {self.lift_rule.degree} is below the kernel degree {self.n}"
            )

    @property
    def sphere(self):
        return SphereKernelSpec(self.w.d + self.w.m, self.n)

    @functools.cached_property
    def lift_abscissae(self):
        """First coordinates of the lift nodes with merged weights.

        With the canonical completion the integrand only depends on
        ``eta_1``, so equal first coordinates can share one evaluation.
        """
        s = self.lift_rule.nodes[:, 0]
        order = np.argsort(s, kind="stable")
        s, wts = s[order], self.lift_rule.weights[order]
        groups = np.concatenate([[0], np.flatnonzero(np.diff(s) > 1e-14) + 1])
        merged_w = np.add.reduceat(wts, groups)
        # weighted mean of each cluster of near-equal abscissae
        merged_s = np.add.reduceat(wts * s, groups) / merged_w
        return merged_s, merged_w


def _ball_matrix(spec, X, Y, projection, threads, backend):
    X, bx = _check_in_ball(np.atleast_2d(X))
    Y, by = _check_in_ball(np.atleast_2d(Y))
    if X.shape[1] != spec.w.d or Y.shape[1] != spec.w.d:
        raise ValueError(f"points must have {spec.w.d} coordinates")
    sph = spec.sphere
    A, B = _core.recurrence_coefficients(sph.lam, spec.n)
    s, sw = spec.lift_abscissae
    return _core.zonal_matrix(X, bx, Y, by, s, sw, A, B, sph.series(projection),
                              threads=threads, backend=backend)


def ball_kernel_matrix(spec, X, Y, threads=1, backend=None):
    """``K_n(w_{m/2}; x_p, y_q)`` for all rows of ``X`` and ``Y``."""
    return _ball_matrix(spec, X, Y, False, threads, backend)


def _with_completion(spec, x, y, xc, projection):
    x, _ = _check_in_ball(x)
    y, cy = _check_in_ball(y)
    xc = np.asarray(xc, dtype=float)
    if xc.shape != (spec.w.m + 1,):
        raise ValueError(f"completion must have {spec.w.m + 1} coordinates")
    if abs(x @ x + xc @ xc - 1.0) > 1e-12:
        raise ValueError("(x, x^c) is not a unit vector")
    t = x @ y + cy * (spec.lift_rule.nodes @ xc)
    vals = sphere_projection_kernel(spec.sphere, t) if projection else sphere_kernel(spec.sphere, t)
    return float(np.dot(spec.lift_rule.weights, vals))


def ball_kernel(spec, x, y, completion=None):
    """``K_n(w_{m/2}; x, y)`` for single points ``x, y`` of ``B^d``.

    ``completion`` optionally supplies ``x^c`` in ``R^(m+1)``; by default
    the canonical completion of :func:`complement_point` is used. The
    kernel does not depend on this choice.
    """
    if completion is not None:
        return _with_completion(spec, x, y, completion, projection=False)
    return float(_ball_matrix(spec, [x], [y], False, 1, None)[0, 0])


def ball_projection_kernel(spec, x, y, completion=None):
    """``P_n(w_{m/2}; x, y)``, the kernel of the degree-``n`` orthogonal slice."""
    if completion is not None:
        return _with_completion(spec, x, y, completion, projection=True)
    return float(_ball_matrix(spec, [x], [y], True, 1, None)[0, 0])
