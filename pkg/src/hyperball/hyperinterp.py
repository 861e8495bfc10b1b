"""Hyperinterpolation on weighted balls and its Lebesgue constant.

The operator of degree ``n`` built from a cubature rule ``(x_a, lambda_a)``
of degree at least ``2n`` is

    L_n f(x) = sum_a lambda_a K_n(w_mu; x, x_a) f(x_a),

and its Lebesgue function is ``sum_a lambda_a |K_n(w_mu; x, x_a)|``. The
Lebesgue constant (the sup of that function) is estimated on a product grid
followed by one local refinement pass; grid maxima are lower bounds of the
true sup.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from . import _core
from .cubature import CubatureError
from .domains import Sphere, WeightedBall
from .kernels import BallKernelSpec, SphereKernelSpec, ball_kernel_matrix

__all__ = [
    "Hyperinterpolant",
    "LebesgueReport",
    "GrowthFit",
    "ProductGrid",
    "build",
    "apply",
    "lebesgue_function",
    "lebesgue_constant",
    "sphere_lebesgue_function",
    "sphere_lebesgue_constant",
    "growth_fit",
    "default_grid",
    "grid_defaults",
    "rule_symmetry",
    "sup_error",
]

GRID_SCALE = 12
GRID_FLOOR = 64
REFINE_POINTS = 11


def grid_defaults(ncoords):
    """Default ``(grid_scale, floor)`` for a grid with ``ncoords`` parameters.

    Three-parameter grids (``B^3``) use a coarser radius/angle resolution so
    that a scan stays within minutes at ``n = 24``.
    """
    if ncoords <= 2:
        return GRID_SCALE, GRID_FLOOR
    if ncoords == 3:
        return 2, 16
    return 1, 8


@dataclass(frozen=True, eq=False)
class Hyperinterpolant:
    kernel: BallKernelSpec
    rule: object

    @property
    def n(self):
        return self.kernel.n

    @property
    def w(self):
        return self.kernel.w


def build(w, n, rule, lift_rule=None):
    """Hyperinterpolation operator of degree ``n`` on ``(B^d, w)``.

    Raises
    ------
    CubatureError
        If the rule lives on another domain or its degree is below ``2n``.
    """
    if n < 0:
        raise ValueError(f"operator degree must be nonnegative, got {n}")
    if not isinstance(rule.domain, WeightedBall) or rule.domain.w != w:
        raise CubatureError(f"rule domain {rule.domain} does not match the weight {w}")
    if rule.degree < 2 * n:
        raise CubatureError(
            f"rule degree {rule.degree} is too low for an operator of degree {n} (needs >= {2 * n})"
        )
    return Hyperinterpolant(BallKernelSpec(w, n, lift_rule), rule)


def _points(x, d):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != d:
        raise ValueError(f"points must have {d} coordinates, got {x.shape[1]}")
    return x, single


def apply(op, samples, x, threads=1, backend=None):
    """Evaluate ``L_n f`` at ``x`` given ``samples = f(x_a)`` in rule node order."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (len(op.rule),):
        raise ValueError(f"expected {len(op.rule)} samples, got shape {samples.shape}")
    bad = np.flatnonzero(~np.isfinite(samples))
    if bad.size:
        raise ValueError(f"non-finite sample {samples[bad[0]]} at node {int(bad[0])}")
    x, single = _points(x, op.w.d)
    K = ball_kernel_matrix(op.kernel, x, op.rule.nodes, threads=threads, backend=backend)
    out = np.sum(K * (op.rule.weights * samples), axis=1)
    return float(out[0]) if single else out


def lebesgue_function(op, x, threads=1, backend=None):
    """``sum_a lambda_a |K_n(w_mu; x, x_a)|`` at one point or an array of points."""
    x, single = _points(x, op.w.d)
    if np.any(np.sum(x * x, axis=1) > 1.0 + 2e-12):
        raise ValueError("evaluation point outside the unit ball")
    spec = op.kernel
    sph = spec.sphere
    A, B = _core.recurrence_coefficients(sph.lam, spec.n)
    s, sw = spec.lift_abscissae
    bx = np.sqrt(np.maximum(1.0 - np.sum(x * x, axis=1), 0.0))
    Y = op.rule.nodes
    by = np.sqrt(np.maximum(1.0 - np.sum(Y * Y, axis=1), 0.0))
    out = _core.lebesgue_sums(x, bx, Y, by, op.rule.weights, s, sw, A, B, sph.series(),
                              threads=threads, backend=backend)
    return float(out[0]) if single else out


def sphere_lebesgue_function(spec, rule, x, threads=1, backend=None):
    """``sum_a lambda_a |K_n(1; x, y_a)|`` on ``S^dim``."""
    x, single = _points(x, spec.dim + 1)
    A, B = _core.recurrence_coefficients(spec.lam, spec.n)
    zx, zy = np.zeros(len(x)), np.zeros(len(rule))
    out = _core.lebesgue_sums(x, zx, rule.nodes, zy, rule.weights, [0.0], [1.0], A, B,
                              spec.series(), threads=threads, backend=backend)
    return float(out[0]) if single else out


# -- grids -------------------------------------------------------------------


def _unit_vectors(angles):
    """Hyperspherical coordinates: angles ``(psi_1, ..., psi_{D-2}, phi)`` -> unit vectors in ``R^D``."""
    angles = np.atleast_2d(angles)
    npts, k = angles.shape
    out = np.empty((npts, k + 1))
    sin_prod = np.ones(npts)
    for j in range(k):
        out[:, j] = sin_prod * np.cos(angles[:, j])
        sin_prod = sin_prod * np.sin(angles[:, j])
    out[:, k] = sin_prod
    return out


@dataclass(frozen=True)
class ProductGrid:
    """Radius x angles product grid on a ball, or an angles grid on a sphere.

    Ball radii are ``sin(pi i / (2 G))``, ``i = 0..G`` (clustered at the
    boundary). On ``B^1`` the signed abscissae ``sin(pi i / (2 G))`` are used
    for ``i = -G..G``, or ``i = 0..G`` when ``half_line`` is set. Angular
    coordinate ``j`` has ``angular[j]`` equal intervals over ``[0, spans[j]]``;
    a span of ``2 pi`` is periodic and omits the endpoint.
    """

    kind: str  # "ball" or "sphere"
    dim: int  # ball dimension d, or sphere dimension
    radial: int = 0
    angular: tuple = ()
    spans: tuple = ()
    half_line: bool = False

    def __post_init__(self):
        nang = self.dim - 1 if self.kind == "ball" else self.dim
        if self.kind not in ("ball", "sphere"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if len(self.angular) != nang or len(self.spans) != nang:
            raise ValueError(f"{self.kind} grid in dimension {self.dim} needs {nang} angular coordinates")
        if self.kind == "ball" and self.radial < 1:
            raise ValueError("ball grids need at least one radial interval")
        if any(k < 1 for k in self.angular):
            raise ValueError("angular interval counts must be positive")

    def _angle_values(self, j):
        k, span = self.angular[j], self.spans[j]
        if span >= 2 * math.pi - 1e-12:
            return 2 * math.pi * np.arange(k) / k
        return span * np.arange(k + 1) / k

    def _radial_values(self):
        G = self.radial
        if self.dim == 1:
            lo = 0 if self.half_line else -G
            return np.sin(np.pi * np.arange(lo, G + 1) / (2 * G))
        return np.sin(np.pi * np.arange(G + 1) / (2 * G))

    def axes(self):
        axes = [self._radial_values()] if self.kind == "ball" else []
        return axes + [self._angle_values(j) for j in range(len(self.angular))]

    def _embed(self, params):
        params = np.atleast_2d(params)
        if self.kind == "sphere":
            return _unit_vectors(params)
        if self.dim == 1:
            return params[:, :1].copy()
        return params[:, :1] * _unit_vectors(params[:, 1:])

    def points(self):
        """Grid points in deterministic order, with their parameter tuples."""
        params = np.array(list(itertools.product(*self.axes())), dtype=float)
        if self.kind == "ball" and self.dim > 1:
            # collapse the repeated origin to one point
            at_origin = params[:, 0] == 0.0
            keep = ~at_origin
            keep[np.flatnonzero(at_origin)[:1]] = True
            params = params[keep]
        return self._embed(params), params

    def refinement(self, param):
        """``11^k`` points spanning the neighbouring cells of ``param``."""
        axes = self.axes()
        local = []
        for j, (ax, v) in enumerate(zip(axes, param)):
            i = int(np.argmin(np.abs(ax - v)))
            if len(ax) == 1:
                lo = hi = ax[0]
            else:
                step_lo = ax[i] - ax[i - 1] if i > 0 else ax[1] - ax[0]
                step_hi = ax[i + 1] - ax[i] if i + 1 < len(ax) else ax[-1] - ax[-2]
                lo, hi = v - step_lo, v + step_hi
            if self.kind == "ball" and j == 0:
                lo, hi = max(lo, -1.0 if self.dim == 1 else 0.0), min(hi, 1.0)
            local.append(np.linspace(lo, hi, REFINE_POINTS))
        params = np.array(list(itertools.product(*local)), dtype=float)
        return self._embed(params)

    def describe(self):
        return {
            "type": f"{self.kind}-product",
            "dim": self.dim,
            "radial": self.radial,
            "angular": list(self.angular),
            "spans": [round(s, 15) for s in self.spans],
            "refine": REFINE_POINTS,
        }

    def refined(self):
        """The nested grid with every interval count doubled."""
        return ProductGrid(self.kind, self.dim, 2 * self.radial,
                           tuple(2 * k for k in self.angular), self.spans, self.half_line)


def rule_symmetry(rule, tol=1e-10):
    """Detect symmetries of a rule that a grid may quotient out.

    Returns ``(rotation_order, reflect_first)``: the rule is invariant under
    rotation by ``2 pi / rotation_order`` in its last two coordinates together
    with the sign flip of the last coordinate (a dihedral group), and, if
    ``reflect_first``, under the sign flip of the first coordinate. Returns
    ``(0, ...)`` when no dihedral symmetry is found.
    """
    X = rule.nodes
    wts = rule.weights
    D = X.shape[1]
    tree = cKDTree(X)

    def invariant(Y):
        dist, idx = tree.query(Y)
        return bool(np.all(dist < tol) and np.allclose(wts[idx], wts, rtol=tol, atol=0.0))

    reflect_first = invariant(X * np.r_[-1.0, np.ones(D - 1)])
    if D < 2:
        return 0, reflect_first
    rho = np.hypot(X[:, -2], X[:, -1])
    i0 = int(np.argmax(rho))
    if rho[i0] < tol:
        return 0, reflect_first
    same = (np.abs(rho - rho[i0]) < tol) & np.all(np.abs(X[:, :-2] - X[i0, :-2]) < tol, axis=1)
    order = int(np.sum(same))
    c, s = math.cos(2 * math.pi / order), math.sin(2 * math.pi / order)
    Y = X.copy()
    Y[:, -2], Y[:, -1] = c * X[:, -2] - s * X[:, -1], s * X[:, -2] + c * X[:, -1]
    mirror = X * np.r_[np.ones(D - 1), -1.0]
    if invariant(Y) and invariant(mirror):
        return order, reflect_first
    return 0, reflect_first


def default_grid(kind, dim, n, rule=None, grid_scale=None, floor=None):
    """Boundary-clustered product grid with ``G = max(grid_scale * n, floor)``.

    ``grid_scale`` and ``floor`` default to :func:`grid_defaults`.

    When ``rule`` is given and has a dihedral symmetry (see
    :func:`rule_symmetry`), only a fundamental domain is scanned: the
    azimuth covers ``[0, pi/N]``, and the first polar angle covers
    ``[0, pi/2]`` when the first coordinate flips freely. The angular
    spacing matches the full grid, so the scan is denser per unit area
    than the corresponding full scan.
    """
    nang = dim - 1 if kind == "ball" else dim
    ncoords = nang + 1 if kind == "ball" else nang
    dscale, dfloor = grid_defaults(ncoords)
    grid_scale = dscale if grid_scale is None else grid_scale
    floor = dfloor if floor is None else floor
    G = max(int(grid_scale * n), int(floor), 1)
    spans = [math.pi] * (nang - 1) + [2 * math.pi] if nang else []
    half_line = False
    if rule is not None:
        order, reflect_first = rule_symmetry(rule)
        if order and nang:
            spans[-1] = math.pi / order
        if reflect_first and nang >= 2:
            spans[0] = math.pi / 2
        half_line = kind == "ball" and dim == 1 and reflect_first
    angular = tuple(max(2, math.ceil(G * s / math.pi)) for s in spans)
    return ProductGrid(kind, dim, G if kind == "ball" else 0, angular, tuple(spans), half_line)


@dataclass(frozen=True)
class LebesgueReport:
    n: int
    estimate: float
    argmax: np.ndarray
    grid: dict
    rule_degree: int
    rule_nodes: int = 0
    grid_estimate: float = float("nan")
    grid_points: int = 0
    refined: bool = True

    @property
    def argmax_radius(self):
        return float(np.linalg.norm(self.argmax))


def _scan(fn, grid, refine, threads, backend):
    pts, params = grid.points()
    vals = fn(pts, threads, backend)
    i = int(np.argmax(vals))  # first maximum in grid order
    best, arg = float(vals[i]), pts[i]
    grid_best = best
    npts = len(pts)
    if refine:
        local = grid.refinement(params[i])
        lv = fn(local, threads, backend)
        j = int(np.argmax(lv))
        npts += len(local)
        if lv[j] > best:
            best, arg = float(lv[j]), local[j]
    return best, arg, grid_best, npts


def lebesgue_constant(op, grid=None, refine=True, threads=1, backend=None, grid_scale=None,
                      floor=None):
    """Estimate ``||L_n||`` as the maximum of the Lebesgue function over ``grid``.

    With ``refine``, one extra scan of ``11^d`` points around the grid
    argmax follows. ``grid_estimate`` holds the pre-refinement maximum,
    which is monotone under nested grids.
    """
    if grid is None:
        grid = default_grid("ball", op.w.d, op.n, op.rule, grid_scale, floor)
    if grid.kind != "ball" or grid.dim != op.w.d:
        raise ValueError(f"grid {grid.kind}/{grid.dim} does not fit B^{op.w.d}")
    best, arg, grid_best, npts = _scan(
        lambda p, t, b: lebesgue_function(op, p, threads=t, backend=b), grid, refine, threads, backend)
    return LebesgueReport(op.n, best, arg, grid.describe(), op.rule.degree, len(op.rule),
                          grid_best, npts, refine)


def sphere_lebesgue_constant(dim, n, rule, grid=None, refine=True, threads=1, backend=None,
                             grid_scale=None, floor=None):
    """Lebesgue constant estimate for hyperinterpolation on ``S^dim`` with ``K_n(1; ., .)``."""
    if not isinstance(rule.domain, Sphere) or rule.domain.dim != dim:
        raise CubatureError(f"rule domain {rule.domain} is not S^{dim}")
    if rule.degree < 2 * n:
        raise CubatureError(f"rule degree {rule.degree} is too low for degree {n} (needs >= {2 * n})")
    spec = SphereKernelSpec(dim, n)
    if grid is None:
        grid = default_grid("sphere", dim, n, rule, grid_scale, floor)
    best, arg, grid_best, npts = _scan(
        lambda p, t, b: sphere_lebesgue_function(spec, rule, p, threads=t, backend=b),
        grid, refine, threads, backend)
    return LebesgueReport(n, best, arg, grid.describe(), rule.degree, len(rule), grid_best, npts, refine)


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    max_abs_residual: float
    points: tuple = field(default=())


def growth_fit(points):
    """Least-squares fit of ``log(estimate) = intercept + slope * log(n)``."""
    pts = [(int(n), float(e)) for n, e in points]
    if len(pts) < 4:
        raise ValueError(f"growth fit needs at least 4 points, got {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=float)
    es = np.array([p[1] for p in pts])
    if len(set(ns)) != len(ns):
        raise ValueError("degrees in a growth fit must be distinct")
    if np.any(ns <= 0):
        raise ValueError("growth fit needs positive degrees")
    if np.any(~(es > 0)):
        raise ValueError("growth fit needs positive estimates")
    lx, ly = np.log(ns), np.log(es)
    design = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    return GrowthFit(float(slope), float(intercept), float(np.max(np.abs(resid))), tuple(pts))


def sup_error(op, f, grid=None, threads=1, backend=None):
    """``max |L_n f - f|`` over the points of a full (unreduced) ball grid.

    ``f`` maps an ``(npoints, d)`` array to values.
    """
    if grid is None:
        grid = default_grid("ball", op.w.d, op.n, None, grid_scale=4, floor=24)
    pts, _ = grid.points()
    samples = np.asarray(f(op.rule.nodes), dtype=float)
    approx = apply(op, samples, pts, threads=threads, backend=backend)
    return float(np.max(np.abs(approx - np.asarray(f(pts), dtype=float))))
