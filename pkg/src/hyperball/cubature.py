"""Positive-weight cubature on spheres and Gegenbauer-weighted balls.

Every rule here is a product rule assembled from Gauss-Jacobi quadrature and
equispaced circle rules. Two constructions move rules between
``(B^d, w_{m/2})`` and ``S^(d+m)``:

* :func:`lift_ball_rule_to_sphere` pairs a ball rule with a rule on ``S^m``;
* :func:`restrict_sphere_rule_to_ball` projects a sphere rule onto its first
  ``d`` coordinates and rescales by ``1/|S^m|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .domains import BallWeight, Sphere, WeightedBall, sphere_area, total_measure
from .orthopoly import JacobiParams, gauss_jacobi_rule

__all__ = [
    "BallWeight",
    "Sphere",
    "WeightedBall",
    "CubatureRule",
    "CubatureError",
    "ExactnessReport",
    "circle_rule",
    "sphere_rule",
    "axial_sphere_rule",
    "ball_rule",
    "lift_ball_rule_to_sphere",
    "restrict_sphere_rule_to_ball",
    "integrate",
    "integrate_values",
    "exactness_report",
    "write_rule",
    "read_rule",
    "EXACTNESS_TOL",
]

EXACTNESS_TOL = 1e-11


class CubatureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CubatureRule:
    """Nodes and positive weights with a declared degree of exactness.

    ``nodes`` has shape ``(count, ambient_dim)``; both arrays are made
    read-only on construction.
    """

    domain: object
    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float, ndmin=2)
        weights = np.array(self.weights, dtype=float).ravel()
        if nodes.shape[0] != weights.shape[0]:
            raise CubatureError(f"{nodes.shape[0]} nodes but {weights.shape[0]} weights")
        if nodes.shape[0] < 1:
            raise CubatureError("a rule needs at least one node")
        if nodes.shape[1] != self.domain.ambient:
            raise CubatureError(
                f"nodes have {nodes.shape[1]} coordinates, domain {self.domain} needs {self.domain.ambient}"
            )
        if not np.all(weights > 0):
            raise CubatureError("cubature weights must be strictly positive")
        if self.degree < 0:
            raise CubatureError(f"declared degree must be nonnegative, got {self.degree}")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.weights.shape[0]

    @property
    def total_measure(self):
        return total_measure(self.domain)


def circle_rule(degree):
    """Equispaced rule on ``S^1`` with ``degree + 1`` points, first node at angle 0."""
    if degree < 0:
        raise CubatureError(f"degree must be nonnegative, got {degree}")
    npts = degree + 1
    theta = 2.0 * np.pi * np.arange(npts) / npts
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    weights = np.full(npts, 2.0 * np.pi / npts)
    return CubatureRule(Sphere(1), degree, nodes, weights, name=f"circle({npts})")


def _gauss_points_for(degree):
    # k Gauss points are exact through degree 2k - 1
    return max(1, (degree + 2) // 2)


def ball_rule(w, degree):
    """Product rule on ``(B^d, w_mu)`` exact through ``degree``.

    For ``d = 1`` this is Gauss-Jacobi with ``a = b = mu - 1/2``. For
    ``d >= 2`` the radial factor uses ``t = 2r^2 - 1``, which turns
    ``r^(d-1) (1 - r^2)^(mu - 1/2) dr`` into a Jacobi weight with
    ``a = mu - 1/2``, ``b = (d - 2)/2``, crossed with ``sphere_rule(d - 1)``.
    """
    if degree < 0:
        raise CubatureError(f"degree must be nonnegative, got {degree}")
    a = w.mu - 0.5
    if w.d == 1:
        g = gauss_jacobi_rule(JacobiParams(a, a), _gauss_points_for(degree))
        return CubatureRule(WeightedBall(w), degree, g.nodes[:, None], g.weights,
                            name=f"gauss-jacobi({len(g)})")
    # the angular average of a degree-`degree` polynomial is a polynomial in t
    # of degree floor(degree/2)
    g = gauss_jacobi_rule(JacobiParams(a, (w.d - 2) / 2.0), _gauss_points_for(degree // 2))
    radii = np.sqrt((1.0 + g.nodes) / 2.0)
    rweights = g.weights * 2.0 ** (-(a + (w.d - 2) / 2.0 + 2.0))
    cap = sphere_rule(w.d - 1, degree)
    nodes = (radii[:, None, None] * cap.nodes[None, :, :]).reshape(-1, w.d)
    weights = (rweights[:, None] * cap.weights[None, :]).ravel()
    return CubatureRule(WeightedBall(w), degree, nodes, weights,
                        name=f"radial({len(g)})x{cap.name}")


def sphere_rule(dim, degree):
    """Product rule on ``S^dim`` exact through ``degree``.

    ``S^1`` gets the circle rule; higher spheres lift a rule on
    ``(B^(dim-1), w_{1/2})`` against the circle rule.
    """
    if dim < 1:
        raise CubatureError(f"sphere dimension must be >= 1, got {dim}")
    if dim == 1:
        return circle_rule(degree)
    return lift_ball_rule_to_sphere(ball_rule(BallWeight(dim - 1, 1), degree), circle_rule(degree))


def axial_sphere_rule(dim, degree):
    """Rule on ``S^dim`` whose first coordinate takes few distinct values.

    Lifts a Gauss rule on ``(B^1, w_{(dim-1)/2})`` against ``sphere_rule(dim - 1)``,
    so the first coordinate runs over ``ceil((degree + 1)/2)`` Gauss nodes.
    Kernels that depend on a point only through its first coordinate can
    be integrated at that reduced cost.
    """
    if dim < 2:
        return sphere_rule(dim, degree)
    return lift_ball_rule_to_sphere(ball_rule(BallWeight(1, dim - 1), degree), sphere_rule(dim - 1, degree))


def lift_ball_rule_to_sphere(ball, cap):
    """Rule on ``S^(d+m)`` with nodes ``(x, sqrt(1 - |x|^2) t)`` and weights ``lambda * nu``.

    Nodes are ordered with the ball index outermost.
    """
    if not isinstance(ball.domain, WeightedBall):
        raise CubatureError(f"expected a weighted-ball rule, got {ball.domain}")
    if not isinstance(cap.domain, Sphere):
        raise CubatureError(f"expected a sphere rule, got {cap.domain}")
    w = ball.domain.w
    if w.m != cap.domain.dim:
        raise CubatureError(
            f"weight index m={w.m} does not match the sphere dimension {cap.domain.dim} of the cap rule"
        )
    x = ball.nodes
    s = np.sqrt(np.maximum(1.0 - np.sum(x * x, axis=1), 0.0))
    na, nb = len(ball), len(cap)
    nodes = np.empty((na, nb, w.d + w.m + 1))
    nodes[:, :, : w.d] = x[:, None, :]
    nodes[:, :, w.d:] = s[:, None, None] * cap.nodes[None, :, :]
    weights = (ball.weights[:, None] * cap.weights[None, :]).ravel()
    return CubatureRule(Sphere(w.d + w.m), min(ball.degree, cap.degree),
                        nodes.reshape(na * nb, -1), weights, name=f"{ball.name}x{cap.name}")


def restrict_sphere_rule_to_ball(sph, d):
    """Rule on ``(B^d, w_{m/2})``, ``m = dim - d``, from a rule on ``S^dim``."""
    if not isinstance(sph.domain, Sphere):
        raise CubatureError(f"expected a sphere rule, got {sph.domain}")
    m = sph.domain.dim - d
    if d < 1 or m < 1:
        raise CubatureError(f"cannot restrict an S^{sph.domain.dim} rule to B^{d}: need 1 <= d < {sph.domain.dim}")
    nodes = sph.nodes[:, :d]
    weights = sph.weights / sphere_area(m)
    return CubatureRule(WeightedBall(BallWeight(d, m)), sph.degree, nodes, weights,
                        name=f"restrict({sph.name})")


def integrate_values(rule, values):
    values = np.asarray(values, dtype=float)
    if values.shape != rule.weights.shape:
        raise CubatureError(f"expected {len(rule)} values, got shape {values.shape}")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        i = int(bad[0])
        raise CubatureError(f"non-finite integrand value {values[i]} at node {i}: {rule.nodes[i]}")
    return math.fsum(rule.weights * values)


def integrate(rule, f):
    """Apply the rule to ``f``, called once per node with a 1-D coordinate array.

    The weighted sum is accumulated with :func:`math.fsum`, so the result
    does not depend on summation order.
    """
    return integrate_values(rule, [f(x) for x in rule.nodes])


@dataclass(frozen=True)
class ExactnessReport:
    rows: tuple  # (multi-index, rule value, oracle value, relative error)
    tolerance: float

    @property
    def failures(self):
        return tuple(r for r in self.rows if not r[3] <= self.tolerance)

    @property
    def passed(self):
        return not self.failures

    @property
    def max_error(self):
        return max(r[3] for r in self.rows)

    def format(self, limit=None):
        lines = [f"{'monomial':<24}{'rule':>26}{'exact':>26}{'rel.err':>12}"]
        rows = self.rows if limit is None else self.rows[:limit]
        for beta, q, e, err in rows:
            flag = "" if err <= self.tolerance else "  FAIL"
            lines.append(f"{str(beta):<24}{q:>26.17g}{e:>26.17g}{err:>12.3e}{flag}")
        if limit is not None and len(self.rows) > limit:
            lines.append(f"... {len(self.rows) - limit} more rows")
        lines.append(
            f"{len(self.rows)} monomials, {len(self.failures)} failures, "
            f"max relative error {self.max_error:.3e} (tolerance {self.tolerance:g})"
        )
        return "\n".join(lines)


def exactness_report(rule, tolerance=EXACTNESS_TOL):
    """Compare the rule against exact integrals of every monomial up to its degree.

    The relative error of ``x^beta`` is ``|Q - I| / max(|I|, Q|x^beta|)``,
    where ``Q|x^beta|`` is the rule applied to the absolute value; this keeps
    the measure meaningful for monomials whose integral vanishes.
    """
    dom = rule.domain
    exps = oracle.graded_multi_indices(dom.ambient, rule.degree)
    vals = oracle.monomial_values(exps, rule.nodes)
    rows = []
    for j, beta in enumerate(exps):
        col = vals[:, j]
        q = math.fsum(rule.weights * col)
        scale = math.fsum(rule.weights * np.abs(col))
        exact = oracle.monomial_integral(beta, dom)
        err = abs(q - exact) / max(abs(exact), scale)
        rows.append((beta, q, exact, err))
    return ExactnessReport(tuple(rows), tolerance)


def write_rule(rule, fh):
    """Write ``kind,dim,m,degree,count`` then one ``x_1 ... x_k weight`` line per node."""
    dom = rule.domain
    if isinstance(dom, Sphere):
        fh.write(f"sphere,{dom.dim},0,{rule.degree},{len(rule)}\n")
    else:
        fh.write(f"ball,{dom.w.d},{dom.w.m},{rule.degree},{len(rule)}\n")
    for x, wt in zip(rule.nodes, rule.weights):
        fh.write(" ".join(f"{v:.17g}" for v in x) + f" {wt:.17g}\n")


def read_rule(fh):
    header = fh.readline().strip()
    try:
        kind, dim, m, degree, count = [p.strip() for p in header.split(",")]
        dim, m, degree, count = int(dim), int(m), int(degree), int(count)
    except ValueError as exc:
        raise CubatureError(f"malformed rule header {header!r}") from exc
    if kind == "sphere":
        dom = Sphere(dim)
    elif kind == "ball":
        dom = WeightedBall(BallWeight(dim, m))
    else:
        raise CubatureError(f"unknown domain kind {kind!r}")
    data = np.loadtxt(fh, ndmin=2)
    if data.shape != (count, dom.ambient + 1):
        raise CubatureError(f"expected {count} rows of {dom.ambient + 1} numbers, got {data.shape}")
    return CubatureRule(dom, degree, data[:, :-1], data[:, -1], name="file")
