"""Gegenbauer and Jacobi polynomials, and Gauss-Jacobi quadrature.

All evaluators accept scalars or numpy arrays for the argument ``t`` and
use the classical three-term recurrences in double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "JacobiParams",
    "QuadratureRule1D",
    "QuadratureError",
    "gegenbauer_eval",
    "gegenbauer_all",
    "jacobi_eval",
    "jacobi_deriv",
    "jacobi_mass",
    "gauss_jacobi_rule",
]

NEWTON_TOL = 1e-15
NEWTON_MAXITER = 100


class QuadratureError(RuntimeError):
    """Raised when the Gauss-Jacobi node finder fails to converge."""


@dataclass(frozen=True)
class JacobiParams:
    """Exponents of the Jacobi weight ``(1 - t)**a * (1 + t)**b``."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > -1 and self.b > -1):
            raise ValueError(f"Jacobi exponents must exceed -1, got a={self.a}, b={self.b}")


@dataclass(frozen=True, eq=False)
class QuadratureRule1D:
    nodes: np.ndarray
    weights: np.ndarray
    params: JacobiParams
    exact_degree: int

    def __len__(self):
        return len(self.nodes)


def gegenbauer_eval(lam, n, t):
    """Evaluate the Gegenbauer polynomial ``C_n^lam(t)``.

    Parameters
    ----------
    lam : float
        Positive index. The Chebyshev limit ``lam = 0`` is not supported.
    n : int
        Degree, ``n >= 0``.
    t : float or array_like
        Evaluation points.
    """
    if not lam > 0:
        raise ValueError(f"Gegenbauer index must be positive, got {lam}")
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    t = np.asarray(t, dtype=float)
    c0 = np.ones_like(t)
    if n == 0:
        return c0 if c0.ndim else float(c0)
    c1 = 2.0 * lam * t
    for k in range(2, n + 1):
        c0, c1 = c1, (2.0 * (k + lam - 1.0) * t * c1 - (k + 2.0 * lam - 2.0) * c0) / k
    return c1 if c1.ndim else float(c1)


def gegenbauer_all(lam, n, t):
    """Return ``[C_0^lam(t), ..., C_n^lam(t)]`` stacked along a new first axis."""
    if not lam > 0:
        raise ValueError(f"Gegenbauer index must be positive, got {lam}")
    t = np.asarray(t, dtype=float)
    out = np.empty((n + 1,) + t.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = 2.0 * lam * t
    for k in range(2, n + 1):
        out[k] = (2.0 * (k + lam - 1.0) * t * out[k - 1] - (k + 2.0 * lam - 2.0) * out[k - 2]) / k
    return out


def _jacobi_pair(a, b, n, t):
    """Return ``(P_n, P_{n-1})`` for the Jacobi family; ``P_{-1} = 0``."""
    t = np.asarray(t, dtype=float)
    p0 = np.ones_like(t)
    if n == 0:
        return p0, np.zeros_like(t)
    p1 = 0.5 * (a - b + (a + b + 2.0) * t)
    for k in range(2, n + 1):
        s = 2.0 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * t + a * a - b * b)
        c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return p1, p0


def jacobi_eval(params, n, t):
    """Evaluate the Jacobi polynomial ``P_n^(a,b)(t)`` by recurrence."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    p, _ = _jacobi_pair(params.a, params.b, n, t)
    return p if p.ndim else float(p)


def jacobi_deriv(params, n, t):
    """Derivative of ``P_n^(a,b)`` via ``(n + a + b + 1)/2 * P_{n-1}^(a+1,b+1)``."""
    if n == 0:
        t = np.asarray(t, dtype=float)
        z = np.zeros_like(t)
        return z if z.ndim else 0.0
    p, _ = _jacobi_pair(params.a + 1.0, params.b + 1.0, n - 1, t)
    d = 0.5 * (n + params.a + params.b + 1.0) * p
    return d if d.ndim else float(d)


def jacobi_mass(params):
    """Total mass ``2**(a+b+1) * B(a+1, b+1)`` of the Jacobi weight."""
    a, b = params.a, params.b
    return math.exp(
        (a + b + 1.0) * math.log(2.0)
        + math.lgamma(a + 1.0) + math.lgamma(b + 1.0) - math.lgamma(a + b + 2.0)
    )


def gauss_jacobi_rule(params, k):
    """Gauss-Jacobi rule with ``k`` points, exact up to degree ``2k - 1``.

    Nodes are found by Newton iteration with polynomial deflation, started
    from the asymptotic root angles ``(i + 3/4 + b/2) pi / (k + (a+b+1)/2)``;
    the iteration stops once the update is below ``1e-15``.

    Raises
    ------
    QuadratureError
        If a node has not converged after 100 iterations.
    """
    if k < 1:
        raise ValueError(f"need at least one node, got k={k}")
    a, b = params.a, params.b
    xs = np.empty(k)
    rho = k + (a + b + 1.0) / 2.0
    for i in range(k):
        # large-k asymptotic angle of the i-th root from t = -1
        r = -math.cos((i + 0.75 + b / 2.0) * math.pi / rho)
        for _ in range(NEWTON_MAXITER):
            p, q = _jacobi_pair(a, b, k, r)
            p = float(p)
            dp = float(jacobi_deriv(params, k, r))
            defl = float(np.sum(1.0 / (r - xs[:i]))) if i else 0.0
            delta = p / (dp - p * defl)
            r -= delta
            if abs(delta) <= NEWTON_TOL:
                break
        else:
            raise QuadratureError(
                f"Newton iteration did not converge for a={a}, b={b}, k={k}, node {i}"
            )
        xs[i] = r
    dp = np.asarray(jacobi_deriv(params, k, xs))
    # 2^(a+b+1) G(k+a+1) G(k+b+1) / (G(k+a+b+1) k!) as the mass times a finite
    # product; lgamma differences lose ~1e-13 at k ~ 200
    c = jacobi_mass(params)
    for j in range(1, k + 1):
        c *= (j + a) * (j + b) / j
        if j >= 2:
            c /= j + a + b
    ws = c / ((1.0 - xs) * (1.0 + xs) * dp * dp)
    order = np.argsort(xs)
    xs, ws = xs[order], ws[order]
    if np.any(np.diff(xs) <= 0) or np.any(ws <= 0):
        raise QuadratureError(f"degenerate Gauss-Jacobi rule for a={a}, b={b}, k={k}")
    xs.flags.writeable = False
    ws.flags.writeable = False
    return QuadratureRule1D(xs, ws, params, 2 * k - 1)
