"""Independent ground truth for tests.

Exact monomial integrals over spheres and weighted balls from Gamma-function
identities, and brute-force orthonormal polynomial bases built by
Gram-Schmidt with exact monomial inner products. Nothing here touches the
cubature or kernel code paths.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .domains import Sphere, WeightedBall, sphere_area

__all__ = [
    "MultiIndex",
    "graded_multi_indices",
    "monomial_sphere_integral",
    "monomial_ball_integral",
    "monomial_ball_integral_via_sphere",
    "monomial_integral",
    "OrthonormalBasis",
    "OracleError",
    "build_onb",
    "onb_kernel",
    "onb_reproducing_kernel",
    "monomial_values",
]

MultiIndex = tuple

MAX_ONB_DEGREE = 8
MAX_ONB_VARS = 4
# relative residual below which a monomial is treated as linearly dependent
DEPENDENCE_TOL = 1e-11


class OracleError(RuntimeError):
    pass


def graded_multi_indices(nvars, degree):
    """All exponent tuples of total degree ``<= degree`` in graded lex order.

    Within one total degree, tuples are sorted lexicographically with the
    largest leading exponent first, e.g. ``x^2, xy, y^2``.
    """
    out = []
    for k in range(degree + 1):
        block = [
            c for c in itertools.product(range(k, -1, -1), repeat=nvars) if sum(c) == k
        ]
        out.extend(block)
    return out


def _log_sphere_moment(beta):
    return (
        sum(math.lgamma((b + 1) / 2.0) for b in beta)
        - math.lgamma((sum(beta) + len(beta)) / 2.0)
    )


def monomial_sphere_integral(beta, dim):
    """Integral of ``y^beta`` over ``S^dim`` with surface measure.

    Zero if any exponent is odd, else
    ``2 prod Gamma((beta_j + 1)/2) / Gamma((|beta| + dim + 1)/2)``.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != dim + 1:
        raise ValueError(f"multi-index {beta} has length {len(beta)}, expected {dim + 1}")
    if any(b < 0 for b in beta):
        raise ValueError(f"negative exponent in {beta}")
    if any(b % 2 for b in beta):
        return 0.0
    return 2.0 * math.exp(_log_sphere_moment(beta))


def monomial_ball_integral(beta, w):
    """Integral of ``x^beta (1 - |x|^2)^(mu - 1/2)`` over ``B^d``.

    Computed in polar form: a radial Beta integral times the sphere moment
    on ``S^(d-1)``.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != w.d:
        raise ValueError(f"multi-index {beta} has length {len(beta)}, expected {w.d}")
    if any(b % 2 for b in beta):
        return 0.0
    q = sum(beta)
    # int_0^1 r^(q+d-1) (1-r^2)^(mu-1/2) dr = B((q+d)/2, mu+1/2) / 2
    log_radial = (
        math.lgamma((q + w.d) / 2.0) + math.lgamma(w.mu + 0.5)
        - math.lgamma((q + w.d) / 2.0 + w.mu + 0.5) - math.log(2.0)
    )
    return 2.0 * math.exp(log_radial + _log_sphere_moment(beta))


def monomial_ball_integral_via_sphere(beta, w):
    """Same integral, recovered from ``S^(d+m)`` through the ball/sphere integration identity.

    With ``f(y) = y_1^beta_1 ... y_d^beta_d`` the inner ``S^m`` integral is
    the constant ``|S^m| x^beta``.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != w.d:
        raise ValueError(f"multi-index {beta} has length {len(beta)}, expected {w.d}")
    lifted = beta + (0,) * (w.m + 1)
    return monomial_sphere_integral(lifted, w.d + w.m) / sphere_area(w.m)


def monomial_integral(beta, domain):
    if isinstance(domain, Sphere):
        return monomial_sphere_integral(beta, domain.dim)
    return monomial_ball_integral(beta, domain.w)


def monomial_values(exponents, x):
    """Matrix of monomial values, shape ``(npoints, len(exponents))``."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    exps = np.asarray(exponents, dtype=int)
    top = int(exps.max()) if exps.size else 0
    # powers[p, i, k] = x[p, i]**k
    powers = x[:, :, None] ** np.arange(top + 1)
    out = np.ones((x.shape[0], len(exps)))
    for i in range(x.shape[1]):
        out *= powers[:, i, exps[:, i]]
    return out


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal polynomials over a domain, grouped by degree.

    ``coeffs[j]`` holds the coefficients of element ``j`` over
    ``exponents``; ``degrees[j]`` is its total degree.
    """

    weight: object
    degree: int
    exponents: tuple
    coeffs: np.ndarray
    degrees: np.ndarray
    gram_tolerance: float

    def __call__(self, x):
        """Values of all elements at points ``x``, shape ``(npoints, nelements)``."""
        return monomial_values(self.exponents, x) @ self.coeffs.T

    def slice_dims(self):
        return tuple(int(np.sum(self.degrees == k)) for k in range(self.degree + 1))


def _nvars(domain):
    if isinstance(domain, Sphere):
        return domain.dim + 1
    if isinstance(domain, WeightedBall):
        return domain.w.d
    raise TypeError(f"unsupported domain {domain!r}")


def build_onb(domain, degree):
    """Orthonormal basis of polynomials of degree ``<= degree`` on ``domain``.

    Modified Gram-Schmidt (two passes) over the graded monomials, with all
    inner products taken from exact monomial integrals. On spheres,
    monomials that are dependent modulo ``|y|^2 = 1`` are skipped, so the
    degree-``k`` slice spans the spherical harmonics of degree ``k``.
    """
    nvars = _nvars(domain)
    if degree > MAX_ONB_DEGREE or nvars > MAX_ONB_VARS:
        raise OracleError(
            f"oracle capped at degree {MAX_ONB_DEGREE} and {MAX_ONB_VARS} variables "
            f"(asked for degree {degree} in {nvars} variables)"
        )
    exps = graded_multi_indices(nvars, degree)
    nm = len(exps)
    gram = np.empty((nm, nm))
    for i in range(nm):
        for j in range(i, nm):
            s = tuple(a + b for a, b in zip(exps[i], exps[j]))
            gram[i, j] = gram[j, i] = monomial_integral(s, domain)

    basis, gbasis, degs = [], [], []
    for j in range(nm):
        v = np.zeros(nm)
        v[j] = 1.0
        norm0 = gram[j, j]
        for _ in range(2):
            for q, gq in zip(basis, gbasis):
                v = v - (gq @ v) * q
        nrm2 = v @ gram @ v
        if nrm2 <= DEPENDENCE_TOL * norm0:
            if isinstance(domain, Sphere):
                continue
            cond = np.linalg.cond(gram[: j + 1, : j + 1])
            raise OracleError(
                f"Gram matrix numerically singular at monomial {exps[j]} "
                f"(condition ~{cond:.3g}); try a lower degree"
            )
        v = v / math.sqrt(nrm2)
        basis.append(v)
        gbasis.append(gram @ v)
        degs.append(sum(exps[j]))
    coeffs = np.array(basis)
    err = float(np.max(np.abs(coeffs @ gram @ coeffs.T - np.eye(len(basis)))))
    if err > 1e-10:
        raise OracleError(f"orthonormality defect {err:.3g} exceeds 1e-10; try a lower degree")
    coeffs.flags.writeable = False
    return OrthonormalBasis(domain, degree, tuple(exps), coeffs, np.array(degs), err)


def onb_kernel(basis, n, x, y):
    """Degree-``n`` projection kernel ``sum_j P_{n,j}(x) P_{n,j}(y)``.

    ``x`` and ``y`` are single points or equally long arrays of points
    (evaluated pairwise).
    """
    if n > basis.degree:
        raise ValueError(f"degree {n} exceeds basis degree {basis.degree}")
    sel = basis.degrees == n
    px = basis(x)[:, sel]
    py = basis(y)[:, sel]
    out = np.sum(px * py, axis=1)
    return float(out[0]) if np.ndim(x) == 1 else out


def onb_reproducing_kernel(basis, n, x, y):
    """``K_n`` oracle: sum of :func:`onb_kernel` over degrees ``<= n``."""
    if n > basis.degree:
        raise ValueError(f"degree {n} exceeds basis degree {basis.degree}")
    sel = basis.degrees <= n
    out = np.sum(basis(x)[:, sel] * basis(y)[:, sel], axis=1)
    return float(out[0]) if np.ndim(x) == 1 else out
