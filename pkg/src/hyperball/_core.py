"""Backend dispatch for the zonal-series hot loops.

The compiled extension :mod:`hyperball._ckernels` is used when it imports;
otherwise, or when ``HYPERBALL_BACKEND=python`` is set, a numpy
implementation with the same contract is used. Both evaluate

    K[p, a] = sum_j sw[j] * sum_k e[k] C_k^lam(t_j),
    t_j = clip(<x_p, y_a> + bx[p] * by[a] * s[j], -1, 1)

and the Lebesgue sums ``sum_a wy[a] |K[p, a]|``. Results are independent
of the thread count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    if os.environ.get("HYPERBALL_BACKEND", "").lower() in ("python", "numpy"):
        raise ImportError("compiled backend disabled by HYPERBALL_BACKEND")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"
AVAILABLE = ("cython", "python") if _ckernels is not None else ("python",)

# fixed so that chunking never depends on the thread count
_CHUNK = 64


def default_threads():
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def recurrence_coefficients(lam, n):
    """Arrays ``A, B`` with ``C_k = A[k] t C_{k-1} - B[k] C_{k-2}`` (``C_{-1} = 0``)."""
    k = np.arange(n + 1, dtype=float)
    A = np.zeros(n + 1)
    B = np.zeros(n + 1)
    A[1:] = 2.0 * (k[1:] + lam - 1.0) / k[1:]
    B[1:] = (k[1:] + 2.0 * lam - 2.0) / k[1:]
    return A, B


def _series_numpy(T, A, B, e):
    c0 = np.zeros_like(T)
    c1 = np.ones_like(T)
    acc = np.full_like(T, e[0])
    for k in range(1, len(e)):
        c0, c1 = c1, A[k] * T * c1 - B[k] * c0
        acc += e[k] * c1
    return acc


def _block_numpy(X, bx, Y, by, s, sw, A, B, e):
    dots = np.einsum("pi,qi->pq", X, Y)
    prod = bx[:, None] * by[None, :]
    out = np.zeros_like(dots)
    for j in range(len(s)):
        T = np.clip(dots + prod * s[j], -1.0, 1.0)
        out += sw[j] * _series_numpy(T, A, B, e)
    return out


def _prepare(X, bx, Y, by, s, sw, A, B, e):
    c = np.ascontiguousarray
    return (c(X, dtype=float), c(bx, dtype=float), c(Y, dtype=float), c(by, dtype=float),
            c(s, dtype=float), c(sw, dtype=float), c(A, dtype=float), c(B, dtype=float),
            c(e, dtype=float))


def _chunked(fn, P, threads):
    starts = range(0, P, _CHUNK)
    if threads <= 1 or P <= _CHUNK:
        return [fn(i) for i in starts]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, starts))


def zonal_matrix(X, bx, Y, by, s, sw, A, B, e, threads=1, backend=None):
    """Kernel matrix of shape ``(len(X), len(Y))``."""
    args = _prepare(X, bx, Y, by, s, sw, A, B, e)
    backend = backend or BACKEND
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled backend is not available")
        return _ckernels.zonal_matrix(*args, threads=max(1, int(threads)))
    X, bx, Y, by, s, sw, A, B, e = args
    blocks = _chunked(
        lambda i: _block_numpy(X[i:i + _CHUNK], bx[i:i + _CHUNK], Y, by, s, sw, A, B, e),
        X.shape[0], threads,
    )
    return np.vstack(blocks) if blocks else np.empty((0, Y.shape[0]))


def lebesgue_sums(X, bx, Y, by, wy, s, sw, A, B, e, threads=1, backend=None):
    """``sum_a wy[a] |K[p, a]|`` for every query point ``p``."""
    X, bx, Y, by, s, sw, A, B, e = _prepare(X, bx, Y, by, s, sw, A, B, e)
    wy = np.ascontiguousarray(wy, dtype=float)
    backend = backend or BACKEND
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled backend is not available")
        return _ckernels.lebesgue_sums(X, bx, Y, by, wy, s, sw, A, B, e, threads=max(1, int(threads)))

    def run(i):
        K = _block_numpy(X[i:i + _CHUNK], bx[i:i + _CHUNK], Y, by, s, sw, A, B, e)
        # row-wise pairwise summation does not depend on the number of rows
        return np.sum(np.abs(K) * wy, axis=1)

    parts = _chunked(run, X.shape[0], threads)
    return np.concatenate(parts) if parts else np.empty(0)
