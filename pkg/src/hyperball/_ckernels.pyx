# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled zonal-series kernels.

For query points x_p and nodes y_a the kernel value is

    K[p, a] = sum_j sw[j] * sum_k e[k] C_k(t_j),   t_j = <x_p, y_a> + bx[p] by[a] s[j]

with C_k the Gegenbauer polynomials generated by
C_k = A[k] t C_{k-1} - B[k] C_{k-2}. Each output entry is computed by one
thread in a fixed order, so results do not depend on the thread count.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange, parallel
from libc.stdlib cimport malloc, free
from libc.math cimport fabs

cnp.import_array()


cdef inline double _series(double a, double b, const double* s, const double* sw,
                           Py_ssize_t L, const double* A, const double* B,
                           const double* e, Py_ssize_t n,
                           double* t, double* c0, double* c1, double* acc) noexcept nogil:
    cdef Py_ssize_t j, k
    cdef double c2, out = 0.0
    for j in range(L):
        t[j] = a + b * s[j]
        if t[j] > 1.0:
            t[j] = 1.0
        elif t[j] < -1.0:
            t[j] = -1.0
        c0[j] = 0.0
        c1[j] = 1.0
        acc[j] = e[0]
    for k in range(1, n + 1):
        for j in range(L):
            c2 = A[k] * t[j] * c1[j] - B[k] * c0[j]
            c0[j] = c1[j]
            c1[j] = c2
            acc[j] = acc[j] + e[k] * c2
    for j in range(L):
        out = out + sw[j] * acc[j]
    return out


def zonal_matrix(const double[:, ::1] X, const double[::1] bx, const double[:, ::1] Y,
                 const double[::1] by, const double[::1] s, const double[::1] sw,
                 const double[::1] A, const double[::1] B, const double[::1] e, int threads=1):
    cdef Py_ssize_t P = X.shape[0], M = Y.shape[0], D = X.shape[1]
    cdef Py_ssize_t L = s.shape[0], n = e.shape[0] - 1
    cdef Py_ssize_t p, q, i
    cdef double a
    cdef double* buf
    out = np.empty((P, M))
    cdef double[:, ::1] K = out
    with nogil, parallel(num_threads=threads):
        buf = <double*> malloc(4 * L * sizeof(double))
        for p in prange(P, schedule="static"):
            for q in range(M):
                a = 0.0
                for i in range(D):
                    a = a + X[p, i] * Y[q, i]
                K[p, q] = _series(a, bx[p] * by[q], &s[0], &sw[0], L, &A[0], &B[0], &e[0], n,
                                  buf, buf + L, buf + 2 * L, buf + 3 * L)
        free(buf)
    return out


def lebesgue_sums(const double[:, ::1] X, const double[::1] bx, const double[:, ::1] Y,
                  const double[::1] by, const double[::1] wy, const double[::1] s,
                  const double[::1] sw, const double[::1] A, const double[::1] B,
                  const double[::1] e, int threads=1):
    cdef Py_ssize_t P = X.shape[0], M = Y.shape[0], D = X.shape[1]
    cdef Py_ssize_t L = s.shape[0], n = e.shape[0] - 1
    cdef Py_ssize_t p, q, i
    cdef double a, tot
    cdef double* buf
    out = np.empty(P)
    cdef double[::1] lam = out
    with nogil, parallel(num_threads=threads):
        buf = <double*> malloc(4 * L * sizeof(double))
        for p in prange(P, schedule="static"):
            tot = 0.0
            for q in range(M):
                a = 0.0
                for i in range(D):
                    a = a + X[p, i] * Y[q, i]
                tot = tot + wy[q] * fabs(_series(a, bx[p] * by[q], &s[0], &sw[0], L, &A[0], &B[0],
                                                 &e[0], n, buf, buf + L, buf + 2 * L, buf + 3 * L))
            lam[p] = tot
        free(buf)
    return out
