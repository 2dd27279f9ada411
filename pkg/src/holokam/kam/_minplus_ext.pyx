# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float64 min-plus kernels; same contracts as ``_minplus_py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def product(const double[:, ::1] A, const double[:, ::1] B):
    cdef Py_ssize_t n = A.shape[0], m = A.shape[1], p = B.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double best, v, a
    out = np.empty((n, p), dtype=np.float64)
    cdef double[:, ::1] C = out
    with nogil:
        for i in range(n):
            for j in range(p):
                C[i, j] = A[i, 0] + B[0, j]
            for k in range(1, m):
                a = A[i, k]
                for j in range(p):
                    v = a + B[k, j]
                    if v < C[i, j]:
                        C[i, j] = v
    return out


def vecmat(const double[::1] u, const double[:, ::1] A):
    cdef Py_ssize_t n = A.shape[0], p = A.shape[1]
    cdef Py_ssize_t y, x
    cdef double v, uy
    out = np.empty(p, dtype=np.float64)
    cdef double[::1] r = out
    with nogil:
        for x in range(p):
            r[x] = u[0] + A[0, x]
        for y in range(1, n):
            uy = u[y]
            for x in range(p):
                v = uy + A[y, x]
                if v < r[x]:
                    r[x] = v
    return out


def closure(const double[:, ::1] A):
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double pik, v
    out = np.array(A, dtype=np.float64, copy=True)
    cdef double[:, ::1] P = out
    with nogil:
        for k in range(n):
            for i in range(n):
                pik = P[i, k]
                for j in range(n):
                    v = pik + P[k, j]
                    if v < P[i, j]:
                        P[i, j] = v
    return out


def karp(const double[:, ::1] A):
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t k, v, y
    cdef double best, worst, val, cand
    D_arr = np.zeros((n + 1, n), dtype=np.float64)
    cdef double[:, ::1] D = D_arr
    with nogil:
        for k in range(1, n + 1):
            for v in range(n):
                best = D[k - 1, 0] + A[0, v]
                for y in range(1, n):
                    cand = D[k - 1, y] + A[y, v]
                    if cand < best:
                        best = cand
                D[k, v] = best
        best = 0.0
        for v in range(n):
            worst = (D[n, v] - D[0, v]) / n
            for k in range(1, n):
                val = (D[n, v] - D[k, v]) / (n - k)
                if val > worst:
                    worst = val
            if v == 0 or worst < best:
                best = worst
    return best
