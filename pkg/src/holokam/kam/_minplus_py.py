"""Min-plus kernels in plain numpy; work for float64 and object (exact) arrays."""

from fractions import Fraction

import numpy as np


def product(A, B):
    """``C[i, j] = min_k A[i, k] + B[k, j]``."""
    n = A.shape[0]
    C = np.empty((n, B.shape[1]), dtype=np.result_type(A, B))
    for i in range(n):
        C[i] = (A[i][:, None] + B).min(axis=0)
    return C


def vecmat(u, A):
    """``v[x] = min_y u[y] + A[y, x]``."""
    return (u[:, None] + A).min(axis=0)


def closure(A):
    """Minimum weight over walks of length >= 1 (Floyd-Warshall); A must have no negative cycle."""
    P = A.copy()
    for k in range(P.shape[0]):
        P = np.minimum(P, P[:, k][:, None] + P[k][None, :])
    return P


def karp(A):
    """Minimum cycle mean of the complete weighted digraph ``A`` (Karp's algorithm)."""
    n = A.shape[0]
    exact = A.dtype == object
    D = [np.zeros(n, dtype=A.dtype) if not exact else np.array([0] * n, dtype=object)]
    for _ in range(n):
        D.append(vecmat(D[-1], A))
    best = None
    for v in range(n):
        worst = None
        for k in range(n):
            num = D[n][v] - D[k][v]
            val = Fraction(num) / (n - k) if exact else num / (n - k)
            if worst is None or val > worst:
                worst = val
        if best is None or worst < best:
            best = worst
    if exact and isinstance(best, Fraction) and best.denominator == 1:
        best = best.numerator
    return best
