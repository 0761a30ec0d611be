"""Symmetric eigendecomposition.

``eigh`` is the production path (LAPACK via numpy). ``jacobi_eigh`` is an
independent cyclic Jacobi solver, kept for cross-checking and for small
matrices.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class EigenDecomposition(NamedTuple):
    values: np.ndarray
    """Eigenvalues, sorted descending."""
    vectors: np.ndarray
    """Orthonormal eigenvectors as columns, aligned with ``values``."""


def _check(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if not np.array_equal(A, A.T):
        raise ValueError("matrix is not symmetric")
    return A


def _sorted(values, vectors) -> EigenDecomposition:
    order = np.argsort(values, kind="stable")[::-1]
    return EigenDecomposition(values[order], vectors[:, order])


def eigh(A) -> EigenDecomposition:
    """Full spectral decomposition of a symmetric matrix."""
    A = _check(A)
    w, V = np.linalg.eigh(A)
    return _sorted(w, V)


def jacobi_eigh(A, tol: float = 1e-12, max_sweeps: int = 30) -> EigenDecomposition:
    """Cyclic Jacobi rotations until ``off(A) <= tol * ||A||_F``.

    Each rotation zeroes one off-diagonal pair ``(p, q)``; sweeps visit all
    pairs in row order. O(n^3) per sweep, so meant for n up to a few hundred.
    """
    A = _check(A).copy()
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    if scale == 0:
        return _sorted(np.zeros(n), V)

    def off():
        return np.linalg.norm(A - np.diag(np.diag(A)))

    for _ in range(max_sweeps):
        if off() <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # A <- J^T A J with J = [[c, s], [-s, c]] on (p, q)
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap, aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        if off() > tol * scale:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return _sorted(np.diag(A).copy(), V)
