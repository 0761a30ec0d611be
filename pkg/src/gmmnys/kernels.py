"""Exact GMM, RBF and folded-RBF kernels.

The GMM kernel works on the sign-split transform of a vector: coordinate
``i`` (1-based) of ``u`` goes to position ``2i-1`` when positive and to
``2i`` (negated) when negative, giving a nonnegative ``2D``-dim vector.
The RBF family is parameterized through the cosine similarity ``rho``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .data import SparseVector, as_csr, l2_norm, l2_normalize_rows

GMM = "gmm"
RBF = "rbf"
FRBF = "frbf"


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in (GMM, RBF, FRBF):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == GMM:
            if self.gamma is not None:
                raise ValueError("the GMM kernel takes no gamma")
        else:
            if self.gamma is None or not self.gamma > 0:
                raise ValueError(f"{self.kind} kernel needs gamma > 0")
            object.__setattr__(self, "gamma", float(self.gamma))

    @classmethod
    def gmm(cls):
        return cls(GMM)

    @classmethod
    def rbf(cls, gamma: float):
        return cls(RBF, gamma)

    @classmethod
    def frbf(cls, gamma: float):
        return cls(FRBF, gamma)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "gamma": self.gamma}

    @classmethod
    def from_dict(cls, d: dict) -> "KernelSpec":
        return cls(d["kind"], d.get("gamma"))


class TransformedVector(SparseVector):
    """Sign-split vector of dimension ``2D``; all stored values are positive."""

    def __post_init__(self):
        super().__post_init__()
        if np.any(self.values < 0):
            raise ValueError("transformed values must be nonnegative")


def transform(u: SparseVector) -> TransformedVector:
    pos = u.values > 0
    # 1-based: positive part at 2i-1, negative part at 2i
    idx = np.where(pos, 2 * u.indices - 1, 2 * u.indices)
    return TransformedVector(idx, np.abs(u.values), 2 * u.dim)


def transform_matrix(X) -> sp.csr_matrix:
    """Row-wise sign-split transform of an ``n x D`` matrix to ``n x 2D``."""
    X = as_csr(X)
    X.sort_indices()
    cols = np.where(X.data > 0, 2 * X.indices, 2 * X.indices + 1)
    out = sp.csr_matrix(
        (np.abs(X.data), cols, X.indptr.copy()), shape=(X.shape[0], 2 * X.shape[1])
    )
    out.eliminate_zeros()
    return out


def gmm(u: SparseVector, v: SparseVector) -> float:
    """Generalized min-max similarity; 0 when both vectors are zero."""
    dim = 2 * max(u.dim, v.dim)
    tu = transform(u).to_dense(dim)
    tv = transform(v).to_dense(dim)
    den = np.maximum(tu, tv).sum()
    if den == 0:
        return 0.0
    return float(np.minimum(tu, tv).sum() / den)


def rho(u: SparseVector, v: SparseVector) -> float:
    """Cosine similarity; 0 if either vector is zero."""
    if u.nnz == 0 or v.nnz == 0:
        return 0.0
    # scale by the largest entry first so tiny vectors do not underflow
    a = u.values / np.max(np.abs(u.values))
    b = v.values / np.max(np.abs(v.values))
    _, iu, iv = np.intersect1d(u.indices, v.indices, assume_unique=True, return_indices=True)
    r = np.dot(a[iu], b[iv]) / (l2_norm(a) * l2_norm(b))
    return float(np.clip(r, -1.0, 1.0))


def rbf_from_rho(r, gamma: float):
    return np.exp(-gamma * (1.0 - r))


def frbf_from_rho(r, gamma: float):
    return 0.5 * np.exp(-gamma * (1.0 - r)) + 0.5 * np.exp(-gamma * (1.0 + r))


def kernel(spec: KernelSpec, u: SparseVector, v: SparseVector) -> float:
    if spec.kind == GMM:
        return gmm(u, v)
    r = rho(u, v)
    if spec.kind == RBF:
        return float(rbf_from_rho(r, spec.gamma))
    return float(frbf_from_rho(r, spec.gamma))


def _gmm_matrix(A: sp.csr_matrix, B: sp.csr_matrix) -> np.ndarray:
    # A, B are transformed (nonnegative) rows. For each row a of A only the
    # columns in supp(a) contribute to the min-sum; the max-sum follows from
    # sum(max) = |a|_1 + |b|_1 - sum(min).
    Bc = B.tocsc()
    l1_a = np.asarray(A.sum(axis=1)).ravel()
    l1_b = np.asarray(B.sum(axis=1)).ravel()
    out = np.empty((A.shape[0], B.shape[0]))
    for r in range(A.shape[0]):
        lo, hi = A.indptr[r], A.indptr[r + 1]
        sub = Bc[:, A.indices[lo:hi]]
        vals = np.repeat(A.data[lo:hi], np.diff(sub.indptr))
        minsum = np.bincount(sub.indices, weights=np.minimum(sub.data, vals), minlength=B.shape[0])
        maxsum = l1_a[r] + l1_b - minsum
        with np.errstate(invalid="ignore", divide="ignore"):
            out[r] = np.where(maxsum > 0, minsum / maxsum, 0.0)
    return out


def rho_matrix(rows, cols) -> np.ndarray:
    A = l2_normalize_rows(rows)
    B = l2_normalize_rows(cols)
    return np.clip((A @ B.T).toarray(), -1.0, 1.0)


def kernel_matrix(spec: KernelSpec, rows, cols) -> np.ndarray:
    """Dense matrix ``M[i, j] = kernel(spec, rows[i], cols[j])``.

    ``rows`` and ``cols`` may be lists of SparseVector, Datasets, or
    (sparse) matrices with one vector per row.
    """
    A, B = as_csr(rows), as_csr(cols)
    dim = max(A.shape[1], B.shape[1])
    A, B = as_csr(A, dim), as_csr(B, dim)
    if spec.kind == GMM:
        return _gmm_matrix(transform_matrix(A), transform_matrix(B))
    r = rho_matrix(A, B)
    if spec.kind == RBF:
        return rbf_from_rho(r, spec.gamma)
    return frbf_from_rho(r, spec.gamma)
