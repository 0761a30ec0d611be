"""Nystrom feature maps for the GMM, RBF and folded-RBF kernels.

Fitting samples ``k`` landmarks from the training rows, builds the landmark
kernel ``K_ss = V diag(lam) V^T`` and keeps the projector
``P = V_m diag(lam_m ** -0.5)`` over the eigenpairs above a relative
threshold. A vector ``x`` maps to ``K(x, landmarks) @ P``, so that
``phi(x) . phi(y) = K_xs K_ss^+ K_sy``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .data import SparseVector, as_csr, csr_to_vectors
from .kernels import KernelSpec, kernel_matrix
from .linalg import eigh

DEFAULT_THRESHOLD = 1e-10


class DegenerateKernelError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NystromModel:
    spec: KernelSpec
    landmarks: sp.csr_matrix
    projector: np.ndarray
    seed: int
    landmark_indices: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)
    threshold: float = DEFAULT_THRESHOLD

    @property
    def k(self) -> int:
        return self.landmarks.shape[0]

    @property
    def retained(self) -> int:
        """Number of kept eigenpairs, i.e. the feature dimension."""
        return self.projector.shape[1]

    @property
    def dim(self) -> int:
        return self.landmarks.shape[1]

    def landmark_vectors(self) -> list[SparseVector]:
        return csr_to_vectors(self.landmarks)


def projector_from_kernel(K_ss: np.ndarray, threshold: float = DEFAULT_THRESHOLD):
    """Return ``(projector, eigenvalues)`` for a landmark kernel matrix."""
    K_ss = 0.5 * (K_ss + K_ss.T)
    lam, V = eigh(K_ss)
    lam_max = lam[0] if lam.size else 0.0
    if not lam_max > 0:
        raise DegenerateKernelError("degenerate landmark kernel")
    keep = lam > threshold * lam_max
    return V[:, keep] / np.sqrt(lam[keep]), lam


def nystrom_fit(spec: KernelSpec, train, k: int, seed: int = 0,
                threshold: float = DEFAULT_THRESHOLD) -> NystromModel:
    """Sample ``k`` distinct landmarks from ``train`` and build the projector."""
    X = as_csr(train)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} landmarks requested from {n} training points")
    idx = np.random.default_rng(seed).choice(n, size=k, replace=False)
    S = X[idx]
    S.sort_indices()
    P, lam = projector_from_kernel(kernel_matrix(spec, S, S), threshold)
    return NystromModel(spec, S, P, seed, idx, lam, threshold)


def nystrom_features(model: NystromModel, X) -> np.ndarray:
    """``(n, m)`` features for every row of ``X``."""
    X = as_csr(X)
    dim = max(X.shape[1], model.dim)
    K = kernel_matrix(model.spec, as_csr(X, dim), as_csr(model.landmarks, dim))
    return K @ model.projector


def nystrom_featurize(model: NystromModel, x: SparseVector) -> np.ndarray:
    return nystrom_features(model, as_csr(x))[0]
