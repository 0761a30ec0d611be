"""Random Fourier features for the cosine-parameterized RBF kernel.

With ``x_j = sum_i u_i r_ij`` (``r_ij`` standard normal) and a phase
``w_j ~ U(0, 2 pi)``, the features ``sqrt(2/k) cos(sqrt(gamma) x_j + w_j)``
have inner products that estimate ``exp(-gamma (1 - rho))`` for unit
vectors. Dropping the phase gives ``sqrt(1/k) cos(sqrt(gamma) x_j)``,
whose inner products estimate the folded RBF kernel
``(exp(-gamma (1 - rho)) + exp(-gamma (1 + rho))) / 2``.

Normals come from Box-Muller over the counter-based uniforms, keyed by
``(seed, j, i)``, so the projection is shared by every input vector.
Inputs are expected to be L2-normalized by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .data import SparseVector, as_csr

_BLOCK_ELEMS = 1 << 22


@dataclass(frozen=True)
class RffParams:
    k: int
    gamma: float
    seed: int = 0
    dim: int | None = None
    folded: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.gamma > 0:
            raise ValueError("gamma must be > 0")


def projection(seed: int, j, i):
    """Standard normal ``r_ij`` for sample ids ``j`` and 1-based dims ``i``."""
    return rng.standard_normal(seed, j, i)


def phase(seed: int, j):
    """Uniform phase ``w_j`` on ``[0, 2 pi)``."""
    return 2.0 * np.pi * rng.uniform(seed, j, 0, rng.PHASE)


def _features(params: RffParams, proj: np.ndarray, js: np.ndarray) -> np.ndarray:
    arg = np.sqrt(params.gamma) * proj
    if params.folded:
        return np.sqrt(1.0 / params.k) * np.cos(arg)
    return np.sqrt(2.0 / params.k) * np.cos(arg + phase(params.seed, js))


def _single(params: RffParams, u: SparseVector) -> np.ndarray:
    js = np.arange(params.k)
    if u.nnz:
        R = projection(params.seed, js[None, :], u.indices[:, None])
        proj = u.values @ R
    else:
        proj = np.zeros(params.k)
    return _features(params, proj, js)


def rff_featurize(params: RffParams, u: SparseVector) -> np.ndarray:
    if params.folded:
        raise ValueError("params.folded is set; use frff_featurize")
    return _single(params, u)


def frff_featurize(params: RffParams, u: SparseVector) -> np.ndarray:
    if not params.folded:
        raise ValueError("params.folded is not set; use rff_featurize")
    return _single(params, u)


def rff_features(params: RffParams, X) -> np.ndarray:
    """Dense ``(n, k)`` features for every row of ``X`` (RFF or fRBF per ``params``)."""
    X = as_csr(X)
    n = X.shape[0]
    active = np.unique(X.indices)
    Xa = X[:, active]
    out = np.empty((n, params.k))
    block = max(1, min(params.k, _BLOCK_ELEMS // max(1, len(active), n)))
    for j0 in range(0, params.k, block):
        js = np.arange(j0, min(j0 + block, params.k))
        R = projection(params.seed, js[None, :], active[:, None] + 1)
        proj = np.asarray(Xa @ R).reshape(n, len(js))
        out[:, js] = _features(params, proj, js)
    return out
