"""0-bit generalized consistent weighted sampling (GCWS) for the GMM kernel.

For sample ``j`` and transformed coordinate ``i`` the draws
``r, c ~ Gamma(2, 1)`` and ``beta ~ U(0, 1)`` are regenerated from the
counter-based generator, so two vectors always see the same draws. Each
nonzero ``x = u~_i`` then gives::

    t = floor(log(x) / r + beta)
    z = exp(r * (t - beta))
    a = c / (z * exp(r))

and the sample is the index minimizing ``a``. We rank by
``log a = log c - r * (t - beta + 1)``, which has the same argmin.
The probability that two vectors pick the same index is close to their
GMM similarity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from . import rng
from .data import SparseVector, as_csr
from .kernels import transform, transform_matrix

# Upper bound on the (samples x nonzeros) work array of the batch path.
_BLOCK_ELEMS = 1 << 22


@dataclass(frozen=True)
class GcwsParams:
    k: int
    b: int = 8
    seed: int = 0
    dim: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 1 <= self.b <= 16:
            raise ValueError("b must be in [1, 16]")

    @property
    def width(self) -> int:
        """Length of the binary encoding, ``2**b * k``."""
        return (1 << self.b) * self.k


class GcwsDraw(NamedTuple):
    r: float
    c: float
    beta: float


def draws(seed, j, i):
    """Vectorized ``(r, c, beta)`` for sample ids ``j`` and 1-based indices ``i``."""
    r = rng.gamma2(seed, j, i, rng.GAMMA_R)
    c = rng.gamma2(seed, j, i, rng.GAMMA_C)
    beta = rng.uniform(seed, j, i, rng.BETA)
    return r, c, beta


def draw_for(seed: int, j: int, i: int) -> GcwsDraw:
    r, c, beta = draws(seed, j, i)
    return GcwsDraw(float(r), float(c), float(beta))


def _log_a(x, r, c, beta):
    t = np.floor(np.log(x) / r + beta)
    return np.log(c) - r * (t - beta + 1.0)


def gcws_sample(params: GcwsParams, u: SparseVector, j: int) -> int:
    """Sample ``j`` of ``u``: a transformed index in ``[1, 2D]``."""
    tu = transform(u)
    if tu.nnz == 0:
        raise ValueError("GCWS is undefined for the zero vector")
    r, c, beta = draws(params.seed, j, tu.indices)
    la = _log_a(tu.values, r, c, beta)
    # np.argmin returns the first minimum, i.e. the smallest index on ties
    return int(tu.indices[np.argmin(la)])


def gcws_sketch(params: GcwsParams, u: SparseVector) -> np.ndarray:
    """All ``k`` samples of ``u`` as an int array."""
    return gcws_sketch_matrix(params, as_csr(u))[0]


def gcws_sketch_matrix(params: GcwsParams, X) -> np.ndarray:
    """Samples for every row of ``X``: an ``(n, k)`` array of 1-based indices.

    Work is blocked over sample ids; draws are generated once per block for
    the transformed columns that actually occur in ``X``.
    """
    T = transform_matrix(as_csr(X))
    T.sort_indices()
    n = T.shape[0]
    counts = np.diff(T.indptr)
    if np.any(counts == 0):
        bad = int(np.flatnonzero(counts == 0)[0])
        raise ValueError(f"GCWS is undefined for the zero vector (row {bad})")
    out = np.empty((n, params.k), dtype=np.int64)
    if n == 0:
        return out

    active, col_pos = np.unique(T.indices, return_inverse=True)
    log_x = np.log(T.data)
    starts = T.indptr[:-1]
    positions = np.arange(T.nnz)
    row_of = np.repeat(np.arange(n), counts)
    block = max(1, min(params.k, _BLOCK_ELEMS // max(T.nnz, len(active))))
    for j0 in range(0, params.k, block):
        js = np.arange(j0, min(j0 + block, params.k))
        r, c, beta = draws(params.seed, js[:, None], active[None, :] + 1)
        r, c, beta = r[:, col_pos], c[:, col_pos], beta[:, col_pos]
        t = np.floor(log_x / r + beta)
        la = np.log(c) - r * (t - beta + 1.0)
        seg_min = np.minimum.reduceat(la, starts, axis=1)
        hit = la == seg_min[:, row_of]
        first = np.minimum.reduceat(np.where(hit, positions, T.nnz), starts, axis=1)
        out[:, js] = (T.indices[first] + 1).T
    return out


def encode_columns(samples: np.ndarray, b: int) -> np.ndarray:
    """Column of the single 1 in each block for an ``(n, k)`` sample array.

    Block ``j`` spans ``[j * 2**b, (j + 1) * 2**b)``; the lowest ``b`` bits
    ``m`` of a sample sit at offset ``2**b - 1 - m`` within the block.
    """
    samples = np.asarray(samples, dtype=np.int64)
    width = 1 << b
    m = samples & (width - 1)
    return np.arange(samples.shape[-1]) * width + (width - 1 - m)


def gcws_encode(params: GcwsParams, sketch) -> sp.csr_matrix:
    """One-hot encode a sketch of ``k`` samples as a ``1 x 2**b * k`` row."""
    sketch = np.asarray(sketch, dtype=np.int64).reshape(-1)
    if sketch.size != params.k:
        raise ValueError(f"sketch has {sketch.size} samples, expected {params.k}")
    return _encode_rows(sketch[None, :], params)


def _encode_rows(samples: np.ndarray, params: GcwsParams) -> sp.csr_matrix:
    n, k = samples.shape
    cols = encode_columns(samples, params.b).reshape(-1)
    indptr = np.arange(0, n * k + 1, k)
    return sp.csr_matrix((np.ones(n * k), cols, indptr), shape=(n, params.width))


def gcws_featurize(params: GcwsParams, u: SparseVector) -> sp.csr_matrix:
    return gcws_encode(params, gcws_sketch(params, u))


def gcws_features(params: GcwsParams, X) -> sp.csr_matrix:
    """Binary features for every row of ``X``; each row has exactly ``k`` ones."""
    return _encode_rows(gcws_sketch_matrix(params, X), params)
