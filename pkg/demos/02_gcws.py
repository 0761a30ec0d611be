"""0-bit GCWS: collision rates track the GMM similarity.

Run: python demos/02_gcws.py
"""

import numpy as np

from gmmnys.data import SparseVector
from gmmnys.gcws import GcwsParams, gcws_features, gcws_sketch_matrix
from gmmnys.kernels import gmm

rng = np.random.default_rng(1)
params = GcwsParams(k=4096, b=8, seed=7)

print("noise   GMM     collision rate")
z = rng.normal(size=40)
for noise in (0.1, 0.5, 1.0, 2.0, 4.0):
    u = SparseVector.from_dense(z + noise * rng.normal(size=40))
    v = SparseVector.from_dense(z + noise * rng.normal(size=40))
    S = gcws_sketch_matrix(params, [u, v])
    print(f"{noise:5.1f}   {gmm(u, v):.4f}  {np.mean(S[0] == S[1]):.4f}")

# Each sample keeps only its lowest b bits and becomes a one-hot block, so
# a vector turns into a sparse binary row with exactly k ones.
F = gcws_features(GcwsParams(k=16, b=4, seed=7), [u, v])
print(f"\nfeature matrix {F.shape}, ones per row {F.getnnz(axis=1).tolist()}")
print(f"shared ones {int((F[0] @ F[1].T).toarray()[0, 0])} of 16")
