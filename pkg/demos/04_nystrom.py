"""Nystrom features: kernel error shrinks with k and vanishes at k = n.

Run: python demos/04_nystrom.py
"""

import numpy as np

from gmmnys.kernels import KernelSpec, kernel_matrix
from gmmnys.nystrom import nystrom_features, nystrom_fit
from gmmnys.synthetic import make_clusters

train, _ = make_clusters(400, 1, dim=12, n_classes=4, seed=3)
X = train.matrix
spec = KernelSpec.gmm()
K = kernel_matrix(spec, X, X)

print("   k  retained  relative Frobenius error")
for k in (8, 32, 128, 400):
    model = nystrom_fit(spec, X, k=k, seed=0)
    Phi = nystrom_features(model, X)
    err = np.linalg.norm(Phi @ Phi.T - K) / np.linalg.norm(K)
    print(f"{k:4d}  {model.retained:8d}  {err:.3e}")
