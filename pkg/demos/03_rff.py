"""Random Fourier features estimate the RBF and folded RBF kernels.

Run: python demos/03_rff.py
"""

import numpy as np

from gmmnys.data import SparseVector, l2_normalize
from gmmnys.kernels import frbf_from_rho, rbf_from_rho, rho
from gmmnys.rff import RffParams, rff_features

rng = np.random.default_rng(2)
u = l2_normalize(SparseVector.from_dense(rng.normal(size=20)))
v = l2_normalize(SparseVector.from_dense(rng.normal(size=20) + 2 * u.to_dense()))
r = rho(u, v)
gamma = 2.0
print(f"rho = {r:.4f}, exact RBF = {rbf_from_rho(r, gamma):.4f}, exact fRBF = {frbf_from_rho(r, gamma):.4f}")

# The estimate tightens roughly like 1/sqrt(k).
print("\n     k   RFF est   fRBF est")
for k in (64, 512, 4096, 32768):
    Z = rff_features(RffParams(k=k, gamma=gamma, seed=1), [u, v])
    F = rff_features(RffParams(k=k, gamma=gamma, seed=1, folded=True), [u, v])
    print(f"{k:6d}   {Z[0] @ Z[1]:.4f}    {F[0] @ F[1]:.4f}")
