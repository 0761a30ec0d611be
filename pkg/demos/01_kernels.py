"""Exact GMM and RBF kernels on a handful of vectors.

Run: python demos/01_kernels.py
"""

import numpy as np

from gmmnys.data import SparseVector
from gmmnys.kernels import KernelSpec, gmm, kernel_matrix, rho, transform

u = SparseVector.from_dense([2, -1, 3])
v = SparseVector.from_dense([1, 2, -1])

# The sign-split transform puts positive parts at odd and negative parts at
# even positions, so every coordinate becomes nonnegative.
print("u      =", u.to_dense())
print("split u =", transform(u).to_dense())
print("split v =", transform(v).to_dense())

# GMM is the ratio of the coordinate-wise min-sum to the max-sum.
print(f"GMM(u, v) = {gmm(u, v):.6f}  (1/9 = {1 / 9:.6f})")
print(f"rho(u, v) = {rho(u, v):.6f}")

# Scaling both vectors by the same positive constant leaves GMM unchanged.
print(f"GMM(10u, 10v) = {gmm(u.scaled(10), v.scaled(10)):.6f}")

rng = np.random.default_rng(0)
vecs = [SparseVector.from_dense(x) for x in rng.normal(size=(6, 4))]
for spec in (KernelSpec.gmm(), KernelSpec.rbf(1.0), KernelSpec.frbf(1.0)):
    K = kernel_matrix(spec, vecs, vecs)
    print(f"\n{spec.kind} kernel matrix (min eigenvalue {np.linalg.eigvalsh(K)[0]:+.3e}):")
    print(np.array2string(K, precision=3, suppress_small=True))
