import numpy as np
import pytest

from conftest import random_vectors
from gmmnys.data import SparseVector, l2_normalize_rows, vectors_to_csr
from gmmnys.kernels import KernelSpec, gmm, kernel_matrix
from gmmnys.nystrom import (
    DegenerateKernelError,
    nystrom_features,
    nystrom_featurize,
    nystrom_fit,
    projector_from_kernel,
)


def test_single_landmark(sv):
    s = sv([0.5, -1.0, 2.0])
    model = nystrom_fit(KernelSpec.gmm(), [s], k=1)
    np.testing.assert_allclose(model.projector, [[1.0]])
    x = sv([1.0, 0.0, 1.0])
    np.testing.assert_allclose(nystrom_featurize(model, x), [gmm(x, s)])


@pytest.mark.parametrize("spec", [KernelSpec.gmm(), KernelSpec.rbf(2.0), KernelSpec.frbf(2.0)])
def test_full_rank_reconstruction(rng, spec):
    X = vectors_to_csr(random_vectors(rng, 60, 12))
    if spec.kind != "gmm":
        X = l2_normalize_rows(X)
    model = nystrom_fit(spec, X, k=60, seed=1)
    assert model.retained == 60
    Phi = nystrom_features(model, X)
    K = kernel_matrix(spec, X, X)
    assert np.linalg.norm(Phi @ Phi.T - K) <= 1e-6 * np.linalg.norm(K)


def test_gram_preserved_on_landmarks(rng):
    X = vectors_to_csr(random_vectors(rng, 80, 10))
    model = nystrom_fit(KernelSpec.gmm(), X, k=30, seed=4)
    P = nystrom_features(model, model.landmarks)
    K_ss = kernel_matrix(KernelSpec.gmm(), model.landmarks, model.landmarks)
    assert np.linalg.norm(P @ P.T - K_ss) <= 1e-6 * np.linalg.norm(K_ss)


def test_duplicate_landmark_is_dropped(sv):
    u, v, w = sv([1, 2, 0]), sv([0, -1, 3]), sv([2, 2, 2])
    model = nystrom_fit(KernelSpec.gmm(), [u, v, u, w], k=4)
    assert model.k == 4 and model.retained == 3
    F = nystrom_features(model, [u, v, w, sv([0, 0, 0])])
    assert np.all(np.isfinite(F))
    np.testing.assert_array_equal(F[3], 0.0)


def test_landmarks_distinct_and_seeded(rng):
    X = vectors_to_csr(random_vectors(rng, 40, 5))
    a = nystrom_fit(KernelSpec.gmm(), X, k=20, seed=7)
    b = nystrom_fit(KernelSpec.gmm(), X, k=20, seed=7)
    assert len(set(a.landmark_indices.tolist())) == 20
    np.testing.assert_array_equal(a.landmark_indices, b.landmark_indices)
    np.testing.assert_array_equal(a.projector, b.projector)
    assert (a.landmarks != X[a.landmark_indices]).nnz == 0


def test_errors(sv):
    X = [sv([1, 0]), sv([0, 1])]
    with pytest.raises(ValueError):
        nystrom_fit(KernelSpec.gmm(), X, k=3)
    with pytest.raises(ValueError):
        nystrom_fit(KernelSpec.gmm(), X, k=0)
    with pytest.raises(DegenerateKernelError, match="degenerate landmark kernel"):
        nystrom_fit(KernelSpec.gmm(), [sv([0, 0]), sv([0, 0])], k=2)
    with pytest.raises(DegenerateKernelError):
        projector_from_kernel(np.zeros((0, 0)))


def test_featurize_subset_commutes(rng):
    X = vectors_to_csr(random_vectors(rng, 50, 8))
    model = nystrom_fit(KernelSpec.gmm(), X, k=10, seed=0)
    F = nystrom_features(model, X)
    idx = np.array([3, 17, 41])
    np.testing.assert_allclose(nystrom_features(model, X[idx]), F[idx], rtol=0, atol=1e-15)


def test_wider_inputs_are_accepted(sv):
    model = nystrom_fit(KernelSpec.gmm(), [sv([1, 2]), sv([2, 1])], k=2)
    F = nystrom_features(model, [SparseVector.from_entries([(1, 1.0), (5, 3.0)])])
    assert F.shape == (1, 2) and np.all(np.isfinite(F))


@pytest.mark.slow
def test_error_decreases_with_k(rng):
    n = 1200
    X = vectors_to_csr(random_vectors(rng, n, 16, density=0.5))
    pairs = rng.integers(0, n, size=(200, 2))
    K = kernel_matrix(KernelSpec.gmm(), X, X)[pairs[:, 0], pairs[:, 1]]
    medians = []
    for k in (32, 128, 512):
        errs = []
        for seed in range(5):
            model = nystrom_fit(KernelSpec.gmm(), X, k=k, seed=seed)
            F = nystrom_features(model, X)
            approx = np.einsum("ij,ij->i", F[pairs[:, 0]], F[pairs[:, 1]])
            errs.append(np.mean(np.abs(approx - K)))
        medians.append(np.median(errs))
    assert medians[0] >= medians[1] >= medians[2]
