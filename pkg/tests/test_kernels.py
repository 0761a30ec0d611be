import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_vectors
from gmmnys.data import SparseVector
from gmmnys.kernels import (
    KernelSpec,
    frbf_from_rho,
    gmm,
    kernel,
    kernel_matrix,
    rho,
    transform,
    transform_matrix,
)


def test_transform_example(sv):
    t = transform(sv([2, -1, 3]))
    np.testing.assert_array_equal(t.to_dense(), [2, 0, 0, 1, 3, 0])


def test_transform_zero_and_negative(sv):
    t = transform(sv([0, 0, 0, 0]))
    assert t.nnz == 0 and t.dim == 8
    t = transform(SparseVector.from_entries([(1, -5)], dim=1))
    assert t.entries == [(2, 5.0)] and t.dim == 2


def test_transform_matrix_matches_vector(rng):
    vecs = random_vectors(rng, 12, 7)
    T = transform_matrix(vecs).toarray()
    for r, v in enumerate(vecs):
        np.testing.assert_array_equal(T[r], transform(v).to_dense())


def test_gmm_examples(sv):
    u = sv([2, -1, 3])
    assert gmm(u, u) == 1.0
    assert gmm(sv([1, 0]), sv([0, 1])) == 0.0
    # min-sum 1 and max-sum 9 over [2,0,0,1,3,0] vs [1,0,2,0,0,1]
    assert gmm(u, sv([1, 2, -1])) == pytest.approx(1 / 9, abs=1e-15)
    assert gmm(sv([0, 0]), sv([0, 0])) == 0.0


def test_rho_examples(sv):
    assert rho(sv([3, 4]), sv([3, 4])) == pytest.approx(1.0)
    assert rho(sv([1, 0]), sv([0, 1])) == 0.0
    assert rho(sv([1, 1]), sv([1, -1])) == 0.0
    assert rho(sv([0, 0]), sv([1, 1])) == 0.0


def test_kernel_dispatch(sv):
    u, v = sv([1, 2, 0]), sv([0, 1, 1])
    r = rho(u, v)
    assert kernel(KernelSpec.gmm(), u, v) == gmm(u, v)
    assert kernel(KernelSpec.rbf(2.0), u, v) == pytest.approx(math.exp(-2 * (1 - r)))
    want = 0.5 * math.exp(-2 * (1 - r)) + 0.5 * math.exp(-2 * (1 + r))
    assert kernel(KernelSpec.frbf(2.0), u, v) == pytest.approx(want)


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        KernelSpec("poly")
    with pytest.raises(ValueError):
        KernelSpec("rbf")
    with pytest.raises(ValueError):
        KernelSpec("gmm", 1.0)
    spec = KernelSpec.frbf(3)
    assert KernelSpec.from_dict(spec.to_dict()) == spec


def test_kernel_matrix_small_examples(sv):
    u = sv([0.5, -2])
    np.testing.assert_array_equal(kernel_matrix(KernelSpec.gmm(), [u], [u]), [[1.0]])
    e = [sv([1, 0]), sv([0, 1])]
    K = kernel_matrix(KernelSpec.rbf(1.0), e, e)
    np.testing.assert_allclose(K, [[1, math.exp(-1)], [math.exp(-1), 1]], rtol=1e-15)


@pytest.mark.parametrize("spec", [KernelSpec.gmm(), KernelSpec.rbf(3.0), KernelSpec.frbf(11.0)])
def test_kernel_matrix_matches_pairwise_loop(rng, spec):
    vecs = random_vectors(rng, 5, 9, density=0.6)
    vecs[2] = SparseVector.from_dense(np.zeros(9))
    others = random_vectors(rng, 4, 9, density=0.6)
    K = kernel_matrix(spec, vecs, others)
    oracle = np.array([[kernel(spec, a, b) for b in others] for a in vecs])
    np.testing.assert_allclose(K, oracle, rtol=1e-12, atol=1e-14)
    S = kernel_matrix(spec, vecs, vecs)
    np.testing.assert_array_equal(S, S.T)


@pytest.mark.parametrize("spec", [KernelSpec.gmm(), KernelSpec.frbf(1.0), KernelSpec.frbf(11.0)])
def test_kernel_matrix_psd(rng, spec):
    vecs = random_vectors(rng, 50, 20)
    K = kernel_matrix(spec, vecs, vecs)
    lam = np.linalg.eigvalsh(K)
    assert lam[0] >= -1e-8 * lam[-1]


def test_frbf_monotone_for_nonnegative_rho():
    r = np.linspace(0, 1, 1001)
    for gamma in (0.1, 1.0, 11.0, 120.0):
        assert np.all(np.diff(frbf_from_rho(r, gamma)) >= 0)


coords = st.floats(min_value=-100, max_value=100, allow_nan=False).map(lambda x: 0.0 if abs(x) < 1e-3 else x)
pairs = st.integers(1, 10).flatmap(
    lambda d: st.tuples(st.lists(coords, min_size=d, max_size=d), st.lists(coords, min_size=d, max_size=d))
)


@settings(max_examples=200, deadline=None)
@given(pairs, st.sampled_from([0.5, 2.0, 4.0, 0.25, 8.0]))
def test_gmm_range_symmetry_scale(pair, c):
    u, v = SparseVector.from_dense(pair[0]), SparseVector.from_dense(pair[1])
    g = gmm(u, v)
    assert 0.0 <= g <= 1.0
    assert g == gmm(v, u)
    # powers of two scale min and max sums without rounding
    assert gmm(u.scaled(c), v.scaled(c)) == g


@settings(max_examples=100, deadline=None)
@given(pairs, st.floats(min_value=1e-3, max_value=1e3))
def test_gmm_scale_invariance_any_c(pair, c):
    u, v = SparseVector.from_dense(pair[0]), SparseVector.from_dense(pair[1])
    assert gmm(u.scaled(c), v.scaled(c)) == pytest.approx(gmm(u, v), rel=1e-12, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.lists(coords, min_size=1, max_size=20))
def test_transform_preserves_l1(x):
    u = SparseVector.from_dense(x)
    t = transform(u)
    assert np.all(t.values > 0)
    assert t.values.sum() == pytest.approx(np.abs(x).sum(), rel=1e-15)
