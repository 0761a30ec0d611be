import math

import numpy as np
import pytest

from gmmnys.data import SparseVector, l2_normalize
from gmmnys.kernels import frbf_from_rho, rbf_from_rho, rho
from gmmnys.rff import RffParams, frff_featurize, rff_features, rff_featurize


def unit(x):
    return l2_normalize(SparseVector.from_dense(x))


def test_params_validation():
    with pytest.raises(ValueError):
        RffParams(k=0, gamma=1.0)
    with pytest.raises(ValueError):
        RffParams(k=4, gamma=0.0)
    with pytest.raises(ValueError):
        rff_featurize(RffParams(k=4, gamma=1.0, folded=True), unit([1, 0]))
    with pytest.raises(ValueError):
        frff_featurize(RffParams(k=4, gamma=1.0), unit([1, 0]))


def test_deterministic_and_bounded(rng):
    u = unit(rng.normal(size=6))
    k = 256
    p = RffParams(k=k, gamma=2.0, seed=9)
    z = rff_featurize(p, u)
    np.testing.assert_array_equal(z, rff_featurize(p, u))
    assert np.all(np.abs(z) <= math.sqrt(2 / k))
    f = frff_featurize(RffParams(k=k, gamma=2.0, seed=9, folded=True), u)
    assert np.all(np.abs(f) <= math.sqrt(1 / k))


def test_batch_equals_single(rng):
    vecs = [unit(rng.normal(size=8) * (rng.random(8) < 0.6)) for _ in range(6)]
    for folded in (False, True):
        p = RffParams(k=50, gamma=3.0, seed=1, folded=folded)
        Z = rff_features(p, vecs)
        single = frff_featurize if folded else rff_featurize
        for r, v in enumerate(vecs):
            np.testing.assert_allclose(Z[r], single(p, v), rtol=1e-12, atol=1e-14)


def test_self_similarity_estimate():
    u = unit([0.3, -0.2, 0.9, 0.1])
    z = rff_featurize(RffParams(k=10**5, gamma=1.0, seed=3), u)
    assert abs(z @ z - 1.0) <= 0.02
    f = frff_featurize(RffParams(k=10**5, gamma=1.0, seed=3, folded=True), u)
    assert abs(f @ f - (0.5 + 0.5 * math.exp(-2))) <= 0.02


def test_orthogonal_pair_folded():
    u, v = unit([1, 1, 0]), unit([1, -1, 0])
    p = RffParams(k=10**5, gamma=1.0, seed=4, folded=True)
    assert abs(frff_featurize(p, u) @ frff_featurize(p, v) - math.exp(-1)) <= 0.02


def test_random_pair_estimate(rng):
    u, v = unit(rng.normal(size=10)), unit(rng.normal(size=10))
    p = RffParams(k=10**5, gamma=1.0, seed=6)
    want = math.exp(-(1 - rho(u, v)))
    assert abs(rff_featurize(p, u) @ rff_featurize(p, v) - want) <= 0.02


@pytest.mark.parametrize("gamma", [1.0, 11.0])
def test_unbiased_over_seeds(rng, gamma):
    u = unit(rng.normal(size=12))
    v = unit(rng.normal(size=12) + 2 * u.to_dense())
    R, k = 50, 4096
    for folded, exact in ((False, rbf_from_rho), (True, frbf_from_rho)):
        est = []
        for s in range(R):
            Z = rff_features(RffParams(k=k, gamma=gamma, seed=s, folded=folded), [u, v])
            est.append(Z[0] @ Z[1])
        est = np.array(est)
        assert abs(est.mean() - exact(rho(u, v), gamma)) <= 3 * est.std(ddof=1) / math.sqrt(R)


def test_zero_vector_features():
    p = RffParams(k=8, gamma=1.0, seed=0, folded=True)
    np.testing.assert_allclose(frff_featurize(p, SparseVector.from_dense([0, 0])), math.sqrt(1 / 8))
