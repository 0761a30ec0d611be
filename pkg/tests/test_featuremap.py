import json

import numpy as np
import pytest
import scipy.sparse as sp

from gmmnys.data import SparseVector, l2_normalize_rows
from gmmnys.featuremap import PIPELINES, apply_map, fit_map, from_dict, load_map, save_map, to_dict
from gmmnys.gcws import GcwsParams, gcws_sketch_matrix
from gmmnys.kernels import KernelSpec, kernel_matrix
from gmmnys.synthetic import make_clusters


@pytest.fixture(scope="module")
def splits():
    return make_clusters(60, 20, dim=6, n_classes=3, seed=3)


def dense(F):
    return F.toarray() if sp.issparse(F) else F


@pytest.mark.parametrize("pipeline", PIPELINES)
def test_save_load_round_trip(tmp_path, splits, pipeline):
    train, test = splits
    fmap = fit_map(pipeline, train, k=16, b=4, gamma=2.0, seed=5)
    path = tmp_path / "map.json"
    save_map(fmap, path)
    back = load_map(path)
    assert back.pipeline == pipeline and back.kind == fmap.kind
    np.testing.assert_array_equal(dense(apply_map(back, test)), dense(apply_map(fmap, test)))
    assert apply_map(back, test).shape[1] == fmap.output_dim


def test_schema_fields(splits):
    train, _ = splits
    d = to_dict(fit_map("gmm-nys", train, k=8, seed=1))
    assert d["format"] == "gmmnys-featuremap" and d["version"] == 1
    assert set(d["state"]) >= {"landmarks", "projector", "landmark_indices"}
    json.dumps(d)
    with pytest.raises(ValueError):
        from_dict({**d, "version": 2})
    with pytest.raises(ValueError):
        from_dict({**d, "format": "other"})


def test_fit_map_argument_checks(splits):
    train, _ = splits
    with pytest.raises(ValueError):
        fit_map("poly", train, k=4)
    with pytest.raises(ValueError):
        fit_map("gmm-nys", train)
    with pytest.raises(ValueError):
        fit_map("rbf-rff", train, k=4)


def test_gcws_train_and_test_share_draws(splits):
    train, test = splits
    fmap = fit_map("gmm-gcws", train, k=32, b=8, seed=2)
    # featurizing the splits separately equals featurizing them together
    joint = gcws_sketch_matrix(GcwsParams(k=32, b=8, seed=2), sp.vstack([train.matrix, test.matrix]))
    alone = gcws_sketch_matrix(GcwsParams(k=32, b=8, seed=2), test.matrix)
    np.testing.assert_array_equal(alone, joint[len(train):])
    np.testing.assert_array_equal(apply_map(fmap, train).getnnz(axis=1), 32)


def test_landmarks_come_from_train_only(splits):
    train, _ = splits
    fmap = fit_map("gmm-nys", train, k=20, seed=0)
    m = fmap.model
    assert np.all(m.landmark_indices < len(train))
    assert (m.landmarks != train.matrix[m.landmark_indices]).nnz == 0


def test_rbf_maps_normalize_inputs(splits):
    train, test = splits
    for pipeline in ("rbf-nys", "rbf-rff"):
        fmap = fit_map(pipeline, train, k=10, gamma=1.0, seed=0)
        np.testing.assert_allclose(apply_map(fmap, test.matrix * 3.0), apply_map(fmap, test), atol=1e-12)


@pytest.mark.parametrize("pipeline, spec", [("gmm-nys", KernelSpec.gmm()), ("rbf-nys", KernelSpec.rbf(3.0))])
def test_nystrom_map_exact_at_k_equals_n(pipeline, spec):
    train, _ = make_clusters(100, 1, dim=8, n_classes=4, spread=0.4, seed=9)
    fmap = fit_map(pipeline, train, k=100, gamma=spec.gamma, seed=0)
    F = apply_map(fmap, train)
    X = train.matrix if spec.kind == "gmm" else l2_normalize_rows(train.matrix)
    K = kernel_matrix(spec, X, X)
    assert np.linalg.norm(F @ F.T - K) <= 1e-6 * np.linalg.norm(K)


def test_linear_map_truncates_and_pads(splits):
    train, _ = splits
    fmap = fit_map("linear", train)
    wide = [SparseVector.from_entries([(1, 1.0), (train.dim + 3, 2.0)])]
    assert apply_map(fmap, wide).shape == (1, train.dim)
    narrow = [SparseVector.from_entries([(1, 1.0)], dim=1)]
    assert apply_map(fmap, narrow).shape == (1, train.dim)
