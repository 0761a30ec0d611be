"""Fitted feature maps for each pipeline, and their JSON persistence.

File layout (``version`` 1)::

    {
      "format": "gmmnys-featuremap",
      "version": 1,
      "pipeline": "gmm-nys",            # one of PIPELINES
      "kind": "nystrom",                # gcws | rff | nystrom | linear
      "params": {...},                  # constructor arguments
      "state": {...}                    # fitted state (Nystrom only)
    }

Nystrom ``state`` holds the landmarks as sparse rows (1-based indices),
the projector, the eigenvalues, the sampled row ids and the threshold.
Floats are written with ``repr`` precision, so a loaded map reproduces
the saved one's features bit for bit.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .data import as_csr, l2_normalize_rows, vectors_to_csr, SparseVector
from .gcws import GcwsParams, gcws_features
from .kernels import KernelSpec
from .nystrom import NystromModel, nystrom_features, nystrom_fit
from .rff import RffParams, rff_features

FORMAT = "gmmnys-featuremap"
VERSION = 1

PIPELINES = ("gmm-gcws", "gmm-nys", "rbf-nys", "rbf-rff", "frbf-rff", "linear")
RBF_FAMILY = ("rbf-nys", "rbf-rff", "frbf-rff")


@dataclass(frozen=True)
class LinearMap:
    """Identity map: the raw features, widened to the training dimension."""

    dim: int
    pipeline: str = "linear"
    kind = "linear"

    @property
    def output_dim(self) -> int:
        return self.dim

    def transform(self, X) -> sp.csr_matrix:
        X = as_csr(X)
        if X.shape[1] > self.dim:
            # features never seen in training carry zero weight
            return X[:, : self.dim]
        return as_csr(X, self.dim)

    def params(self) -> dict:
        return {"dim": self.dim}


@dataclass(frozen=True)
class GcwsMap:
    gcws: GcwsParams
    pipeline: str = "gmm-gcws"
    kind = "gcws"

    @property
    def output_dim(self) -> int:
        return self.gcws.width

    def transform(self, X) -> sp.csr_matrix:
        return gcws_features(self.gcws, X)

    def params(self) -> dict:
        p = self.gcws
        return {"k": p.k, "b": p.b, "seed": p.seed, "dim": p.dim}


@dataclass(frozen=True)
class RffMap:
    rff: RffParams
    pipeline: str = "rbf-rff"
    kind = "rff"

    @property
    def output_dim(self) -> int:
        return self.rff.k

    def transform(self, X) -> np.ndarray:
        return rff_features(self.rff, l2_normalize_rows(as_csr(X)))

    def params(self) -> dict:
        p = self.rff
        return {"k": p.k, "gamma": p.gamma, "seed": p.seed, "dim": p.dim, "folded": p.folded}


@dataclass(frozen=True)
class NystromMap:
    model: NystromModel
    pipeline: str = "gmm-nys"
    kind = "nystrom"

    @property
    def output_dim(self) -> int:
        return self.model.retained

    def transform(self, X) -> np.ndarray:
        X = as_csr(X)
        if self.model.spec.kind != "gmm":
            X = l2_normalize_rows(X)
        return nystrom_features(self.model, X)

    def params(self) -> dict:
        return {"spec": self.model.spec.to_dict(), "k": self.model.k, "seed": self.model.seed}


def fit_map(pipeline: str, train, *, k: int | None = None, b: int = 8,
            gamma: float | None = None, seed: int = 0):
    """Fit the feature map of ``pipeline`` on the training data only."""
    if pipeline not in PIPELINES:
        raise ValueError(f"unknown pipeline {pipeline!r}; expected one of {', '.join(PIPELINES)}")
    X = as_csr(train)
    dim = X.shape[1]
    if pipeline == "linear":
        return LinearMap(dim)
    if k is None:
        raise ValueError(f"pipeline {pipeline} needs k")
    if pipeline in RBF_FAMILY and gamma is None:
        raise ValueError(f"pipeline {pipeline} needs gamma")
    if pipeline == "gmm-gcws":
        return GcwsMap(GcwsParams(k=k, b=b, seed=seed, dim=dim))
    if pipeline in ("rbf-rff", "frbf-rff"):
        folded = pipeline == "frbf-rff"
        return RffMap(RffParams(k=k, gamma=gamma, seed=seed, dim=dim, folded=folded), pipeline)
    if pipeline == "gmm-nys":
        return NystromMap(nystrom_fit(KernelSpec.gmm(), X, k, seed), pipeline)
    return NystromMap(nystrom_fit(KernelSpec.rbf(gamma), l2_normalize_rows(X), k, seed), pipeline)


def apply_map(fmap, data):
    """Features for ``data`` (Dataset, vectors or matrix) under a fitted map."""
    return fmap.transform(data)


def _sparse_rows(X: sp.csr_matrix) -> dict:
    X = sp.csr_matrix(X)
    X.sort_indices()
    rows = []
    for a, b in zip(X.indptr[:-1], X.indptr[1:]):
        rows.append({"indices": (X.indices[a:b] + 1).tolist(), "values": X.data[a:b].tolist()})
    return {"dim": X.shape[1], "rows": rows}


def _rows_to_csr(d: dict) -> sp.csr_matrix:
    vecs = [SparseVector(r["indices"], r["values"], d["dim"]) for r in d["rows"]]
    return vectors_to_csr(vecs, d["dim"])


def to_dict(fmap) -> dict:
    out = {"format": FORMAT, "version": VERSION, "pipeline": fmap.pipeline,
           "kind": fmap.kind, "params": fmap.params()}
    if fmap.kind == "nystrom":
        m = fmap.model
        out["state"] = {
            "landmarks": _sparse_rows(m.landmarks),
            "projector": m.projector.tolist(),
            "eigenvalues": m.eigenvalues.tolist(),
            "landmark_indices": m.landmark_indices.tolist(),
            "threshold": m.threshold,
        }
    return out


def from_dict(d: dict):
    if d.get("format") != FORMAT:
        raise ValueError("not a feature map file")
    if d.get("version") != VERSION:
        raise ValueError(f"unsupported feature map version {d.get('version')!r}")
    kind, p, pipeline = d["kind"], d["params"], d["pipeline"]
    if kind == "linear":
        return LinearMap(p["dim"])
    if kind == "gcws":
        return GcwsMap(GcwsParams(**p), pipeline)
    if kind == "rff":
        return RffMap(RffParams(**p), pipeline)
    if kind == "nystrom":
        s = d["state"]
        landmarks = _rows_to_csr(s["landmarks"])
        projector = np.asarray(s["projector"], dtype=np.float64).reshape(landmarks.shape[0], -1)
        model = NystromModel(
            KernelSpec.from_dict(p["spec"]), landmarks, projector, p["seed"],
            np.asarray(s["landmark_indices"], dtype=np.int64),
            np.asarray(s["eigenvalues"], dtype=np.float64), s["threshold"],
        )
        return NystromMap(model, pipeline)
    raise ValueError(f"unknown feature map kind {kind!r}")


def save_map(fmap, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(to_dict(fmap), fh)


def load_map(path: str | os.PathLike):
    with open(path) as fh:
        return from_dict(json.load(fh))
