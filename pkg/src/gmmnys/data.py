"""Sparse vectors, datasets and the LIBSVM text format."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class LibsvmParseError(ValueError):
    """Raised on a malformed LIBSVM line; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class SparseVector:
    """Index/value pairs over a ``dim``-dimensional space.

    Indices are 1-based and strictly increasing; stored values are never 0.
    """

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        val = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if idx.shape != val.shape:
            raise ValueError("indices and values differ in length")
        if idx.size:
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
            if idx[0] < 1 or idx[-1] > self.dim:
                raise ValueError(f"indices must lie in [1, {self.dim}]")
        if np.any(val == 0):
            raise ValueError("stored values must be nonzero")
        idx.setflags(write=False)
        val.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)
        object.__setattr__(self, "dim", int(self.dim))

    @classmethod
    def from_entries(cls, entries: Iterable[tuple[int, float]], dim: int | None = None):
        """Build from ``(index, value)`` pairs; zero values are dropped."""
        entries = [(int(i), float(v)) for i, v in entries if v != 0]
        idx = np.array([i for i, _ in entries], dtype=np.int64)
        val = np.array([v for _, v in entries], dtype=np.float64)
        if dim is None:
            dim = int(idx.max()) if idx.size else 0
        return cls(idx, val, dim)

    @classmethod
    def from_dense(cls, x: Sequence[float]):
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        nz = np.flatnonzero(x)
        return cls(nz + 1, x[nz], x.size)

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.indices.tolist(), self.values.tolist()))

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_dense(self, dim: int | None = None) -> np.ndarray:
        out = np.zeros(self.dim if dim is None else dim)
        out[self.indices - 1] = self.values
        return out

    def with_dim(self, dim: int) -> "SparseVector":
        return SparseVector(self.indices, self.values, dim)

    def scaled(self, c: float) -> "SparseVector":
        if c == 0:
            return SparseVector(np.empty(0, np.int64), np.empty(0), self.dim)
        return SparseVector(self.indices, self.values * c, self.dim)

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return f"SparseVector({self.entries}, dim={self.dim})"


def l2_norm(values: np.ndarray) -> float:
    """Euclidean norm, scaled by the largest entry so tiny values do not underflow."""
    if values.size == 0:
        return 0.0
    m = np.max(np.abs(values))
    if m == 0:
        return 0.0
    x = values / m
    return float(m * np.sqrt(np.dot(x, x)))


def l2_normalize(v: SparseVector) -> SparseVector:
    """Scale ``v`` to unit L2 norm; the zero vector is returned unchanged."""
    norm = l2_norm(v.values)
    if norm == 0:
        return v
    values = v.values / norm
    keep = values != 0  # subnormal entries can underflow away
    return SparseVector(v.indices[keep], values[keep], v.dim)


def l2_normalize_rows(X: sp.csr_matrix) -> sp.csr_matrix:
    """Row-wise L2 normalization of a CSR matrix; zero rows stay zero."""
    X = sp.csr_matrix(X, dtype=np.float64, copy=True)
    counts = np.diff(X.indptr)
    row_of = np.repeat(np.arange(X.shape[0]), counts)
    scale = np.zeros(X.shape[0])
    np.maximum.at(scale, row_of, np.abs(X.data))
    scale[scale == 0] = 1.0
    X.data /= scale[row_of]
    norms = np.sqrt(np.bincount(row_of, weights=X.data**2, minlength=X.shape[0]))
    norms[norms == 0] = 1.0
    X.data /= norms[row_of]
    X.eliminate_zeros()
    return X


def vectors_to_csr(vectors: Sequence[SparseVector], dim: int | None = None) -> sp.csr_matrix:
    """Stack vectors as rows of an ``n x dim`` CSR matrix (0-based columns)."""
    if dim is None:
        dim = max((v.dim for v in vectors), default=0)
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([v.nnz for v in vectors])
    if vectors:
        indices = np.concatenate([v.indices for v in vectors]) - 1
        data = np.concatenate([v.values for v in vectors])
    else:
        indices = np.empty(0, np.int64)
        data = np.empty(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), dim))


def csr_to_vectors(X: sp.spmatrix) -> list[SparseVector]:
    X = sp.csr_matrix(X)
    X.sum_duplicates()
    X.eliminate_zeros()
    dim = X.shape[1]
    return [
        SparseVector(X.indices[a:b] + 1, X.data[a:b], dim)
        for a, b in zip(X.indptr[:-1], X.indptr[1:])
    ]


class Dataset:
    """Labelled sparse vectors with a cached CSR view.

    Parameters
    ----------
    vectors : list of SparseVector
    labels : sequence of int
        Arbitrary integer labels, e.g. ``-1/+1`` or ``1..26``.
    dim : int, optional
        Ambient dimension; defaults to the largest vector dimension.
    """

    def __init__(self, vectors: Sequence[SparseVector], labels: Sequence[int], dim: int | None = None):
        labels = np.array(labels, dtype=np.int64).reshape(-1)
        if len(vectors) != labels.size:
            raise ValueError("vectors and labels differ in length")
        max_dim = max((v.dim for v in vectors), default=0)
        if dim is None:
            dim = max_dim
        elif max_dim > dim:
            raise ValueError(f"vector dimension {max_dim} exceeds dataset dimension {dim}")
        self.vectors = [v if v.dim == dim else v.with_dim(dim) for v in vectors]
        self.labels = labels
        self.labels.setflags(write=False)
        self.dim = int(dim)
        self.classes = np.unique(labels)

    @classmethod
    def from_matrix(cls, X, labels: Sequence[int]) -> "Dataset":
        if not sp.issparse(X):
            X = sp.csr_matrix(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        return cls(csr_to_vectors(X), labels, X.shape[1])

    def __len__(self):
        return len(self.vectors)

    def __repr__(self):
        return f"Dataset(n={len(self)}, dim={self.dim}, classes={self.classes.tolist()})"

    @cached_property
    def matrix(self) -> sp.csr_matrix:
        """The data as an ``n x dim`` CSR matrix."""
        return vectors_to_csr(self.vectors, self.dim)

    def with_dim(self, dim: int) -> "Dataset":
        if dim == self.dim:
            return self
        return Dataset(self.vectors, self.labels, dim)

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset([self.vectors[r] for r in rows], self.labels[rows], self.dim)

    def class_ids(self, classes: np.ndarray | None = None) -> np.ndarray:
        """Map labels to contiguous ids ``0..len(classes)-1``."""
        classes = self.classes if classes is None else np.asarray(classes)
        pos = np.searchsorted(classes, self.labels)
        pos = np.clip(pos, 0, len(classes) - 1)
        if np.any(classes[pos] != self.labels):
            raise ValueError("dataset contains labels outside the given classes")
        return pos


def align(*datasets: Dataset) -> tuple[Dataset, ...]:
    """Give every dataset the same (maximal) ambient dimension."""
    dim = max(d.dim for d in datasets)
    return tuple(d.with_dim(dim) for d in datasets)


def _parse_label(tok: str, lineno: int) -> int:
    try:
        x = float(tok)
    except ValueError:
        raise LibsvmParseError(lineno, f"non-numeric label {tok!r}") from None
    if not np.isfinite(x) or x != int(x):
        raise LibsvmParseError(lineno, f"label {tok!r} is not an integer")
    return int(x)


def parse_libsvm(text) -> Dataset:
    """Parse LIBSVM sparse text: ``<label> <idx>:<val> ...`` per line.

    Accepts ``bytes``, ``str`` or a text/binary file object. Blank lines and
    lines starting with ``#`` are skipped; zero values are dropped. The
    dataset dimension is the largest index seen.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    if isinstance(text, str):
        lines = io.StringIO(text)
    else:
        lines = text

    vectors_idx, vectors_val, labels = [], [], []
    dim = 0
    for lineno, line in enumerate(lines, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        labels.append(_parse_label(toks[0], lineno))
        idx = np.empty(len(toks) - 1, dtype=np.int64)
        val = np.empty(len(toks) - 1, dtype=np.float64)
        prev = 0
        for n, tok in enumerate(toks[1:]):
            key, sep, raw = tok.partition(":")
            if not sep:
                raise LibsvmParseError(lineno, f"bad token {tok!r}")
            try:
                i = int(key)
                v = float(raw)
            except ValueError:
                raise LibsvmParseError(lineno, f"bad token {tok!r}") from None
            if i <= prev:
                raise LibsvmParseError(lineno, f"index {i} not increasing (after {prev})")
            if not np.isfinite(v):
                raise LibsvmParseError(lineno, f"non-finite value in {tok!r}")
            idx[n], val[n] = i, v
            prev = i
        keep = val != 0
        vectors_idx.append(idx[keep])
        vectors_val.append(val[keep])
        if idx.size:
            dim = max(dim, int(idx[-1]))

    vectors = [SparseVector(i, v, dim) for i, v in zip(vectors_idx, vectors_val)]
    return Dataset(vectors, labels, dim)


def load_libsvm(path: str | os.PathLike) -> Dataset:
    with open(path, "rb") as fh:
        return parse_libsvm(fh)


def dump_libsvm(dataset: Dataset) -> str:
    """Serialize to LIBSVM text; ``repr`` floats make the round trip exact."""
    out = []
    for v, y in zip(dataset.vectors, dataset.labels.tolist()):
        feats = " ".join(f"{i}:{x!r}" for i, x in v.entries)
        out.append(f"{y} {feats}".rstrip())
    return "\n".join(out) + ("\n" if out else "")


def write_libsvm_matrix(fh, X, labels) -> None:
    """Write a (dense or sparse) feature matrix in LIBSVM format."""
    X = sp.csr_matrix(X)
    X.sort_indices()
    for r, y in enumerate(np.asarray(labels).tolist()):
        a, b = X.indptr[r], X.indptr[r + 1]
        feats = " ".join(
            f"{i + 1}:{x!r}" for i, x in zip(X.indices[a:b].tolist(), X.data[a:b].tolist()) if x != 0
        )
        fh.write(f"{y} {feats}".rstrip() + "\n")


def as_csr(x, dim: int | None = None) -> sp.csr_matrix:
    """Coerce a Dataset, list of SparseVector, array or sparse matrix to CSR rows."""
    if isinstance(x, Dataset):
        X = x.matrix
    elif isinstance(x, SparseVector):
        X = vectors_to_csr([x])
    elif isinstance(x, (list, tuple)) and (not x or isinstance(x[0], SparseVector)):
        X = vectors_to_csr(list(x))
    elif sp.issparse(x):
        X = sp.csr_matrix(x, dtype=np.float64)
    else:
        X = sp.csr_matrix(np.atleast_2d(np.asarray(x, dtype=np.float64)))
    if dim is not None and X.shape[1] != dim:
        if X.shape[1] > dim:
            X = X[:, :dim] if X[:, dim:].nnz == 0 else _raise_dim(X.shape[1], dim)
        else:
            X = sp.csr_matrix((X.data, X.indices, X.indptr), shape=(X.shape[0], dim))
    return X


def _raise_dim(got: int, want: int):
    raise ValueError(f"input has nonzeros beyond dimension {want} (got {got})")
