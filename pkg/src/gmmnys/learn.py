"""One-vs-rest L2-regularized linear SVM (hinge loss, no bias).

Each binary subproblem ``min_w 0.5 |w|^2 + C sum max(0, 1 - y_i w.x_i)`` is
solved in the dual by coordinate descent, one example at a time in a
seeded random order per epoch. Training stops once the relative duality
gap ``(P - D) / P`` drops below ``tol`` or after ``max_epochs`` epochs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numba
import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True, eq=False)
class SvmModel:
    classes: np.ndarray
    weights: np.ndarray
    C: float
    epochs: np.ndarray = field(default=None, repr=False)
    seconds: float = field(default=0.0, repr=False)

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def decision_function(self, features) -> np.ndarray:
        if features.shape[1] != self.dim:
            raise ValueError(f"feature dimension {features.shape[1]} != model dimension {self.dim}")
        return np.asarray(features @ self.weights.T)

    def to_dict(self) -> dict:
        return {
            "classes": self.classes.tolist(),
            "weights": self.weights.tolist(),
            "C": self.C,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SvmModel":
        return cls(np.asarray(d["classes"], dtype=np.int64),
                   np.asarray(d["weights"], dtype=np.float64).reshape(len(d["classes"]), -1),
                   float(d["C"]))


@dataclass
class BinaryResult:
    w: np.ndarray
    alpha: np.ndarray
    epochs: int
    primal: np.ndarray
    dual: np.ndarray


@numba.njit(cache=True)
def _row_dot(w, i, indptr, indices, data, dense, is_dense):
    s = 0.0
    if is_dense:
        for f in range(dense.shape[1]):
            s += w[f] * dense[i, f]
    else:
        for p in range(indptr[i], indptr[i + 1]):
            s += w[indices[p]] * data[p]
    return s


@numba.njit(cache=True)
def _row_axpy(w, step, i, indptr, indices, data, dense, is_dense):
    if is_dense:
        for f in range(dense.shape[1]):
            w[f] += step * dense[i, f]
    else:
        for p in range(indptr[i], indptr[i + 1]):
            w[indices[p]] += step * data[p]


@numba.njit(cache=True)
def _dcd(indptr, indices, data, dense, d, y, C, tol, max_epochs, seed, alpha0):
    # Rows are either CSR (indptr/indices/data) or the rows of ``dense``.
    # Bound variables are shrunk out of the active set as in LIBLINEAR; a
    # cheap projected-gradient test decides when the O(nnz) duality gap is
    # worth evaluating, and the gap alone decides termination.
    is_dense = dense.shape[0] > 0
    n = y.shape[0]
    w = np.zeros(d)
    alpha = np.minimum(np.maximum(alpha0.copy(), 0.0), C)
    qd = np.zeros(n)
    for i in range(n):
        if alpha[i] != 0.0:
            _row_axpy(w, alpha[i] * y[i], i, indptr, indices, data, dense, is_dense)
        if is_dense:
            s = 0.0
            for f in range(d):
                s += dense[i, f] * dense[i, f]
        else:
            s = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                s += data[p] * data[p]
        qd[i] = s
    primal = np.full(max_epochs, np.nan)
    dual = np.zeros(max_epochs)
    np.random.seed(seed)
    index = np.arange(n)
    active = n
    pg_eps = 0.1
    pg_max_old = np.inf
    pg_min_old = -np.inf
    epoch = 0
    while epoch < max_epochs:
        for s in range(active - 1, 0, -1):
            r = np.random.randint(0, s + 1)
            tmp = index[s]
            index[s] = index[r]
            index[r] = tmp
        pg_max = -np.inf
        pg_min = np.inf
        s = 0
        while s < active:
            i = index[s]
            if qd[i] == 0.0:
                # zero row: the dual term is linear, optimum at the bound
                alpha[i] = C
                s += 1
                continue
            g = y[i] * _row_dot(w, i, indptr, indices, data, dense, is_dense) - 1.0
            pg = 0.0
            if alpha[i] == 0.0:
                if g > pg_max_old:
                    active -= 1
                    index[s] = index[active]
                    index[active] = i
                    continue
                elif g < 0.0:
                    pg = g
            elif alpha[i] == C:
                if g < pg_min_old:
                    active -= 1
                    index[s] = index[active]
                    index[active] = i
                    continue
                elif g > 0.0:
                    pg = g
            else:
                pg = g
            pg_max = max(pg_max, pg)
            pg_min = min(pg_min, pg)
            if abs(pg) > 1e-12:
                old = alpha[i]
                alpha[i] = min(max(old - g / qd[i], 0.0), C)
                _row_axpy(w, (alpha[i] - old) * y[i], i, indptr, indices, data, dense, is_dense)
            s += 1

        ww = 0.0
        for f in range(d):
            ww += w[f] * w[f]
        dual[epoch] = alpha.sum() - 0.5 * ww
        epoch += 1

        if pg_max - pg_min <= pg_eps or active == 0:
            if active < n:
                active = n
                pg_max_old = np.inf
                pg_min_old = -np.inf
                continue
            hinge = 0.0
            for i in range(n):
                m = 1.0 - y[i] * _row_dot(w, i, indptr, indices, data, dense, is_dense)
                if m > 0.0:
                    hinge += m
            primal[epoch - 1] = 0.5 * ww + C * hinge
            if primal[epoch - 1] - dual[epoch - 1] <= tol * primal[epoch - 1]:
                break
            pg_eps *= 0.1
            pg_max_old = np.inf
            pg_min_old = -np.inf
            continue
        pg_max_old = pg_max if pg_max > 0.0 else np.inf
        pg_min_old = pg_min if pg_min < 0.0 else -np.inf
    return w, alpha, epoch, primal[:epoch], dual[:epoch]


def _as_solver_input(X):
    empty_i = np.zeros(1, dtype=np.int64)
    if sp.issparse(X):
        X = sp.csr_matrix(X, dtype=np.float64)
        X.sort_indices()
        return (X.indptr.astype(np.int64), X.indices.astype(np.int64), X.data,
                np.zeros((0, X.shape[1])))
    X = np.ascontiguousarray(X, dtype=np.float64)
    return empty_i, empty_i, np.zeros(1), X


def train_binary(X, y, C: float, seed: int = 0, tol: float = 1e-3, max_epochs: int = 1000,
                 alpha0=None) -> BinaryResult:
    """Dual coordinate descent for one binary subproblem with ``y`` in {-1, +1}.

    ``alpha0`` warm-starts the dual variables (clipped into ``[0, C]``).
    """
    indptr, indices, data, dense = _as_solver_input(X)
    y = np.asarray(y, dtype=np.float64)
    alpha0 = np.zeros(y.size) if alpha0 is None else np.asarray(alpha0, dtype=np.float64)
    w, alpha, epochs, primal, dual = _dcd(indptr, indices, data, dense, int(X.shape[1]), y,
                                          float(C), float(tol), int(max_epochs), int(seed), alpha0)
    return BinaryResult(w, alpha, epochs, primal, dual)


def _check_features(X):
    vals = X.data if sp.issparse(X) else np.asarray(X)
    if not np.all(np.isfinite(vals)):
        raise ValueError("features contain non-finite values")


def _validate(features, labels, Cs):
    if not all(C > 0 for C in Cs):
        raise ValueError("C must be > 0")
    labels = np.asarray(labels, dtype=np.int64)
    if features.shape[0] != labels.size:
        raise ValueError("features and labels differ in length")
    _check_features(features)
    classes = np.unique(labels)
    if classes.size < 2:
        raise ValueError("need at least two classes to train")
    return labels, classes


def svm_train(features, labels, C: float, seed: int = 0, tol: float = 1e-3,
              max_epochs: int = 1000) -> SvmModel:
    """Train one binary SVM per class (that class vs the rest)."""
    return svm_train_path(features, labels, [C], seed, tol, max_epochs)[0]


def svm_train_path(features, labels, Cs, seed: int = 0, tol: float = 1e-3,
                   max_epochs: int = 1000) -> list[SvmModel]:
    """Models for several C values, solved in ascending order with warm starts.

    The dual solution at one C, scaled by ``C_next / C``, seeds the next
    solve. Models come back in the order of ``Cs``.
    """
    Cs = [float(C) for C in Cs]
    labels, classes = _validate(features, labels, Cs)
    order = sorted(range(len(Cs)), key=lambda t: Cs[t])
    W = np.empty((len(Cs), classes.size, features.shape[1]))
    epochs = np.empty((len(Cs), classes.size), dtype=np.int64)
    seconds = np.zeros(len(Cs))
    for c, cls in enumerate(classes):
        y = np.where(labels == cls, 1.0, -1.0)
        sub_seed = int(np.random.SeedSequence([seed, c]).generate_state(1)[0])
        alpha, prev = None, None
        for t in order:
            C = Cs[t]
            alpha0 = None if alpha is None else alpha * (C / prev)
            t0 = time.perf_counter()
            res = train_binary(features, y, C, sub_seed, tol, max_epochs, alpha0)
            seconds[t] += time.perf_counter() - t0
            W[t, c] = res.w
            epochs[t, c] = res.epochs
            alpha, prev = res.alpha, C
    return [SvmModel(classes, W[t], Cs[t], epochs[t], float(seconds[t])) for t in range(len(Cs))]


def svm_predict(model: SvmModel, features) -> np.ndarray:
    """Class with the largest decision value; ties go to the lowest class id."""
    scores = model.decision_function(features)
    return model.classes[np.argmax(scores, axis=1)]


def accuracy(predicted, actual) -> float:
    predicted, actual = np.asarray(predicted), np.asarray(actual)
    if predicted.shape != actual.shape:
        raise ValueError("predicted and actual differ in length")
    if predicted.size == 0:
        raise ValueError("accuracy of an empty prediction is undefined")
    return float(np.mean(predicted == actual))
