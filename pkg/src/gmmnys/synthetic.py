"""Synthetic stand-ins for LIBSVM-scaled multiclass data.

Each class is a mixture of a few Gaussian clusters, clipped to [-1, 1] like
``svm-scale`` output, so that a linear classifier on the raw features does
poorly while kernel features do well.
"""

import numpy as np

from .data import Dataset


def make_clusters(n_train: int, n_test: int, dim: int = 16, n_classes: int = 4,
                  clusters_per_class: int = 3, spread: float = 0.25, seed: int = 0):
    """Return ``(train, test)`` Datasets with labels ``1..n_classes``."""
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-0.8, 0.8, size=(n_classes, clusters_per_class, dim))

    def draw(n):
        y = rng.integers(0, n_classes, size=n)
        c = rng.integers(0, clusters_per_class, size=n)
        X = centers[y, c] + spread * rng.normal(size=(n, dim))
        return Dataset.from_matrix(np.clip(X, -1.0, 1.0), y + 1)

    return draw(n_train), draw(n_test)
