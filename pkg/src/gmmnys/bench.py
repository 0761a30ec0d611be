"""Benchmark harness: hash -> train -> evaluate over (seed, k, C) grids.

CSV output has the header ``pipeline,k,C,seed,accuracy,seconds``; after
the per-seed rows come one row per ``(k, C)`` whose seed column reads
``mean``. ``k`` is empty for the linear pipeline.
"""

from __future__ import annotations

import csv
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .data import Dataset, align, load_libsvm
from .featuremap import PIPELINES, RBF_FAMILY, apply_map, fit_map
from .learn import accuracy, svm_predict, svm_train_path

DEFAULT_KS = (32, 64, 128, 256, 512, 1024)
DEFAULT_CS = (1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0)
DEFAULT_REPEATS = 10
CSV_HEADER = ("pipeline", "k", "C", "seed", "accuracy", "seconds")

DATA_ENV = "GMMNYS_DATA_DIR"


@dataclass(frozen=True)
class Recipe:
    """Per-dataset defaults; ``gamma`` is the best RBF gamma of the published table."""

    train: str
    test: str
    gamma: float
    repeats: int = DEFAULT_REPEATS
    linear_acc: float | None = None
    rbf_acc: float | None = None
    gmm_acc: float | None = None


RECIPES = {
    "svmguide3": Recipe("svmguide3", "svmguide3.t", 120.0, 100, 0.365, 1.00, 1.00),
    "letter": Recipe("letter.scale", "letter.scale.t", 11.0, 10, 0.617, 0.974, 0.973),
    "covtype25k": Recipe("covtype25k", "covtype25k.t", 150.0, 10, 0.715, 0.847, 0.845),
    "sensit": Recipe("sensit", "sensit.t", 0.1, 10, 0.805),
    "webspam": Recipe("webspam", "webspam.t", 35.0, 10, 0.933),
    "pamap105": Recipe("pamap105", "pamap105.t", 18.0, 10, 0.834),
    "pamap101": Recipe("pamap101", "pamap101.t", 1.5, 10, 0.792),
    "covtype": Recipe("covtype", "covtype.t", 150.0, 10, 0.713),
    "rcv1": Recipe("rcv1", "rcv1.t", 2.0, 10, 0.977),
}


@dataclass
class PipelineConfig:
    pipeline: str
    ks: Sequence[int] = DEFAULT_KS
    b: int | None = None
    gamma: float | None = None
    Cs: Sequence[float] = DEFAULT_CS
    seeds: Sequence[int] = tuple(range(DEFAULT_REPEATS))
    train_path: str | None = None
    test_path: str | None = None
    tol: float = 1e-3
    max_epochs: int = 1000

    def __post_init__(self):
        if self.pipeline not in PIPELINES:
            raise ValueError(f"unknown pipeline {self.pipeline!r}; expected one of {', '.join(PIPELINES)}")
        if self.pipeline in RBF_FAMILY:
            if self.gamma is None or not self.gamma > 0:
                raise ValueError(f"{self.pipeline} needs gamma > 0")
        elif self.gamma is not None:
            raise ValueError(f"{self.pipeline} takes no gamma")
        if self.pipeline == "gmm-gcws":
            if self.b is None:
                self.b = 8
        elif self.b is not None:
            raise ValueError(f"{self.pipeline} takes no b")
        if self.pipeline == "linear":
            self.ks = (None,)
        elif not self.ks or any(k < 1 for k in self.ks):
            raise ValueError("k values must be >= 1")
        if not self.Cs or any(not C > 0 for C in self.Cs):
            raise ValueError("C values must be > 0")
        if not self.seeds:
            raise ValueError("need at least one seed")


@dataclass(frozen=True)
class BenchResult:
    pipeline: str
    k: int | None
    C: float
    seed: int | str
    accuracy: float
    seconds: float = field(default=0.0, compare=False)

    def row(self) -> list[str]:
        return [
            self.pipeline,
            "" if self.k is None else str(self.k),
            f"{self.C:g}",
            str(self.seed),
            repr(float(self.accuracy)),
            f"{self.seconds:.4f}",
        ]


def find_dataset(name: str, data_dir: str | os.PathLike | None = None) -> Path:
    """Locate a LIBSVM file by name in ``data_dir``, ``$GMMNYS_DATA_DIR`` or ``./data``."""
    candidates = [Path(d) for d in (data_dir, os.environ.get(DATA_ENV), "data") if d]
    for d in candidates:
        p = d / name
        if p.is_file():
            return p
    where = ", ".join(str(d) for d in candidates)
    raise FileNotFoundError(f"dataset file {name!r} not found in: {where}")


def load_recipe(name: str, data_dir=None) -> tuple[Dataset, Dataset]:
    recipe = RECIPES[name]
    train = load_libsvm(find_dataset(recipe.train, data_dir))
    test = load_libsvm(find_dataset(recipe.test, data_dir))
    return align(train, test)


def _load(config: PipelineConfig, train, test):
    if train is None:
        if config.train_path is None:
            raise ValueError("no training data given")
        train = load_libsvm(config.train_path)
    if test is None:
        if config.test_path is None:
            raise ValueError("no test data given")
        test = load_libsvm(config.test_path)
    return align(train, test)


def _mean_rows(results: list[BenchResult]) -> list[BenchResult]:
    groups: dict[tuple, list[BenchResult]] = {}
    for r in results:
        groups.setdefault((r.pipeline, r.k, r.C), []).append(r)
    return [
        BenchResult(p, k, C, "mean", float(np.mean([r.accuracy for r in rs])),
                    float(np.mean([r.seconds for r in rs])))
        for (p, k, C), rs in groups.items()
    ]


def run_bench(config: PipelineConfig, train: Dataset | None = None, test: Dataset | None = None,
              out=None, record_time: bool = True, write_header: bool = True,
              progress=None) -> list[BenchResult]:
    """Run every ``(seed, k, C)`` cell of ``config``.

    Returns the per-seed results followed by the per-``(k, C)`` means. When
    ``out`` is a text stream the same rows are written to it as CSV. With
    ``record_time=False`` the seconds column is 0 and the CSV is fully
    reproducible.
    """
    train, test = _load(config, train, test)
    writer = csv.writer(out, lineterminator="\n") if out is not None else None
    if writer is not None and write_header:
        writer.writerow(CSV_HEADER)

    results = []
    for seed in config.seeds:
        for k in config.ks:
            t0 = time.perf_counter()
            fmap = fit_map(config.pipeline, train, k=k, b=config.b or 8, gamma=config.gamma, seed=seed)
            F_train = apply_map(fmap, train)
            F_test = apply_map(fmap, test)
            hash_seconds = time.perf_counter() - t0
            models = svm_train_path(F_train, train.labels, config.Cs, seed=seed,
                                    tol=config.tol, max_epochs=config.max_epochs)
            for model in models:
                t1 = time.perf_counter()
                acc = accuracy(svm_predict(model, F_test), test.labels)
                secs = hash_seconds + model.seconds + time.perf_counter() - t1
                res = BenchResult(config.pipeline, k, model.C, seed, acc, secs if record_time else 0.0)
                results.append(res)
                if writer is not None:
                    writer.writerow(res.row())
                if progress is not None:
                    progress(res)

    means = _mean_rows(results)
    if writer is not None:
        for r in means:
            writer.writerow(r.row())
    return results + means


def best_c(results: Sequence[BenchResult], pipeline: str, k: int | None = None) -> tuple[float, float]:
    """``(C, mean accuracy)`` of the C with the best mean over seeds."""
    rows = [r for r in results if r.seed == "mean" and r.pipeline == pipeline and r.k == k]
    if not rows:
        rows = _mean_rows([r for r in results if r.pipeline == pipeline and r.k == k])
    if not rows:
        raise ValueError(f"no results for pipeline {pipeline} at k={k}")
    best = max(rows, key=lambda r: (r.accuracy, -r.C))
    return best.C, best.accuracy
