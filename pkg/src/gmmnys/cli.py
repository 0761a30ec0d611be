"""Command-line entry point: ``gmmnys {bench,hash,train,predict,kernel}``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bench
from .data import LibsvmParseError, align, load_libsvm, write_libsvm_matrix
from .featuremap import PIPELINES, RBF_FAMILY, LinearMap, apply_map, fit_map, load_map, save_map
from .kernels import KernelSpec, kernel_matrix
from .learn import SvmModel, accuracy, svm_predict, svm_train


class UsageError(Exception):
    pass


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _cmd_bench(args) -> int:
    recipe = bench.RECIPES.get(args.recipe) if args.recipe else None
    if args.recipe and recipe is None:
        raise UsageError(f"unknown recipe {args.recipe!r}; known: {', '.join(bench.RECIPES)}")
    from_recipe = recipe is not None and (args.train is None or args.test is None)
    if not from_recipe and (args.train is None or args.test is None):
        raise UsageError("bench needs --train and --test (or --recipe)")
    gamma = args.gamma if args.gamma is not None else (recipe.gamma if recipe else None)
    repeats = args.repeats if args.repeats is not None else (recipe.repeats if recipe else bench.DEFAULT_REPEATS)
    seeds = args.seeds if args.seeds else [args.seed + r for r in range(repeats)]

    configs = []
    for p in args.pipeline:
        try:
            configs.append(bench.PipelineConfig(
                pipeline=p, ks=args.k, b=args.b if p == "gmm-gcws" else None,
                gamma=gamma if p in RBF_FAMILY else None, Cs=args.C, seeds=seeds,
                tol=args.tol, max_epochs=args.max_epochs,
            ))
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    if from_recipe:
        train, test = bench.load_recipe(args.recipe, args.data_dir)
    else:
        train, test = align(load_libsvm(args.train), load_libsvm(args.test))

    def progress(r):
        if args.verbose:
            print(f"{r.pipeline} k={r.k} C={r.C:g} seed={r.seed} acc={r.accuracy:.4f}", file=sys.stderr)

    out = _open_out(args.out)
    try:
        for n, cfg in enumerate(configs):
            results = bench.run_bench(cfg, train, test, out=out, record_time=not args.no_timing,
                                      write_header=n == 0, progress=progress)
            for k in cfg.ks:
                C, acc = bench.best_c(results, cfg.pipeline, k)
                kk = "" if k is None else f" k={k}"
                print(f"# {cfg.pipeline}{kk}: best C={C:g} mean accuracy={acc:.4f}", file=sys.stderr)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_hash(args) -> int:
    if args.map:
        fmap = load_map(args.map)
    else:
        if args.train is None:
            raise UsageError("hash needs --train or --map")
        if args.pipeline is None:
            raise UsageError("hash needs --pipeline when fitting a new map")
        train = load_libsvm(args.train)
        try:
            fmap = fit_map(args.pipeline, train, k=args.k, b=args.b, gamma=args.gamma, seed=args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.save_map:
            save_map(fmap, args.save_map)
    data = load_libsvm(args.data)
    features = apply_map(fmap, data)
    out = _open_out(args.out)
    try:
        write_libsvm_matrix(out, features, data.labels)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_train(args) -> int:
    data = load_libsvm(args.features)
    model = svm_train(data.matrix, data.labels, args.C, seed=args.seed, tol=args.tol,
                      max_epochs=args.max_epochs)
    with open(args.model_out, "w") as fh:
        json.dump({"format": "gmmnys-svm", "version": 1, **model.to_dict()}, fh)
    return 0


def _cmd_predict(args) -> int:
    with open(args.model) as fh:
        d = json.load(fh)
    if d.get("format") != "gmmnys-svm":
        raise ValueError(f"{args.model}: not an SVM model file")
    model = SvmModel.from_dict(d)
    data = load_libsvm(args.features)
    # as in LIBLINEAR, features beyond the model's width carry zero weight
    X = LinearMap(model.dim).transform(data)
    pred = svm_predict(model, X)
    if args.out:
        with open(args.out, "w") as fh:
            fh.writelines(f"{p}\n" for p in pred.tolist())
    print(f"accuracy = {accuracy(pred, data.labels):.6f} ({int(np.sum(pred == data.labels))}/{len(data)})")
    return 0


def _cmd_kernel(args) -> int:
    data = load_libsvm(args.data)
    if args.limit is not None:
        data = data.subset(np.arange(min(args.limit, len(data))))
    try:
        spec = KernelSpec(args.kernel, args.gamma)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    K = kernel_matrix(spec, data, data)
    out = _open_out(args.out)
    try:
        np.savetxt(out, K, delimiter=",", fmt="%.17g")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gmmnys", description="GMM/RBF kernel linearization benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="hash, train and evaluate over a (seed, k, C) grid; CSV out")
    p.add_argument("--train")
    p.add_argument("--test")
    p.add_argument("--recipe", help=f"dataset recipe ({', '.join(bench.RECIPES)})")
    p.add_argument("--data-dir", help=f"where recipe files live (default ${bench.DATA_ENV} or ./data)")
    p.add_argument("--pipeline", nargs="+", choices=PIPELINES, required=True)
    p.add_argument("--k", nargs="+", type=int, default=list(bench.DEFAULT_KS))
    p.add_argument("--b", type=int, default=8)
    p.add_argument("--gamma", type=float)
    p.add_argument("--C", nargs="+", type=float, default=list(bench.DEFAULT_CS))
    p.add_argument("--repeats", type=int)
    p.add_argument("--seeds", nargs="+", type=int)
    p.add_argument("--seed", type=int, default=0, help="first seed when --seeds is not given")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--max-epochs", type=int, default=1000)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--no-timing", action="store_true", help="write 0 seconds for reproducible CSV")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("hash", help="write features of a LIBSVM file")
    p.add_argument("--train", help="training file the map is fitted on")
    p.add_argument("--data", required=True, help="file to featurize")
    p.add_argument("--pipeline", choices=PIPELINES)
    p.add_argument("--k", type=int)
    p.add_argument("--b", type=int, default=8)
    p.add_argument("--gamma", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--map", help="use a saved feature map instead of fitting")
    p.add_argument("--save-map", help="save the fitted feature map here")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_hash)

    p = sub.add_parser("train", help="train a one-vs-rest linear SVM on a LIBSVM file")
    p.add_argument("--features", required=True)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--max-epochs", type=int, default=1000)
    p.add_argument("--model-out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="predict with a trained model and report accuracy")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("kernel", help="dump the exact kernel matrix of a LIBSVM file as CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--kernel", choices=("gmm", "rbf", "frbf"), default="gmm")
    p.add_argument("--gamma", type=float)
    p.add_argument("--limit", type=int, help="use only the first N rows")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_kernel)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, ValueError, LibsvmParseError) as exc:
        print(f"gmmnys: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
