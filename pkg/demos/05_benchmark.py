"""Compare the pipelines end to end on a synthetic multiclass problem.

The data is a mixture of Gaussian clusters per class, so raw linear
features do poorly and every kernel approximation helps. To run the real
benchmarks, point ``GMMNYS_DATA_DIR`` at the LIBSVM files and use
``gmmnys bench --recipe letter ...`` instead.

Run: python demos/05_benchmark.py
"""

from gmmnys.bench import PipelineConfig, best_c, run_bench
from gmmnys.synthetic import make_clusters

train, test = make_clusters(3000, 1000, dim=16, n_classes=6, clusters_per_class=3, seed=4)
seeds = (0, 1, 2)
Cs = (0.1, 1.0, 10.0, 100.0)

configs = [
    PipelineConfig("linear", Cs=Cs, seeds=seeds),
    PipelineConfig("gmm-nys", ks=(32, 128), Cs=Cs, seeds=seeds),
    PipelineConfig("gmm-gcws", ks=(32, 128), Cs=Cs, seeds=seeds),
    PipelineConfig("rbf-nys", ks=(32, 128), gamma=11.0, Cs=Cs, seeds=seeds),
    PipelineConfig("rbf-rff", ks=(32, 128), gamma=11.0, Cs=Cs, seeds=seeds),
]

print("pipeline     k     best C   mean accuracy")
for cfg in configs:
    results = run_bench(cfg, train, test)
    for k in cfg.ks:
        C, acc = best_c(results, cfg.pipeline, k)
        print(f"{cfg.pipeline:10s} {'' if k is None else k!s:>4}  {C:8g}   {acc:.3f}")
