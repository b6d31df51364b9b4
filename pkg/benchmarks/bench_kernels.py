"""Compare the compiled kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py --sizes 100,200,400 --trials 3

Prints one CSV row per (kernel, size, backend) with the median runtime
and the speedup of the compiled backend over the numpy one.
"""

import argparse
import statistics
import time

import numpy as np

from rlam import _backend
from rlam.detfact import lu_lower, qr_pivoted, svd_dense
from rlam.rsvd import rsvd
from rlam.sketch import SketchSpec, random_test_matrix


def timed(fn, trials):
    fn()  # warm-up
    times = []
    for _ in range(trials):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def workloads(m):
    n = int(0.75 * m)
    rng = np.random.default_rng(m)
    A = rng.standard_normal((m, n))
    k = max(1, n // 20)
    return {
        "random_fill": lambda: random_test_matrix(m, n, SketchSpec(seed=1)),
        "qr_pivoted": lambda: qr_pivoted(A),
        "lu_lower": lambda: lu_lower(A),
        "svd_dense": lambda: svd_dense(A),
        "rsvd": lambda: rsvd(A, k),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,200,400")
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--skip", default="", help="comma-separated kernels to leave out")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    skip = set(filter(None, args.skip.split(",")))
    backends = _backend.available()
    if "compiled" not in backends:
        print("# compiled extension not built; timing the numpy backend only")

    print("kernel,m,n,backend,median_seconds,speedup_vs_python")
    for m in sizes:
        for name, fn in workloads(m).items():
            if name in skip:
                continue
            times = {}
            for b in backends:
                with _backend.use_backend(b):
                    times[b] = timed(fn, args.trials)
            for b, t in times.items():
                print(f"{name},{m},{int(0.75 * m)},{b},{t:.6g},{times['python'] / t:.3g}")


if __name__ == "__main__":
    main()
