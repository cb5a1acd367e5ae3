"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--sizes 100 400] [--repeat 5]

Prints the best-of-``repeat`` time per kernel and backend, and the speed-up.
"""
import argparse
import timeit

import numpy as np

from specdr import _kernels_py, kernels


def cases(n):
    rng = np.random.default_rng(0)
    X = rng.normal(size=(n, 10))
    D = np.sqrt(np.asarray(_kernels_py.pairwise_sq_dists(X)).clip(0))
    return {
        "splitmix64": lambda m: m.splitmix64(7, n * n),
        "gaussian_fill": lambda m: m.gaussian_fill(n * n, 7),
        "pairwise_sq_dists": lambda m: m.pairwise_sq_dists(X),
        "double_center_sq": lambda m: m.double_center_sq(D),
    }


def best_time(fn, module, repeat):
    return min(timeit.repeat(lambda: fn(module), number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 400, 1000])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    compiled = kernels.compiled
    if compiled is None:
        print("compiled kernels not built; timing the Python fallback only")
    print(f"{'kernel':<20}{'n':>6}{'python (s)':>14}{'cython (s)':>14}{'speed-up':>10}")
    for n in args.sizes:
        for name, fn in cases(n).items():
            t_py = best_time(fn, _kernels_py, args.repeat)
            if compiled is None:
                print(f"{name:<20}{n:>6}{t_py:>14.5f}{'-':>14}{'-':>10}")
                continue
            t_c = best_time(fn, compiled, args.repeat)
            print(f"{name:<20}{n:>6}{t_py:>14.5f}{t_c:>14.5f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
