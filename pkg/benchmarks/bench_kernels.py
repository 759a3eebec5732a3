"""Compare the compiled and pure-Python geometry kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 1000,10000,100000]
"""
import argparse
import timeit

import numpy as np

from jointspec import kernels
from jointspec.kernels import python as py_impl


def cases(m, rng):
    pts = np.unique(rng.normal(size=(m, 2)), axis=0)
    a, b = rng.normal(size=(m // 10, 2)), rng.normal(size=(m // 10, 2))
    sq = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    return {
        "monotone_chain": lambda impl: impl.monotone_chain(pts, 1e-12),
        "directed_hausdorff": lambda impl: impl.directed_hausdorff(a, b),
        "polygon_distances": lambda impl: impl.polygon_distances(pts, sq, 1e-12),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="1000,10000,100000")
    args = ap.parse_args()
    impls = [("python", py_impl)]
    if kernels.compiled is not None:
        impls.append(("cython", kernels.compiled))
    else:
        print("compiled extension not built; timing the Python kernels only")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'points':>9}" + "".join(f"{n + ' [ms]':>14}" for n, _ in impls)
          + ("    speedup" if len(impls) == 2 else ""))
    for m in (int(s) for s in args.sizes.split(",")):
        for name, fn in cases(m, rng).items():
            times = []
            for _, impl in impls:
                t = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
                times.append(1e3 * t)
            row = f"{name:<20}{m:>9}" + "".join(f"{t:>14.3f}" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>10.1f}x"
            print(row)


if __name__ == "__main__":
    main()
