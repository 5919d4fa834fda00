"""Time the numeric kernels under both backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The numba column includes no compilation time: each kernel is called once
before timing starts.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from cskbool import _kernels
from cskbool.measures import marchenko_pastur, means_domain, pseudo_variance_numeric


def workloads():
    nu = marchenko_pastur(2)
    x, w = nu.discretize(4096)
    z = np.linspace(4.01, 20.0, 512)
    dom = means_domain(nu)

    def cauchy():
        _kernels.get("cauchy_sum")(z, x, w)

    def tilted():
        f = _kernels.get("tilted_sums")
        for theta in np.linspace(0.0, 0.24, 64):
            f(theta, x, w)

    def bisect():
        _kernels.get("bisect_mean")(0.2, x, w, 0.0, 0.25)

    def end_to_end():
        for m in (0.05, 0.1, 0.2, 0.3):
            pseudo_variance_numeric(nu, m, domain=dom)

    return {
        "cauchy_sum 512 z x 4097 nodes": cauchy,
        "tilted_sums 64 thetas": tilted,
        "bisect_mean one solve": bisect,
        "pseudo_variance 4 means": end_to_end,
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _kernels.available_backends()
    jobs = workloads()
    results: dict[str, dict[str, float]] = {name: {} for name in jobs}
    previous = _kernels.backend()
    try:
        for b in backends:
            _kernels.set_backend(b)
            for name, fn in jobs.items():
                fn()  # warm up, compiles under numba
                number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
                best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
                results[name][b] = best
    finally:
        _kernels.set_backend(previous)
    width = max(map(len, jobs))
    print(f"{'workload':<{width}}  " + "  ".join(f"{b:>12}" for b in backends) + "  speedup")
    for name, row in results.items():
        cells = "  ".join(f"{row[b] * 1e3:>9.3f} ms" for b in backends)
        speed = f"{row['numpy'] / row['numba']:6.1f}x" if "numba" in row else "   n/a"
        print(f"{name:<{width}}  {cells}  {speed}")


if __name__ == "__main__":
    main()
