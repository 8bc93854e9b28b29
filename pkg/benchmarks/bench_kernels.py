"""Compiled vs pure-Python stencil kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best-of-``repeat`` wall time per kernel and backend, and the
speedup of the compiled kernels.
"""
import argparse
import timeit

import numpy as np

from polygonflow import _pykernels

try:
    from polygonflow import _ckernels
except ImportError:  # extension not built
    _ckernels = None

CASES = [
    # (label, n, steps)
    ("small polygon, long run", 20, 20_000),
    ("medium polygon", 256, 5_000),
    ("large polygon", 10_000, 200),
]


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled kernels unavailable; timing the fallback only")

    print(f"{'case':<26}{'kernel':<12}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for label, n, steps in CASES:
        g = np.random.default_rng(n)
        xi = np.full(n, 0.3)
        x, y = g.normal(size=n), g.normal(size=n)
        x -= x.mean()
        y -= y.mean()
        jobs = {
            "power": lambda m: m.power(xi, x, steps),
            "trajectory": lambda m: m.trajectory(xi, x, y, steps, True),
        }
        for kernel, job in jobs.items():
            times = {b: _best(lambda m=m: job(m), args.repeat) for b, m in backends.items()}
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{label:<26}{kernel:<12}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times.values())
                  + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
