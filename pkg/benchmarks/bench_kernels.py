"""Compare the compiled kernels with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from ajchain import _pykernels

try:
    from ajchain import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    x_series = np.linspace(0.0, 0.5, 400)
    m, nx = 40, 1000
    lead, mid, trail = rng.uniform(0.1, 0.5, (3, m))
    x_sweep = np.linspace(0.0, 1.0, nx)
    before = rng.normal(size=(3, nx))
    here = rng.normal(size=(3, nx))
    uniforms = rng.random((4096, 20))
    return {
        "hyp2f1_series (400 points)": lambda k: k.hyp2f1_series(1.58, -0.25, 1.5, x_series, False),
        "recurrence_sweep (40 x 1000, 2 derivs)": lambda k: k.recurrence_sweep(lead, mid, trail, x_sweep, before, here, 2),
        "simulate_urn (4096 replicas x 10 steps)": lambda k: k.simulate_urn(uniforms, 0, 2, 3, 4, 0),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; nothing to compare")
        return
    print(f"{'kernel':42s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases().items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:42s} {py:12.3f} {cy:12.3f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
