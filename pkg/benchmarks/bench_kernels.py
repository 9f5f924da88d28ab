"""Time the compiled harmonic-sine kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--harmonics 51200] [--points 2048] [--repeat 3]

The default sizes mirror the s0=1 grid-fidelity projection.
"""
import argparse
import time

import numpy as np

from kerrgate import _kernels_py

try:
    from kerrgate import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--harmonics", type=int, default=51200)
    ap.add_argument("--points", type=int, default=2048)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    theta = np.sort(rng.uniform(0.0, np.pi, args.points))
    coef = rng.normal(size=args.harmonics)
    w = rng.normal(size=args.points)

    backends = {"python": _kernels_py}
    if compiled is not None:
        backends["cython"] = compiled
    else:
        print("compiled kernel not built; timing the fallback only")

    print(f"S={args.harmonics} harmonics, J={args.points} points, best of {args.repeat}")
    print(f"{'kernel':<24}{'backend':<10}{'seconds':>10}{'speedup':>10}")
    for name, call in (("harmonic_sine_sum", lambda k: k.harmonic_sine_sum(coef, theta)),
                       ("harmonic_sine_project", lambda k: k.harmonic_sine_project(w, theta, args.harmonics))):
        times = {b: best_of(lambda: call(k), args.repeat) for b, k in backends.items()}
        for b, t in times.items():
            print(f"{name:<24}{b:<10}{t:>10.4f}{times['python'] / t:>9.1f}x")
        if len(backends) == 2:
            diff = np.max(np.abs(call(compiled) - call(_kernels_py)))
            print(f"{'':<24}max |cython - python| = {diff:.2e}")


if __name__ == "__main__":
    main()
