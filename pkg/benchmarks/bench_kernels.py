"""Compare the compiled and numpy kernels on the two hot loops.

    python benchmarks/bench_kernels.py [--grid 60] [--repeat 3]
"""
import argparse
import time

import numpy as np

from qgraph import backend
from qgraph.oscint.real import DEFAULT_RULE


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=60, help="points per axis of the mu_hat grid")
    ap.add_argument("--T", type=float, default=10.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    names = ["python"] + (["cython"] if backend.compiled_kernels is not None else [])
    xs = np.linspace(-50, 50, args.grid)
    X, Y = (a.ravel() for a in np.meshgrid(xs, xs))
    rule = DEFAULT_RULE.args()
    cases = {
        f"mu_hat {args.grid}x{args.grid} T={args.T:g}": lambda k: k.mu_hat_many(X, Y, args.T, *rule),
        "unit_phase_counts p=7 M=6": lambda k: k.unit_phase_counts(7, 6, 3, 3, 5, 4, -1),
        "unit_phase_counts p=3 M=12": lambda k: k.unit_phase_counts(3, 12, 1, 12, 2, 6, 1),
    }
    print(f"{'case':34} " + " ".join(f"{n:>10}" for n in names) + "   speedup   max|diff|")
    for label, fn in cases.items():
        results = [best_of(lambda: fn(backend.get(n)), args.repeat) for n in names]
        row = f"{label:34} " + " ".join(f"{t:9.3f}s" for t, _ in results)
        if len(results) == 2:
            diff = float(np.max(np.abs(np.asarray(results[0][1], float) - np.asarray(results[1][1], float))))
            row += f"   {results[0][0] / results[1][0]:7.1f}x   {diff:.1e}"
        print(row)


if __name__ == "__main__":
    main()
