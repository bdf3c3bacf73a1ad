"""Time the compiled window sums against the numpy fallback.

Usage: ``python benchmarks/bench_kernels.py [--repeat N]``. Prints one line
per (T, D, bandwidth) case with the best time of each backend.
"""

import argparse
import timeit

import numpy as np

from exposure_hawkes import Bandwidths, KernelSpec
from exposure_hawkes.kernels import _compiled_sums, lag_matrix, window_sums

CASES = [
    (300, 14, Bandwidths(0.1, 3.0)),
    (300, 14, Bandwidths(0.3, 10.0)),
    (600, 21, Bandwidths(0.1, 5.0)),
    (1200, 21, Bandwidths(0.2, 7.0)),
    (2400, 28, Bandwidths(0.1, 10.0)),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = ["python"] + (["compiled"] if _compiled_sums is not None else [])
    rng = np.random.default_rng(0)
    spec = KernelSpec()
    print(f"{'T':>5} {'D':>3} {'b1':>5} {'b2':>5} " + " ".join(f"{b:>12}" for b in backends) + "  speedup")
    for T, D, bw in CASES:
        X = lag_matrix(rng.poisson(500, T).astype(float), D)
        times = {}
        for b in backends:
            t = timeit.repeat(lambda: window_sums(X, spec, bw, T, True, backend=b), number=1, repeat=args.repeat)
            times[b] = min(t)
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        cols = " ".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        print(f"{T:>5} {D:>3} {bw.b1:>5g} {bw.b2:>5g} {cols}  {speed:6.1f}x")


if __name__ == "__main__":
    main()
