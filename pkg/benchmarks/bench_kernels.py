"""Compare the numba and pure-numpy kernel backends.

The backend is fixed at import time by VISAUDIT_NO_NUMBA, so each backend
runs in its own subprocess. Usage:

    python3 benchmarks/bench_kernels.py            # both backends, table
    python3 benchmarks/bench_kernels.py --json     # machine-readable
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _best(fn, repeat):
    fn()  # warm-up (and JIT compilation)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def run_cases(repeat: int) -> dict:
    from visaudit import kernels
    from visaudit.metrics import disparity_histogram

    rng = np.random.default_rng(0)
    p = np.exp(rng.normal(-3, 1.5, 1_000_000))
    author = rng.integers(0, 50_000, p.shape[0])
    group = rng.integers(0, 5, p.shape[0])
    counts = rng.integers(1, 50, 1_000_000)
    starts = np.sort(rng.choice(np.arange(1, counts.shape[0]), 9_999, replace=False))
    starts = np.concatenate([[0], starts])
    x = np.sort(np.concatenate([rng.normal(-1, 0.3, 5000), rng.normal(1, 0.3, 5000)]))
    seeds = [(0, r) for r in range(200)]

    cases = {
        "log_bin_index n=1e6": lambda: kernels.log_bin_index(p, 10),
        "segment_gini n=1e6 seg=1e4": lambda: kernels.segment_gini(counts, starts),
        "dip_sorted n=1e4": lambda: kernels.dip_sorted(x),
        "dip_null_batch n=1000 reps=200": lambda: kernels.dip_null_batch(1000, seeds),
        "disparity_histogram n=1e6": lambda: disparity_histogram(p, author, group, 10),
    }
    return {"backend": kernels.BACKEND, "seconds": {k: _best(f, repeat) for k, f in cases.items()}}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        print(json.dumps(run_cases(args.repeat)))
        return

    results = {}
    for backend, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, VISAUDIT_NO_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
            env=env, check=True, capture_output=True, text=True,
        ).stdout
        res = json.loads(out.strip().splitlines()[-1])
        results[res["backend"]] = res["seconds"]
    if args.json:
        print(json.dumps(results, indent=1, sort_keys=True))
        return
    nb, npy = results.get("numba", {}), results.get("numpy", {})
    print(f"{'case':34s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for case in npy:
        a, b = nb.get(case, float("nan")), npy[case]
        print(f"{case:34s} {a:10.4f} {b:10.4f} {b / a:8.1f}x")


if __name__ == "__main__":
    main()
