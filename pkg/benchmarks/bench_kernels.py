"""Time the Jacobi kernels: compiled core, pure-Python fallback, LAPACK.

    python benchmarks/bench_kernels.py [--dims 2,4,6,8] [--repeat 200]

Also times one power_contraction trial end to end with each backend.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from mazurlab import _jacobi_py

try:
    from mazurlab import _jacobi
except ImportError:
    _jacobi = None


def per_call(fn, repeat):
    n = max(1, repeat)
    return min(timeit.repeat(fn, number=n, repeat=3)) / n


def kernel_table(dims, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for d in dims:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = 0.5 * (g + g.conj().T)
        row = {"dim": d}
        row["eig lapack"] = per_call(lambda: np.linalg.eigh(h), repeat)
        row["svd lapack"] = per_call(lambda: np.linalg.svd(g), repeat)
        if _jacobi is not None:
            row["eig cython"] = per_call(lambda: _jacobi.heevj(h), repeat)
            row["svd cython"] = per_call(lambda: _jacobi.svdj(g), repeat)
        slow = max(1, repeat // 20)
        row["eig python"] = per_call(lambda: _jacobi_py.heevj(h), slow)
        row["svd python"] = per_call(lambda: _jacobi_py.svdj(g), slow)
        rows.append(row)
    return rows


TRIAL_SNIPPET = """
import time
from mazurlab.lemmas import run_trial
from mazurlab.kernels import BACKEND
cell = {"dim": 4, "theta": 0.5, "p": 1.5}
n = %d
t = time.perf_counter()
for i in range(n):
    run_trial("power_contraction", cell, i, 0)
print(BACKEND, (time.perf_counter() - t) / n)
"""


def trial_times(n):
    out = {}
    for pure in ("0", "1"):
        env = dict(os.environ, MAZURLAB_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", TRIAL_SNIPPET % (n if pure == "0" else n // 10 or 1)],
                             env=env, capture_output=True, text=True, check=True)
        backend, secs = res.stdout.split()
        out[backend] = float(secs)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dims", default="2,4,6,8")
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--trials", type=int, default=500)
    args = ap.parse_args()
    dims = [int(v) for v in args.dims.split(",")]

    rows = kernel_table(dims, args.repeat)
    cols = [c for c in rows[0] if c != "dim"]
    print("per-call time in microseconds")
    print("dim " + "".join(f"{c:>13s}" for c in cols))
    for r in rows:
        print(f"{r['dim']:>3d} " + "".join(f"{1e6 * r[c]:>13.1f}" for c in cols))

    print()
    print("power_contraction trial (dim 4), milliseconds")
    for backend, secs in trial_times(args.trials).items():
        print(f"  {backend:<8s} {1e3 * secs:8.3f}")


if __name__ == "__main__":
    main()
