"""Time the compiled grid-collision kernel against the numpy fallback.

Run as: python3 scripts/benchmark_collision.py [sites] [steps]
The numpy path is selected the same way users would, via QALB_PURE_NUMPY=1.
"""

import os
import sys
import time

import numpy as np

from qalb import _accel
from qalb.lattice import build_lattice


def march(f, c, w, lam, steps):
    for _ in range(steps):
        _accel.grid_collide(f, c, w, lam)


def run(backend, f0, c, w, lam, steps):
    os.environ["QALB_PURE_NUMPY"] = "1" if backend == "numpy" else "0"
    assert _accel.active_backend() == backend, (
        f"backend {backend} unavailable (numba importable: "
        f"{_accel._HAVE_NUMBA})"
    )
    f = f0.copy()
    march(f, c, w, lam, 1)  # warm-up pass absorbs any compilation cost
    f = f0.copy()
    t0 = time.perf_counter()
    march(f, c, w, lam, steps)
    dt = time.perf_counter() - t0
    return f, dt


def main():
    sites = int(sys.argv[1]) if len(sys.argv) > 1 else 4096
    steps = int(sys.argv[2]) if len(sys.argv) > 2 else 200
    model = build_lattice("D2Q9")
    rng = np.random.default_rng(3)
    f0 = 1.0 + rng.random((sites, model.Q))
    c = model.velocities.astype(np.float64)
    w = model.weights.copy()
    lam = 0.8

    results = {}
    for backend in ("numpy", "numba"):
        try:
            f, elapsed = run(backend, f0, c, w, lam, steps)
        except AssertionError as exc:
            print(f"{backend}: skipped ({exc})")
            continue
        rate = sites * steps / elapsed / 1e6
        results[backend] = (f, elapsed)
        print(
            f"{backend:>6}: {elapsed:8.4f} s for {steps} steps on "
            f"{sites} sites ({rate:7.2f} Msite-updates/s)"
        )
    if len(results) == 2:
        gap = np.max(np.abs(results["numpy"][0] - results["numba"][0]))
        speedup = results["numpy"][1] / results["numba"][1]
        print(f"max |numpy - numba| after {steps} steps: {gap:.3e}")
        print(f"numba speedup: {speedup:.2f}x")


if __name__ == "__main__":
    main()
