"""Compare the numba kernels against the pure-numpy fallback.

The toggle is the FRACWR_NO_NUMBA environment variable, read at import time,
so the two paths are timed in subprocesses.  The per-step tridiagonal
elimination dominates the 1D solvers' runtime; the history combinations go
through BLAS in both paths.

Usage: python benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys
import textwrap

DRIVER = textwrap.dedent(
    """
    import json, time
    import numpy as np
    from fracwr import DnwrConfig, build_partition, run_dnwr
    from fracwr import kernels

    # kernel microbenchmark
    n = 1500
    lower = np.full(n, -1.0)
    diag = np.full(n, 2.5)
    upper = np.full(n, -1.0)
    rhs = np.sin(np.arange(n) / 7.0)
    kernels.tridiag_solve(lower, diag, upper, rhs)  # compile / warm up
    reps = 3000
    t0 = time.perf_counter()
    for _ in range(reps):
        kernels.tridiag_solve(lower, diag, upper, rhs)
    micro = (time.perf_counter() - t0) / reps

    # end-to-end interface iteration
    part = build_partition((0, 2), [1.5], [1.0, 0.25], 0.0025)
    cfg = DnwrConfig(partition=part, order=0.5, horizon=1.0, n_steps=128,
                     theta="optimal", tolerance=1e-12, max_iter=10,
                     mode="error_equation")
    run_dnwr(DnwrConfig(partition=part, order=0.5, horizon=1.0, n_steps=8,
                        theta="optimal", tolerance=1e-12, max_iter=1,
                        mode="error_equation"))  # warm up
    t0 = time.perf_counter()
    res = run_dnwr(cfg)
    driver = time.perf_counter() - t0
    print(json.dumps({
        "numba": kernels.NUMBA_ENABLED,
        "tridiag_us": micro * 1e6,
        "dnwr_s": driver,
        "sweeps": res.report.iterations,
    }))
    """
)


def run(no_numba: bool) -> dict:
    env = dict(os.environ, FRACWR_NO_NUMBA="1" if no_numba else "")
    out = subprocess.run(
        [sys.executable, "-c", DRIVER], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    accel = run(no_numba=False)
    plain = run(no_numba=True)
    print(f"{'path':<14} {'tridiag (us/solve)':>20} {'dnwr 10 sweeps (s)':>20}")
    for tag, r in (("numba" if accel["numba"] else "numpy*", accel), ("numpy", plain)):
        print(f"{tag:<14} {r['tridiag_us']:>20.1f} {r['dnwr_s']:>20.3f}")
    if accel["numba"]:
        print(
            f"speedup: tridiag x{plain['tridiag_us'] / accel['tridiag_us']:.1f}, "
            f"driver x{plain['dnwr_s'] / accel['dnwr_s']:.1f}"
        )
    else:
        print("numba unavailable; both rows ran the fallback")


if __name__ == "__main__":
    main()
