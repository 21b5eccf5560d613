"""Compare the numba kernels against the pure-numpy fallback.

The hot loop of the numeric front end is the adaptive Dormand-Prince stepper;
this script times it on the Van der Pol field under both backends and then
times a full skeleton extraction.  Run twice:

    python benchmarks/integration_bench.py
    LMFKIT_PURE_NUMPY=1 python benchmarks/integration_bench.py
"""

import time

import numpy as np

from lmfkit.numeric import NumericSettings, extract_skeleton
from lmfkit.numeric import _kernels as K
from lmfkit.numeric.fields import van_der_pol


def bench_stepper(n_chunks=40, chunk=4096):
    field = van_der_pol()
    pi, pj, pc, qi, qj, qc = field.arrays()
    out = np.empty((chunk, 4))
    # warm up (includes JIT compilation on the numba path)
    K.advance(pi, pj, pc, qi, qj, qc, 2.0, 0.0, 0.0, 1e-6, 1e-9, 0.5, out)
    x, y, t, h = 2.0, 0.0, 0.0, 1e-6
    steps = 0
    t0 = time.perf_counter()
    for _ in range(n_chunks):
        x, y, t, h, n = K.advance(pi, pj, pc, qi, qj, qc, x, y, t, h,
                                  1e-9, 0.5, out)
        steps += n
    dt = time.perf_counter() - t0
    return steps, dt


def bench_extraction():
    t0 = time.perf_counter()
    extract_skeleton(van_der_pol(), NumericSettings())
    return time.perf_counter() - t0


def main():
    backend = "numba" if K.USE_NUMBA else "pure numpy"
    steps, dt = bench_stepper()
    print(f"backend: {backend}")
    print(f"stepper: {steps} accepted steps in {dt:.3f}s "
          f"({steps / dt / 1e3:.0f}k steps/s)")
    dt = bench_extraction()
    print(f"van der pol extraction: {dt:.2f}s")


if __name__ == "__main__":
    main()
