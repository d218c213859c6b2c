#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy references.

Runs each hot kernel on representative workloads and reports the median
wall time per call for both paths, plus the speedup.  The numba path is
compiled (and warmed) in-process; set ``GNLS_DISABLE_NUMBA=1`` to confirm
the package falls back cleanly, in which case only the numpy path is timed.

Usage:
    python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from gnls import _kernels


def median_time(fn, args, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=7,
                    help="timed repetitions per kernel (median reported)")
    args = ap.parse_args()

    rng = np.random.default_rng(0)

    n_field = 1 << 20
    vals = (rng.standard_normal(n_field)
            + 1j * rng.standard_normal(n_field)).astype(np.complex128)

    n_triples = 1 << 20
    xi = rng.uniform(-100.0, 100.0, size=(3, n_triples, 3))

    n_coeffs = 1 << 20
    mag = rng.uniform(0.0, 1.0, n_coeffs)
    shell = rng.integers(-1, 512, n_coeffs)

    cases = [
        ("phase_rotate (2^20 samples)",
         _kernels.phase_rotate, _kernels._phase_rotate_np,
         (vals, 0.01)),
        ("triple_gap_ratios (2^20 triples, d=3)",
         _kernels.triple_gap_ratios, _kernels._triple_gap_ratios_np,
         (xi[0], xi[1], xi[2], 0.1)),
        ("shell_envelope (2^20 coefficients, 512 shells)",
         _kernels.shell_envelope, _kernels._shell_envelope_np,
         (mag, shell, 512)),
    ]

    print(f"numba path active: {_kernels.USING_NUMBA}")
    header = f"{'kernel':<45} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fast, ref, call_args in cases:
        t_np = median_time(ref, call_args, args.repeats)
        if _kernels.USING_NUMBA:
            fast(*call_args)  # trigger compilation outside the timed region
            t_nb = median_time(fast, call_args, args.repeats)
            print(f"{name:<45} {t_np * 1e3:>11.2f} {t_nb * 1e3:>11.2f} "
                  f"{t_np / t_nb:>7.1f}x")
        else:
            print(f"{name:<45} {t_np * 1e3:>11.2f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
