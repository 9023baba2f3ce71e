"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--samples N] [--repeat R]

Each kernel is warmed up once (so JIT compilation is excluded), then timed
as the best of R runs. Outputs of the two backends are compared before any
timing is reported.
"""

import argparse
import math
import time

import numpy as np

from relayswitch._kernels import numba_impl, numpy_impl
from relayswitch.fading import LinkParams, oscillator_bank


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if numba_impl is None:
        raise SystemExit("numba is not importable; nothing to compare")

    n = args.samples
    fs = 640.0
    w_c, w_s, phi_c, phi_s = oscillator_bank(LinkParams(1.0, 10.0), 64, seed=1)
    scale = math.sqrt(1.0 / 64)
    env = [
        impl.sos_envelope(n, 1.0 / fs, w_c, w_s, phi_c, phi_s, scale) for impl in (numba_impl, numpy_impl)
    ]
    print(f"sos_envelope max |numba - numpy| = {np.max(np.abs(env[0] - env[1])):.3e}")

    rng = np.random.default_rng(0)
    metrics = rng.rayleigh(size=(2, n))
    m1, m2 = np.ascontiguousarray(metrics[0]), np.ascontiguousarray(metrics[1])
    idx = numpy_impl.argmax_rows(metrics)
    assert np.array_equal(numba_impl.argmax_rows(metrics), idx)
    assert np.array_equal(numba_impl.change_points(idx), numpy_impl.change_points(idx))
    assert numba_impl.crossings(m1, 1.0) == numpy_impl.crossings(m1, 1.0)
    assert np.array_equal(numba_impl.dssc_walk(m1, m2, 1.0)[0], numpy_impl.dssc_walk(m1, m2, 1.0)[0])

    cases = {
        "sos_envelope": lambda impl: impl.sos_envelope(n, 1.0 / fs, w_c, w_s, phi_c, phi_s, scale),
        "argmax_rows": lambda impl: impl.argmax_rows(metrics),
        "change_points": lambda impl: impl.change_points(idx),
        "crossings": lambda impl: impl.crossings(m1, 1.0),
        "dssc_walk": lambda impl: impl.dssc_walk(m1, m2, 1.0),
    }
    print(f"\n{n:,} samples, best of {args.repeat}")
    print(f"{'kernel':<16}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, call in cases.items():
        t_nb = best_of(lambda: call(numba_impl), args.repeat)
        t_np = best_of(lambda: call(numpy_impl), args.repeat)
        print(f"{name:<16}{t_nb * 1e3:>12.2f}{t_np * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
