"""Compare the numba and numpy kernels.

    python benchmarks/bench_kernels.py [--tuples 1000] [--step 1e-6] [--repeat 3]

The numpy sweep is timed on a subset and extrapolated; it is far slower.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from vrtpq._accel import HAVE_NUMBA
from vrtpq.kernels import _locus_pq_nb, _locus_pq_np, sweep_q


def best_of(repeat: int, fn) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--tuples", type=int, default=1000)
    ap.add_argument("--step", type=float, default=1e-6)
    ap.add_argument("--numpy-tuples", type=int, default=50, help="subset timed on the numpy path")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; install the 'accel' extra")

    rng = np.random.default_rng(args.seed)
    n = args.tuples
    vl = rng.uniform(0.8, 1.2, n)
    x = rng.uniform(0.02, 0.5, n)
    vs = rng.uniform(0.1, 1.5, n)
    p = rng.uniform(0, 1, n) * vs * vl / x
    sub = slice(0, min(args.numpy_tuples, n))

    sweep_q(vs[:1], vl[:1], x[:1], p[:1], step=0.1, use_numba=True)
    t_nb = best_of(args.repeat, lambda: sweep_q(vs, vl, x, p, args.step, use_numba=True))
    t_np = best_of(args.repeat, lambda: sweep_q(vs[sub], vl[sub], x[sub], p[sub], args.step, use_numba=False))
    t_np *= n / (sub.stop - sub.start)
    q_nb, _ = sweep_q(vs[sub], vl[sub], x[sub], p[sub], args.step, use_numba=True)
    q_np, _ = sweep_q(vs[sub], vl[sub], x[sub], p[sub], args.step, use_numba=False)
    print(f"sweep_q   {n} tuples @ {args.step:g} rad: numba {t_nb:.3f}s  numpy ~{t_np:.3f}s  "
          f"speedup {t_np / t_nb:.1f}x  identical={np.array_equal(q_nb, q_np)}")

    delta = np.linspace(0, np.pi / 2, 2_000_000)
    _locus_pq_nb(1.0, 1.0, 0.2, delta[:10])
    t_nb = best_of(args.repeat, lambda: _locus_pq_nb(1.0, 1.0, 0.2, delta))
    t_np = best_of(args.repeat, lambda: _locus_pq_np(1.0, 1.0, 0.2, delta))
    print(f"locus_pq  {delta.size} angles: numba {t_nb * 1e3:.1f}ms  numpy {t_np * 1e3:.1f}ms  "
          f"speedup {t_np / t_nb:.1f}x")


if __name__ == "__main__":
    main()
