"""Benchmark the numba trial kernel against the pure-numpy fallback.

Run with:  python3 benchmarks/bench_kernels.py [--trials N] [--stages M]

Both kernels produce bitwise-identical outcome masks; this script reports
wall-clock throughput for each so the speedup of the compiled path (and the
cost of falling back via QPSKRX_NO_NUMBA=1) can be quantified.
"""

import argparse
import time

import numpy as np

from qpskrx import _kernels
from qpskrx.bayes import InferenceModel, truth_from_inference
from qpskrx.montecarlo import RngSpec


def bench(fn, draws, first, trans, loglik, repeats=5):
    fn(draws[:128], first, trans, loglik, 0)  # warm-up / JIT compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(draws, first, trans, loglik, 0)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--stages", type=int, default=10)
    parser.add_argument("--alpha-sq", type=float, default=4.0)
    args = parser.parse_args()

    model = InferenceModel(args.alpha_sq, args.stages, 0.65, 0.996, 9.1e-3)
    truth = truth_from_inference(model)
    loglik = model.log_likelihood_table()
    draws = RngSpec(1).draws(0, 0, args.trials, args.stages)

    print(f"trials={args.trials}  stages={args.stages}  alpha_sq={args.alpha_sq}")

    t_np, out_np = bench(_kernels.run_chunk_numpy, draws, truth.first,
                         truth.trans, loglik)
    rate = args.trials / t_np
    print(f"numpy fallback : {t_np:8.3f} s   {rate / 1e6:6.2f} M trials/s")

    if _kernels.run_chunk_numba is None:
        print("numba kernel   : unavailable (numba missing or QPSKRX_NO_NUMBA=1)")
        return

    t_nb, out_nb = bench(_kernels.run_chunk_numba, draws, truth.first,
                         truth.trans, loglik)
    rate = args.trials / t_nb
    print(f"numba kernel   : {t_nb:8.3f} s   {rate / 1e6:6.2f} M trials/s")
    print(f"speedup        : {t_np / t_nb:6.2f}x")
    print(f"bitwise match  : {bool(np.array_equal(out_np, out_nb))}")


if __name__ == "__main__":
    main()
