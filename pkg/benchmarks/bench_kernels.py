"""Time each lab kernel under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends live in fracindex.lab._kernels (``*_nb`` and ``*_np``), so one
process can time them side by side.  The numba timings exclude the first
(compiling) call.  End-to-end timings of symbol_index run in subprocesses,
since FRACINDEX_DISABLE_NUMBA is read at import.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from fracindex.lab import _kernels as k


def best_of(fn, args, repeat):
    fn(*args)  # warm-up / compile
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    s, nf = 3, 9
    freqs = np.arange(-(nf // 2), nf - nf // 2, dtype=np.int64)
    coeffs = rng.normal(size=(nf, s, s)) + 1j * rng.normal(size=(nf, s, s))
    thetas = 2 * np.pi * np.arange(4096) / 4096
    vals = k.eval_symbol_np(freqs, coeffs, thetas) + 10 * np.eye(s)
    dets = k.det_batch_np(vals)
    K = 400
    A = k.toeplitz_dense_np(freqs, coeffs, K)
    B = k.toeplitz_dense_np(freqs, np.conj(coeffs), K)
    W = K - 4 * (nf // 2)
    return {
        "eval_symbol": (freqs, coeffs, thetas),
        "det_batch": (vals,),
        "inv_batch": (vals,),
        "phase_increments": (dets,),
        "toeplitz_dense": (freqs, coeffs, K),
        "windowed_commutator_trace": (A, B, s, W, K, nf // 2),
    }


END_TO_END = (
    "import time; from fracindex.lab import symbol_index, LoopSymbol;"
    "a = LoopSymbol.numeric({0: [[3, 1], [0, 3]], 1: [[1, 0], [0.5, 1]], -2: [[0.2, 0], [0, 0.1]]});"
    "symbol_index(a);"
    "t = time.perf_counter(); [symbol_index(a, order=64) for _ in range(5)];"
    "print((time.perf_counter() - t) / 5)"
)


def end_to_end(disable: bool) -> float:
    env = dict(os.environ, FRACINDEX_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not k.HAVE_NUMBA:
        print("numba backend unavailable (not installed or disabled); nothing to compare")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':30s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>9s}")
    for name, case in cases(rng).items():
        t_np = best_of(getattr(k, name + "_np"), case, args.repeat)
        t_nb = best_of(getattr(k, name + "_nb"), case, args.repeat)
        print(f"{name:30s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:9.2f}")
    t_np, t_nb = end_to_end(True), end_to_end(False)
    print(f"{'symbol_index (end to end)':30s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:9.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
