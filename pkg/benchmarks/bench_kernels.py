"""Compare the numba and pure-numpy enumeration kernels.

Run with ``python3 benchmarks/bench_kernels.py``. The kernel timings call both
implementations directly; the end-to-end timing runs an L-function in a
subprocess with and without ZPTOWERS_PURE_NUMPY=1.
"""

import os
import subprocess
import sys
import time

import numpy as np

from zptowers import accel
from zptowers.arith import teich_modulus

REPEAT = 5


def best_of(fn, *args):
    fn(*args)  # warm-up, includes JIT compilation
    best = float("inf")
    for _ in range(REPEAT):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases():
    rng = np.random.default_rng(0)
    for p, n, N in [(2, 11, 4), (3, 7, 3), (5, 5, 3)]:
        mod = p**N
        modulus = np.array(teich_modulus(p, n, N), dtype=np.int64)
        count = p**n - 1
        gen = np.zeros(n, dtype=np.int64)
        gen[1] = 1
        a = rng.integers(0, mod, size=(count, n), dtype=np.int64)
        b = rng.integers(0, mod, size=(count, n), dtype=np.int64)
        yield f"power_table p={p} n={n}", accel.power_table_numpy, accel.power_table_numba, (gen, modulus, mod, count)
        yield f"batch_mulmod p={p} n={n}", accel.batch_mulmod_numpy, accel.batch_mulmod_numba, (a, b, modulus, mod)
        vals = a[:, 0].copy()
        tame = np.zeros(count, dtype=np.int64)
        yield f"residue_histogram p={p} n={n}", accel.residue_histogram_numpy, accel.residue_histogram_numba, (vals, tame, mod, 1)


def end_to_end():
    code = ("from zptowers.cli import main; import io; "
            "main(['lfun', 'towers/cubic_p2.json', '--char', 'm:3'], io.StringIO())")
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    out = {}
    for label, flag in [("numba", "0"), ("numpy", "1")]:
        env = dict(os.environ, ZPTOWERS_PURE_NUMPY=flag)
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-c", code], check=True, cwd=root, env=env)
        out[label] = time.perf_counter() - t0
    return out


def main():
    if not accel.HAVE_NUMBA:
        print("numba unavailable (or ZPTOWERS_PURE_NUMPY set); nothing to compare")
        return
    print(f"{'kernel':36s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}")
    for name, f_np, f_nb, args in kernel_cases():
        r_np, r_nb = f_np(*args), f_nb(*args)
        assert np.array_equal(r_np, r_nb), name
        t_np, t_nb = best_of(f_np, *args), best_of(f_nb, *args)
        print(f"{name:36s} {1e3 * t_np:12.2f} {1e3 * t_nb:12.2f} {t_np / t_nb:8.2f}")
    e2e = end_to_end()
    print(f"end-to-end lfun (F_2 tower, m=3, process wall time): numba {e2e['numba']:.2f}s, numpy {e2e['numpy']:.2f}s")


if __name__ == "__main__":
    main()
