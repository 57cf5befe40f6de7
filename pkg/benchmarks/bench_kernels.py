"""Benchmark the jitted hot kernels against their interpreted/numpy fallbacks.

Run:  python benchmarks/bench_kernels.py

The same comparison can be forced package-wide by setting
CASIMIR_LAB_NUMBA=0, which routes every caller through the fallback path.
"""

import time

import numpy as np

from casimir_lab import kernels


def timeit(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rk4():
    n_steps = 100_000
    out = np.empty((n_steps + 1, 3))
    out[0] = (0.1, 0.2, 1.0)

    def run(loop):
        return loop(0.1, 0.2, 1.0, -2.0, 1e-3, n_steps, 1, out)

    rows = []
    if kernels.USING_NUMBA:
        run(kernels.rk4_loop)  # compile
        rows.append(("rk4 loop, 1e5 steps", "numba", timeit(run, kernels.rk4_loop)))
    rows.append(("rk4 loop, 1e5 steps", "interpreted", timeit(run, kernels.rk4_loop_py)))
    return rows


def bench_trig_eval():
    n = 32
    rng = np.random.default_rng(0)
    data = rng.standard_normal((n, n, n))
    coef = np.ascontiguousarray(np.fft.fftn(data) / n ** 3)
    kvec = np.ascontiguousarray(np.fft.fftfreq(n, d=1.0 / n))
    pts = np.ascontiguousarray(rng.uniform(0, 1, (512, 3)))

    rows = [("trig eval, 512 pts @ n=32", "numpy einsum",
             timeit(kernels.trig_eval_numpy, coef, kvec, pts))]
    if kernels.USING_NUMBA:
        kernels.trig_eval_numba(coef, kvec, pts)  # compile
        rows.append(("trig eval, 512 pts @ n=32", "numba serial",
                     timeit(kernels.trig_eval_numba, coef, kvec, pts)))
        a = kernels.trig_eval_numpy(coef, kvec, pts)
        b = kernels.trig_eval_numba(coef, kvec, pts)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)
    return rows


def main():
    print(f"numba available and enabled: {kernels.USING_NUMBA}")
    rows = bench_rk4() + bench_trig_eval()
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':{width}s}  {'path':12s}  best time")
    base = {}
    for name, path, t in rows:
        base.setdefault(name, t)
        speedup = base[name] / t if t > 0 else float("inf")
        print(f"{name:{width}s}  {path:12s}  {t * 1e3:9.2f} ms   x{speedup:.1f} vs first")


if __name__ == "__main__":
    main()
