"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --sizes 1000,10000,100000 --repeat 20

Also times a full periodic solve with each backend, since operator
application dominates solver runtime.
"""

import argparse
import time

import numpy as np

from gpmfix import kernels
from gpmfix.grid import GridFunction
from gpmfix.pbvp import PBVPProblem, apply_pbvp_operator


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(sizes, repeat):
    backends = {"python": kernels.python_backend}
    if kernels.compiled_backend is not None:
        backends["compiled"] = kernels.compiled_backend
    rng = np.random.default_rng(0)
    print(f"{'kernel':<18}{'n':>9}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    for n in sizes:
        f = rng.normal(size=n + 1)
        h = 1.0 / n
        for kernel, args in (("ivp_convolve", (1.0, h)), ("periodic_convolve", (1.5, h))):
            times = {name: best_of(lambda b=b: getattr(b, kernel)(f, *args), repeat) for name, b in backends.items()}
            speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
            print(f"{kernel:<18}{n:>9}" + "".join(f"{t * 1e6:>12.1f}us" for t in times.values()) + f"{speed:>9.2f}x")


def bench_solve(n, repeat):
    p = PBVPProblem(1.0, 1.5, 1.0, lambda y, u: -u + 2.0, n=n)
    u = GridFunction.constant(0.0, 1.0, n)
    print(f"\napply_pbvp_operator at n={n} (backend in use: {kernels.BACKEND})")
    for name, backend in (("python", kernels.python_backend), ("compiled", kernels.compiled_backend)):
        if backend is None:
            continue
        saved = kernels.periodic_convolve
        kernels.periodic_convolve = backend.periodic_convolve
        try:
            t = best_of(lambda: apply_pbvp_operator(p, u), repeat)
        finally:
            kernels.periodic_convolve = saved
        print(f"  {name:<10}{t * 1e6:>12.1f}us")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    bench_kernels(sizes, args.repeat)
    bench_solve(sizes[0], args.repeat)


if __name__ == "__main__":
    main()
