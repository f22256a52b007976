"""Compare the compiled and pure-numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints the best time per call for each kernel on both backends, plus an
end-to-end figure for a V-fractional integral. The end-to-end rows run in
a subprocess per backend because the backend is fixed at import time.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from vfrac import kernels

END_TO_END = """
import timeit
from vfrac import expr, ParamSet, vintegral, vderiv_limit
p = ParamSet.make(gamma=1.7, beta=0.8, rho=1.3, delta=0.9, p=1.1, q=0.7, alpha=0.6, trunc_i=8)
f = expr.parse("sin(3*t) * exp(-t/4) + sqrt(t)")
vintegral(f, p, 0.0, 20.0)
n = 20
print(min(timeit.repeat(lambda: vintegral(f, p, 0.0, 20.0), number=n, repeat={repeat})) / n,
      min(timeit.repeat(lambda: vderiv_limit(f, p, 1.3), number=n, repeat={repeat})) / n)
"""


def bench(fn, repeat: int, number: int) -> float:
    fn()  # compile / warm up
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def kernel_rows(repeat: int):
    rng = np.random.default_rng(0)
    fvals = rng.normal(size=(4096, 15))
    halves = rng.uniform(0.01, 1.0, size=4096)
    coeffs = rng.normal(size=12)
    u = rng.uniform(-2, 2, size=100_000)
    ml_args = (1.7, 0.8, 1.3, 0.9, 1.1, 0.7, 0.35, 60)
    cases = [
        ("ml_sum (i=60)", kernels.ml_sum_numba, kernels.ml_sum_numpy, ml_args, 2000),
        ("gk_panels (4096 panels)", kernels.gk_panels_numba, kernels.gk_panels_numpy, (fvals, halves), 50),
        ("horner (deg 11, 1e5 pts)", kernels.horner_numba, kernels.horner_numpy, (coeffs, u), 50),
    ]
    for name, fast, slow, args, number in cases:
        t_numpy = bench(lambda: slow(*args), repeat, number)
        t_numba = bench(lambda: fast(*args), repeat, number) if fast is not None else float("nan")
        yield name, t_numba, t_numpy


def end_to_end(repeat: int):
    out = {}
    for backend, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, VFRAC_DISABLE_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, "-c", END_TO_END.format(repeat=repeat)],
            capture_output=True, text=True, env=env, check=True,
        )
        out[backend] = [float(x) for x in proc.stdout.split()]
    yield "vintegral (end to end)", out["numba"][0], out["numpy"][0]
    yield "vderiv_limit (end to end)", out["numba"][1], out["numpy"][1]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not kernels.HAVE_NUMBA:
        print("numba backend unavailable (VFRAC_DISABLE_NUMBA set or numba missing); numpy column only")
    print(f"{'kernel':28s} {'numba':>12s} {'numpy':>12s} {'speedup':>8s}")
    for name, t_fast, t_slow in [*kernel_rows(args.repeat), *end_to_end(args.repeat)]:
        ratio = t_slow / t_fast if t_fast == t_fast else float("nan")
        print(f"{name:28s} {t_fast * 1e6:10.1f}us {t_slow * 1e6:10.1f}us {ratio:7.1f}x")


if __name__ == "__main__":
    main()
