"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Workloads: root isolation on (0, 1) for the degree-240 5-cycle polynomial
of Model 2 (rescaled so all positive roots lie in the unit interval), exact
dyadic sign evaluation of that polynomial, and period detection over a
200 x 200 parameter grid.
"""

import argparse
import time
from fractions import Fraction

import numpy as np

from monodyn import kernels
from monodyn.models import cycle_poly_ints, model2

SCALE_BITS = 4  # positive cycle points lie below 2^4


def unit_poly(K=Fraction(3303, 1000), n=5):
    p = cycle_poly_ints(model2(K), n)
    # q(x) = p(16 x): roots of p in (0, 16) move into (0, 1).
    return [c << (SCALE_BITS * i) for i, c in enumerate(p)]


def grid():
    a = np.linspace(2.5, 5.0, 200)
    Kv = np.linspace(0.0, 3.0, 200)
    A, KK = np.meshgrid(a, Kv)
    A, KK = A.ravel(), KK.ravel()
    cs = (KK * A, 1 - 4.8 * KK, 1.8 * KK, -0.2 * KK)
    return cs, np.ones_like(A)


def _signs(poly):
    return [poly.sign_dyadic(i, 11) for i in range(1, 2001)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    q = unit_poly()
    (c0, c1, c2, c3), x0 = grid()
    work = {
        "descartes_unit (deg 240)": lambda k: k.descartes_unit(q),
        "IntPoly.sign_dyadic x2000": lambda k: _signs(k.IntPoly(q)),
        "cubic_periods (200x200)": lambda k: k.cubic_periods(c0, c1, c2, c3, x0, 2000, 256, 24, 1e-6, 1e6),
    }
    backends = kernels.available()
    print(f"{'workload':28s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in work.items():
        row = [best_of(lambda: fn(kernels.load(b)), args.repeat) for b in backends]
        line = f"{name:28s}" + "".join(f"{t:11.3f}s" for t in row)
        if len(row) > 1:
            line += f"{row[1] / row[0]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
