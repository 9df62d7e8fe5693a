"""Compare the compiled and pure kernels on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--prec 200]

Each workload clears the generator cache so that both backends redo the
same work.  Results are checked to agree before timings are reported.
"""

import argparse
import time

import numpy as np

from dmforms import kernels
from dmforms.algebra import FieldParams
from dmforms.basis import canonical_basis
from dmforms.forms import GENERATORS, delta_T, delta_W, eisenstein_ET


def raw_kernel(p=3, n=400, width=60, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(n, width), dtype=np.int64)
    b = rng.integers(0, p, size=(n, width), dtype=np.int64)
    return lambda: kernels.mul_trunc(a, b, n, p)


def structural(prec, field):
    def run():
        GENERATORS.clear()
        ET = eisenstein_ET(prec, field)
        return (ET ** (field.q - 1)).array, (delta_W(prec, field) * delta_T(prec, field)).array
    return run


def basis(field, imax=8, prec=100):
    def run():
        GENERATORS.clear()
        return [b.series.array for b in canonical_basis(4, 0, imax, prec, field)]
    return run


def _same(x, y):
    if isinstance(x, np.ndarray):
        return x.shape == y.shape and bool((x == y).all())
    return len(x) == len(y) and all(_same(a, b) for a, b in zip(x, y))


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--prec", type=int, default=200)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    q3, q9 = FieldParams(3), FieldParams(3, 2)
    workloads = [
        ("mul_trunc 400x60 mod 3", raw_kernel()),
        (f"E_T^2 vs Delta_W Delta_T, q=3, u^{args.prec}", structural(args.prec, q3)),
        ("E_T^8 vs Delta_W Delta_T, q=9, u^60", structural(60, q9)),
        ("basis (4,0) i<=8, q=3, u^100", basis(q3)),
    ]
    print(f"backends: {', '.join(backends)}")
    print(f"{'workload':44s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    old = kernels.BACKEND
    try:
        for name, fn in workloads:
            row, outs = [], []
            for b in backends:
                kernels.set_backend(b)
                t, out = best_of(fn, args.repeat)
                row.append(t)
                outs.append(out)
            if not all(_same(outs[0], o) for o in outs[1:]):
                raise SystemExit(f"backends disagree on {name!r}")
            speed = f"{row[backends.index('pure')] / row[0]:8.2f}x" if len(row) > 1 else ""
            print(f"{name:44s} " + " ".join(f"{t:9.4f}s" for t in row) + f"  {speed}")
    finally:
        kernels.set_backend(old)


if __name__ == "__main__":
    main()
