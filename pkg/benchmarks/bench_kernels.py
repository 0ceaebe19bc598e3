"""Time each kernel under every importable backend.

    python3 benchmarks/bench_kernels.py [--repeat N]

Also times numpy's FFT against the direct DFT for reference.
"""
import argparse
import timeit

import numpy as np

from specgap import kernels
from specgap.diophantine import dirichlet_cap


def cases(rng):
    for p in (257, 1031, 4099):
        x = rng.random(p) + 1j * rng.random(p)
        y = rng.random(p) + 1j * rng.random(p)
        yield f"direct_dft p={p}", lambda m, x=x: m.direct_dft(x, 1)
        yield f"direct_convolve p={p}", lambda m, x=x, y=y: m.direct_convolve(x, y)
    for p, n in ((4099, 500), (65537, 2000)):
        xs = rng.choice(p, n, replace=False).astype(np.int64)
        ys = rng.choice(p, n, replace=False).astype(np.int64)
        yield f"pair_sum_counts p={p} n={n}", lambda m, xs=xs, ys=ys, p=p: m.pair_sum_counts(xs, ys, p)
    for p, t in ((4099, 6), (65537, 8), (1000003, 6)):
        rs = rng.choice(p, t, replace=False).astype(np.int64)
        cap = dirichlet_cap(p, t)
        yield f"dilation_scan p={p} t={t}", lambda m, rs=rs, p=p, cap=cap: m.dilation_scan(rs, p, cap)


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10**5:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = kernels.backends()
    names = sorted(impls)
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s}" + "".join(f"{n:>14s}" for n in names) + ("   speedup" if len(names) > 1 else ""))
    for label, fn in cases(rng):
        times = {n: best_of(lambda n=n: fn(impls[n]), args.repeat) for n in names}
        row = f"{label:34s}" + "".join(f"{times[n] * 1e3:12.3f}ms" for n in names)
        if "cython" in times:
            row += f"   {times['python'] / times['cython']:7.2f}x"
        print(row)
    for p in (257, 4099):
        x = rng.random(p)
        t = best_of(lambda: np.fft.ifft(x), args.repeat)
        print(f"{'numpy fft p=' + str(p):34s}{t * 1e3:12.3f}ms")


if __name__ == "__main__":
    main()
