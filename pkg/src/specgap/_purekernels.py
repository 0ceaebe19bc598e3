"""Pure-Python/numpy versions of the compiled kernels.

Used when the extension is not built, or when ``SPECGAP_PURE_PYTHON=1``.
Every function here matches :mod:`specgap._kernels` exactly in contract.
"""
import numpy as np

_CHUNK = 256


def direct_dft(values, sign):
    values = np.ascontiguousarray(values, dtype=np.complex128)
    p = values.shape[0]
    tw = np.exp(sign * 2j * np.pi * np.arange(p) / p)
    n = np.arange(p)
    out = np.empty(p, dtype=np.complex128)
    for start in range(0, p, _CHUNK):
        a = np.arange(start, min(start + _CHUNK, p))
        idx = np.multiply.outer(a, n) % p
        out[a] = tw[idx] @ values
    return out


def direct_convolve(f, g):
    f = np.ascontiguousarray(f, dtype=np.complex128)
    g = np.ascontiguousarray(g, dtype=np.complex128)
    out = np.zeros(f.shape[0], dtype=np.complex128)
    for m in np.flatnonzero(f):
        out += f[m] * np.roll(g, m)
    return out


def pair_sum_counts(xs, ys, p):
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    sums = np.add.outer(xs, ys) % p
    return np.bincount(sums.ravel(), minlength=p).astype(np.int64)


def dilation_scan(rs, p, cap):
    rs = np.asarray(rs, dtype=np.int64)
    half = p // 2
    for start in range(1, p, 4096):
        m = np.arange(start, min(start + 4096, p), dtype=np.int64)
        ok = np.ones(m.shape[0], dtype=bool)
        for r in rs:
            c = (m * r) % p
            c = np.where(c > half, p - c, c)
            ok &= c <= cap
        hits = np.flatnonzero(ok)
        if hits.size:
            return int(m[hits[0]])
    return 0
